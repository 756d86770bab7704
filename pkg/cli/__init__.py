"""
Expression-language front end for the extensor calculus engine.
"""

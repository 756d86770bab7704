"""
Extensor calculus over an n-dimensional real vector space.

Modules are layered bottom-up: the multivector kernel, operator
representations, the operator calculus built on them, metric structures,
and Hodge duality.
"""

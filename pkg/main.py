#!/usr/bin/env python3
"""
Extensor calculator entry point.

    python main.py --dim 3 --eval "dual(e1)"
    python main.py --dim 2 --metric diag:1,-1      # interactive prompt
"""
import sys

from cli.runner import main

if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Delay/distance and delay/shaking robustness maps (fig2a, fig2b presets).

Sequential on one core these take tens of minutes; pass --workers N on a
bigger machine.
"""
import sys

from triwell.cli import main

if __name__ == "__main__":
    code = main(["scan", "--preset", "fig2a", *sys.argv[1:]])
    if code == 0:
        code = main(["scan", "--preset", "fig2b", *sys.argv[1:]])
    sys.exit(code)

#!/usr/bin/env python3
"""Waveguide splitter: full 2D run, coupled-channel cross-check, and the
exit-fraction sweeps (fig5 preset)."""
import sys

from triwell.cli import main

if __name__ == "__main__":
    for cmd in ("waveguide", "channels", "scan"):
        code = main([cmd, "--preset", "fig5", *sys.argv[1:]])
        if code != 0:
            sys.exit(code)
    sys.exit(0)

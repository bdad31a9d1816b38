#!/usr/bin/env python3
"""Tilt scans: efficiency vs (t_r, gamma) and the transport-vs-oscillation
comparison curves (fig3b, fig3c presets)."""
import sys

from triwell.cli import main

if __name__ == "__main__":
    code = main(["scan", "--preset", "fig3b", *sys.argv[1:]])
    if code == 0:
        code = main(["scan", "--preset", "fig3c", *sys.argv[1:]])
    sys.exit(code)

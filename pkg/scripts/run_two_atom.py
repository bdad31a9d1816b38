#!/usr/bin/env python3
"""Two-boson hole transport with 2D probability snapshots (fig4 preset)."""
import sys

from triwell.cli import main

if __name__ == "__main__":
    sys.exit(main(["two-atom", "--preset", "fig4", *sys.argv[1:]]))

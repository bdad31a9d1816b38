#!/usr/bin/env python3
"""Reference transport run: population histories, couplings, three-mode
comparison, and field snapshots for the fig1 preset."""
import sys

from triwell.cli import main

if __name__ == "__main__":
    sys.exit(main(["stirap", "--preset", "fig1", *sys.argv[1:]]))

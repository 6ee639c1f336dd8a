"""Aerial manipulator simulator: single entry point.

Usage:
    python run.py run [scenario.cfg] [--out runs/FOFTSMC.csv]
    python run.py compare [scenario.cfg] [--out runs/]
    python run.py validate [--suite all|frac|dynamics|kinematics]
"""
import sys

from harness import main

if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""
Script to run the extrinsic triples command-line toolkit.
"""

import sys

from app.main import main

if __name__ == "__main__":
    sys.exit(main())

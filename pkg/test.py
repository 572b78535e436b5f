#!/usr/bin/env python3
"""
Script to run the fast test suite with coverage; pass --slow to include slow tests.
"""

import sys
import subprocess
import os

def run_tests(include_slow: bool = False):
    """Run the test suite."""

    # Get the directory containing this script
    script_dir = os.path.dirname(os.path.abspath(__file__))

    # Change to project directory
    os.chdir(script_dir)

    # Run pytest with coverage
    cmd = [
        sys.executable, "-m", "pytest",
        "tests/",
        "-v",
        "--cov=app",
        "--cov-report=html",
        "--cov-report=term-missing",
        "--tb=short"
    ]
    if not include_slow:
        cmd[4:4] = ["-m", "not slow"]

    try:
        result = subprocess.run(cmd, check=True)
        print("\nAll tests passed")
        return result.returncode
    except subprocess.CalledProcessError as e:
        print(f"\nTests failed with exit code {e.returncode}")
        return e.returncode

if __name__ == "__main__":
    exit_code = run_tests(include_slow="--slow" in sys.argv[1:])
    sys.exit(exit_code)

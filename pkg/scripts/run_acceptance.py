#!/usr/bin/env python3
"""Run the acceptance suite and show the per-criterion PASS/FAIL lines.

Equivalent to: pytest tests/test_acceptance.py -v -s
"""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path


def main() -> int:
    repo = Path(__file__).resolve().parent.parent
    cmd = [sys.executable, "-m", "pytest", str(repo / "tests" / "test_acceptance.py"), "-v", "-s"]
    return subprocess.call(cmd)


if __name__ == "__main__":
    sys.exit(main())

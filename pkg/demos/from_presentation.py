"""Parse a presentation file, echo its canonical form and run every check on it.

    python3 demos/from_presentation.py [fixtures/2pt.alg]
"""

import sys
from pathlib import Path

from coloc.cli import run

DEFAULT = Path(__file__).resolve().parent.parent / "fixtures" / "2pt.alg"


if __name__ == "__main__":
    path = sys.argv[1] if len(sys.argv) > 1 else str(DEFAULT)
    code = run(["parse", path], sys.stdout, sys.stderr)
    if code == 0:
        print()
        code = run(["check", "all", path], sys.stdout, sys.stderr)
    sys.exit(code)

"""Print the direct-vs-closed-form CY grid as a table."""
from __future__ import annotations

import sys

from mesharc.cli import main

if __name__ == "__main__":
    sys.exit(main(["--format", "table", "crosscheck", *sys.argv[1:]]))

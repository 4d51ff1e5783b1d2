"""Run every closed-form sweep against the orbit solver in characteristics 0 and 2."""
from __future__ import annotations

import json
import sys

from click.testing import CliRunner

from mesharc.cli import cli


def main(nmax: int = 12, smax: int = 12) -> int:
    runner = CliRunner()
    bad = 0
    for kind in ("t2A", "t2D", "t2E6", "t1"):
        for char in (0, 2):
            res = runner.invoke(cli, ["sweep", "--kind", kind, "--nmax", str(nmax), "--smax", str(smax),
                                      "--char", str(char)], standalone_mode=False)
            if res.exception:
                raise res.exception
            r = json.loads(res.output)["result"]
            bad += r["mismatches"]
            print(f"{kind:5s} char {char}: {len(r['rows']):4d} rows, {r['mismatches']} mismatches")
    return 1 if bad else 0


if __name__ == "__main__":
    args = [int(a) for a in sys.argv[1:3]]
    sys.exit(main(*args))

"""Regenerate tests/golden/<name>.json from the corpus through the command line.

Gauss-Manin specs run with --verify-periods and are only written when the
numeric period check passes.
"""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"
PERIOD_TOL = 1e-8


def cli_result(path: Path) -> dict:
    kind = json.loads(path.read_text())["kind"]
    cmd = [sys.executable, "-m", "leafcut.cli", kind, "--spec", str(path)]
    if kind == "gaussmanin":
        cmd.append("--verify-periods")
    out = subprocess.run(cmd, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)["result"]


def main() -> int:
    GOLDEN.mkdir(exist_ok=True)
    for path in sorted(CORPUS.glob("*.json")):
        result = cli_result(path)
        check = result.get("period_check")
        if check is not None and not (check["max_residual"] is not None and check["max_residual"] < PERIOD_TOL):
            print(f"{path.stem}: period check failed, golden not written", file=sys.stderr)
            return 1
        (GOLDEN / path.name).write_text(json.dumps(result, sort_keys=True, indent=2) + "\n")
        print(path.stem)
    return 0


if __name__ == "__main__":
    sys.exit(main())

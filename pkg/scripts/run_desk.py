"""Generate the desk data, run the desk experiment and print the AUC tables."""

import subprocess
import sys
from pathlib import Path

from ocens.harness.cli import main as ocens_main

ROOT = Path(__file__).resolve().parent.parent


def main():
    subprocess.run([sys.executable, str(ROOT / "scripts" / "make_desk_data.py")], check=True)
    code = ocens_main(["run", str(ROOT / "configs" / "desk.ini")])
    tables = ROOT / "results" / "desk" / "tables.md"
    if tables.exists():
        print(tables.read_text())
    return code


if __name__ == "__main__":
    sys.exit(main())

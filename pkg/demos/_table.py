"""Locate (or build) the ladder table the demos share."""
import os
import sys
from pathlib import Path

from zlad.ladder import build_table, load_table, save_table

CACHE = Path(__file__).resolve().parents[1] / ".cache" / "ladder-table-2e5.csv"


def get_table():
    path = Path(os.environ.get("ZLAD_TABLE", CACHE))
    if path.exists():
        return load_table(path)
    print(f"building ladder table to 2e5 into {path} (about 1.5 min)...", file=sys.stderr)
    table = build_table(2e5)
    path.parent.mkdir(exist_ok=True)
    save_table(table, path)
    return table

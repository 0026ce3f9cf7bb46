#!/usr/bin/env python3
"""Desk evidence for the as-printed registry variants.

For every as-printed record this sums the series (or evaluates the sides)
next to its corrected sibling, so the discrepancy pattern is visible at a
glance: the three start-index variants miss exactly 1, the shift variants
match the shift-2 reading, the sign variants differ by twice a surd, and
the shifted-down particular is off by the factor 8.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from fibcat import engine  # noqa: E402
from fibcat.seriesdsl import builtin_registry  # noqa: E402


def main() -> int:
    records = {r.id: r for r in builtin_registry()}
    printed = sorted((r for r in records.values() if r.as_printed), key=lambda r: r.id)
    for record in printed:
        sibling_id = record.id.rsplit(".printed", 1)[0]
        rows = engine.verify_identity(record)
        fixed = engine.verify_identity(records[sibling_id])
        print(f"{record.id}")
        print(f"  as printed : {rows[0].status}  |lhs-rhs| = {rows[0].abs_diff}")
        print(f"  corrected  : {fixed[0].status}  |lhs-rhs| = {fixed[0].abs_diff:.2E}"
              f"  ({sibling_id})")
        if record.note:
            print(f"  note       : {record.note}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

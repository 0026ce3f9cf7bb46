#!/usr/bin/env python3
"""Print each named constant from its two independent routes side by side.

Usage:
    python scripts/crosscheck_constants.py [digits]
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from fibcat import arbreal as ar  # noqa: E402
from fibcat.arbreal import core  # noqa: E402


def main() -> int:
    digits = int(sys.argv[1]) if len(sys.argv) > 1 else 50
    ctx = core.context(digits + 10)
    rows = [
        ("pi", "machin arctans", ar.const_pi, "gauss arctans", ar.const_pi_check),
        ("G", "binomial series", ar.const_catalan_g, "clausen integral", ar.catalan_g_check),
        ("zeta(3)", "binomial series", ar.const_zeta3, "sum + integral tail", ar.zeta3_check),
        ("ln(alpha)", "atanh series", ar.ln_alpha, "stdlib decimal ln", ar.ln_alpha_check),
    ]
    worst = None
    for name, how_a, fa, how_b, fb in rows:
        a, b = fa(digits), fb(digits)
        gap = ctx.subtract(a, b).copy_abs()
        worst = gap if worst is None or gap > worst else worst
        print(f"{name:10s} {how_a:18s} {a}")
        print(f"{'':10s} {how_b:18s} {b}")
        print(f"{'':10s} {'gap':18s} {gap}")
    print(f"worst gap at {digits} digits: {worst}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

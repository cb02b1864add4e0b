#!/usr/bin/env python3
"""Print every quadratic relation instance for small degrees, both parities.

The output is the audit trail for the relation transcription: each line is
one source word (the doubled spoke is the repeated letter) with the emitted
integer tree vector.  Degree 3 shows the minimal four-term instances; the
quotient summary at the end reproduces the expected table rows.
"""

import argparse
import math
import sys

from jacobitrees import braidlie
from jacobitrees.intlinalg import snf_from_rows
from jacobitrees.lie import to_lyndon_coordinates


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=4)
    args = ap.parse_args()

    for n in range(3, args.max_n + 1):
        for parity, model in (
            ("odd", braidlie.MODEL_ODD_DIM),
            ("even", braidlie.MODEL_EVEN_DIM),
        ):
            print(f"== degree {n}, {parity}")
            rows = []
            for w in braidlie.source_words(n):
                v = braidlie.doubling_image(w, n, model)
                print(f"  {w}: {v.serialize() if not v.is_zero else '0'}")
                if v.is_zero:
                    continue
                coords = to_lyndon_coordinates(v, n)
                row = {j: c for j, c in enumerate(coords) if c}
                if row:
                    rows.append(row)
            res = snf_from_rows(rows, math.factorial(n - 1))
            print(
                f"  quotient: rank {res.free_rank}, "
                f"torsion {res.torsion or 'none'}"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())

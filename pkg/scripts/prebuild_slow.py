"""Residuals of the slow_conditional identities at M = 1e5, 1e6, 1e7.

The output fixes the loose tolerances stored in ``identities.PREBUILD``.
Run from the repository root: ``python3 scripts/prebuild_slow.py``.
"""

import argparse
import json

from zetalaurent import identities as I


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--exponents", type=int, nargs="+", default=[5, 6, 7])
    args = ap.parse_args()
    rows = {}
    for spec in I.list_identities():
        if spec.convergence_class is not I.ConvergenceClass.SLOW:
            continue
        for p in I.parameter_points(spec):
            key = f"{spec.id}{json.dumps(p, sort_keys=True)}"
            rows[key] = []
            for e in args.exponents:
                r = I.run_identity(spec.id, p, truncation=10**e, tol_scale=float("inf"))
                rows[key].append(r.residual)
            print(key, " ".join(f"{x:+.2e}" for x in rows[key]), flush=True)


if __name__ == "__main__":
    main()

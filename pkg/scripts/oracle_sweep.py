"""Compare engine coefficients with brute-force ideal counts over a list of catalog specs."""

import argparse

from ideal_zeta.exactalg import series_expand, specialize
from ideal_zeta.oracle import BudgetExceeded, catalog_table, central_split, hnf_ideal_count, structural_ideal_count
from ideal_zeta.zeta import zeta_ideal

DEFAULT_SPECS = ["g1,1", "h1", "f2,3", "g2,1", "g2,2", "h2", "g1,1 x Z^1", "f2,3 x g1,1"]


def sweep(specs, primes, degree, budget):
    bad = 0
    for spec in specs:
        s = series_expand(zeta_ideal(spec), "t", degree)
        for p in primes:
            table = catalog_table(spec, p)
            A = central_split(table)[1]
            row = []
            for k, c in enumerate(s.coeffs):
                e = specialize(c, {"q": p}).constant_value()
                try:
                    o = structural_ideal_count(table, A, p, k, budget=budget) if A else hnf_ideal_count(table, p, k, budget=budget)
                except BudgetExceeded:
                    row.append(f"{e}/?")
                    break
                row.append(str(e) if e == o else f"{e}!={o}")
                bad += e != o
            print(f"{spec:>14} p={p}: {' '.join(row)}")
    return bad


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("specs", nargs="*", default=DEFAULT_SPECS)
    ap.add_argument("--primes", default="2,3")
    ap.add_argument("--degree", type=int, default=3)
    ap.add_argument("--budget", type=int, default=10**6)
    args = ap.parse_args()
    bad = sweep(args.specs, [int(p) for p in args.primes.split(",")], args.degree, args.budget)
    print("all match" if not bad else f"{bad} mismatches")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()

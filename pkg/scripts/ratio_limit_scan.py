"""Scan A'_{n+1}/A'_n over the H-family grid and fit the 1/n correction.

For regular parameters the ratio behaves like 2(1 + s/n); the fitted s shows
how far n = 200 is from the limit. Where (alpha+beta+1)/2 - gamma is a
nonpositive integer the ratio is exactly 1.
"""

import argparse
from fractions import Fraction
from itertools import product

from cflab.cf_engine import h_family_poles, ratio_limit_check

GAMMAS = (Fraction(-3, 2), Fraction(-1, 2), Fraction(0), Fraction(1), Fraction(2), Fraction(3))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[200, 800])
    ap.add_argument("--tol", type=float, default=1e-2)
    args = ap.parse_args()

    within = total = 0
    print(f"{'alpha':>5} {'beta':>5} {'gamma':>6} " + " ".join(f"{'r(' + str(n) + ')':>12}" for n in args.n)
          + f" {'fitted s':>10}")
    for (a, b), g in product(product((0, 1, 2, 4), repeat=2), GAMMAS):
        if h_family_poles(Fraction(a), Fraction(b), g):
            continue
        rs = [float(ratio_limit_check(a, b, g, n_max=n).value.to_fraction()) for n in args.n]
        s = args.n[-1] * (rs[-1] / 2 - 1)
        total += 1
        within += abs(rs[0] - 2) < args.tol
        print(f"{a:>5} {b:>5} {str(g):>6} " + " ".join(f"{r:12.6f}" for r in rs) + f" {s:10.3f}")
    print(f"{within}/{total} points within {args.tol} of 2 at n = {args.n[0]}")


if __name__ == "__main__":
    main()

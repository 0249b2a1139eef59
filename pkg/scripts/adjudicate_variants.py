"""Compare each catalogued closed form with its recorded alternates."""

import argparse

from cflab.bigfloat import agree_digits
from cflab.cf_engine import eval_cf
from cflab.constants import eval_closed_form
from cflab.registry import load_registry


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--digits", type=int, default=30)
    args = ap.parse_args()

    for e in load_registry():
        if not e.alt_rhs:
            continue
        cf = eval_cf(e.cf, args.digits, max_iter=10**6)
        print(f"{e.id}: CF = {cf.to_decimal(args.digits)}")
        print(f"   catalogued {str(e.rhs):<40} {agree_digits(cf, eval_closed_form(e.rhs, args.digits + 5)):>3} digits")
        for v in e.alt_rhs:
            d = agree_digits(cf, eval_closed_form(v.rhs, args.digits + 5))
            print(f"   {v.label:<10} {str(v.rhs):<40} {d:>3} digits  ({v.why})")


if __name__ == "__main__":
    main()

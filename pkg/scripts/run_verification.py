"""Verify every catalogued identity and write a JSON report."""

import argparse
import time

from cflab.registry import load_registry, reports_json, verify_all


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--digits", type=int, default=20)
    ap.add_argument("--parallel", type=int, default=1)
    ap.add_argument("--out", default="verification.json")
    args = ap.parse_args()

    t0 = time.perf_counter()
    reports, summary = verify_all(load_registry(), args.digits, args.parallel)
    for r in reports:
        flag = "PASS" if r.passed else "FAIL"
        print(f"{flag} {r.id:<9} {r.matched_digits:>3} digits  {', '.join(r.methods_used)}")
        for a in r.anomalies:
            print(f"     {a}")
        if r.error:
            print(f"     error: {r.error}")
    print(f"{summary['passed']}/{summary['total']} passed at {args.digits} digits "
          f"in {time.perf_counter() - t0:.1f}s")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(reports_json(reports, summary))


if __name__ == "__main__":
    main()

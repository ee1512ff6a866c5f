"""Run every built-in scenario and print its check table.

    python scripts/run_scenarios.py [--cross-check]
"""
import argparse
import sys
import time

from hopelogic.scenarios import builtin_scenarios


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cross-check", action="store_true", help="also evaluate through the translation")
    args = ap.parse_args()
    failed = 0
    for s in builtin_scenarios():
        t0 = time.perf_counter()
        res = s.run(cross_check=args.cross_check)
        ms = 1000 * (time.perf_counter() - t0)
        print(f"== {s.name} ({len(res.outcomes)} checks, {ms:.1f} ms): {'PASS' if res.ok else 'FAIL'}")
        print(f"   {s.summary}")
        print(res.table())
        failed += not res.ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

"""Print per-block subfunction counts of element distinctness for k = 2 and 4."""

import argparse
import time

from algtn import distinct as ed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ks", default="2,4")
    args = ap.parse_args()
    print(f"{'k':>3} {'n':>4} {'counts':>24} {'oracle':>24} ok  seconds")
    for k in (int(s) for s in args.ks.split(",")):
        t = time.perf_counter()
        r = ed.check_block_counts(k)
        print(f"{r.k:>3} {r.n:>4} {str(r.counts):>24} {str(r.oracle_counts):>24} {str(r.ok):5} {time.perf_counter() - t:.2f}")


if __name__ == "__main__":
    main()

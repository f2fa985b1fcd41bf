"""Covering radius table for a few forbidden-pattern sets, game solver vs brute force.

Usage: python3 scripts/covering_radius_table.py [--max-n 12] [--forbidden 11 "00,11"]
"""

import argparse
import time

from mpg_duel.constrained_codes import ForbiddenSet, allowed_words, brute_covering_radius, covering_radius


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--forbidden", nargs="+", default=["", "1", "11", "00,11", "111"])
    args = ap.parse_args()

    for text in args.forbidden:
        F = ForbiddenSet.parse(text)
        print(f"F = {{{text}}}  (k={F.k})")
        print(f"  {'n':>3} {'words':>6} {'game':>5} {'brute':>6} {'ms':>8}  note")
        for n in range(max(F.k - 1, 0), args.max_n + 1):
            words = len(allowed_words(F, n))
            if not words:
                continue
            t0 = time.perf_counter()
            res = covering_radius(F, n)
            ms = 1000 * (time.perf_counter() - t0)
            brute = brute_covering_radius(F, n).radius
            print(f"  {n:>3} {words:>6} {res.radius:>5} {brute:>6} {ms:>8.1f}  {res.note or ''}")
        print()


if __name__ == "__main__":
    main()

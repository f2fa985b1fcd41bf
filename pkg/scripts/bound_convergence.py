"""Width of the certified non-alternating bounds as the round budget grows.

Usage: python3 scripts/bound_convergence.py [--budgets 3 6 9 12] [--seed 31]
"""

import argparse

from mpg_duel.asymptotic_solver import value_alt_infinite, value_nonalt_bounds
from mpg_duel.gallery import chase_instance
from mpg_duel.graph_core import StartSpec, product_components
from mpg_duel.random_instances import RandomSpec, random_suite


def cases(seed: int, count: int):
    yield "chase", chase_instance(), StartSpec.edges("WW", "WW")
    for i, inst in enumerate(random_suite(seed=seed, count=count, spec=RandomSpec(irreducible=True))):
        e, f = product_components(inst)[0].members[0]
        yield f"random{i}", inst, StartSpec.edges(e, f)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budgets", type=int, nargs="+", default=[3, 6, 9, 12])
    ap.add_argument("--seed", type=int, default=31)
    ap.add_argument("--count", type=int, default=5)
    args = ap.parse_args()

    print(f"{'instance':<10} {'budget':>6} {'lower':>10} {'upper':>10} {'width':>8} {'C':>6} {'alt inf':>9}  lower source")
    for name, inst, start in cases(args.seed, args.count):
        alt = value_alt_infinite(inst, start).value
        for n in args.budgets:
            b = value_nonalt_bounds(inst, start, n)
            src = (b.sources or {}).get("lower_source", "-")
            print(
                f"{name:<10} {n:>6} {float(b.lower):>10.4f} {float(b.upper):>10.4f} "
                f"{float(b.width):>8.4f} {str(b.constant_C):>6} {float(alt):>9.4f}  {src}"
            )


if __name__ == "__main__":
    main()

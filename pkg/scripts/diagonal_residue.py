"""Diagonal line integral on Re s = +eps and -eps; their difference is the residue at s = 0.

Usage: python scripts/diagonal_residue.py [--Q 100] [--eps 0.05 0.1 0.2]
"""
import argparse

from lmoments.lfunction import ShiftPair
from lmoments.moments import FamilySpec, diagonal_line_integral, diagonal_residue, main_term_executed
from lmoments.transforms import ContourSpec


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--Q", type=float, default=100.0)
    ap.add_argument("--h", type=int, default=1)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--eps", type=float, nargs="+", default=[0.05, 0.1, 0.2])
    args = ap.parse_args(argv)

    spec = FamilySpec(args.Q, ShiftPair.auto(args.Q)).with_twist(args.h, args.k)
    res = diagonal_residue(spec)
    print(f"residue at s=0        {res:.12g}")
    print(f"executed main term    {main_term_executed(spec):.12g}")
    print(f"{'eps':>6} {'I(+eps)':>28} {'|I(+eps)-I(-eps)-res|':>24}")
    for eps in args.eps:
        plus = diagonal_line_integral(spec, ContourSpec(eps, 80.0, 0.1))
        minus = diagonal_line_integral(spec, ContourSpec(-eps, 80.0, 0.1))
        print(f"{eps:6.3f} {plus:28.12g} {abs(plus - minus - res):24.3e}")


if __name__ == "__main__":
    main()

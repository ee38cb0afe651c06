"""Table of Bott vanishing in the local model: result, dz-degree bound and runtime.

    python scripts/bott_table.py --max-q 2
"""
import argparse
import itertools

from folichar.simplicial import verify_bott
from folichar.suites import poly_label


def chern_monomials(q, degree):
    """Products c_{i1} ... c_{ir} with i1 + ... + ir = degree."""
    for r in range(1, degree + 1):
        for combo in itertools.combinations_with_replacement(range(1, q + 1), r):
            if sum(combo) == degree:
                yield combo


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-q", type=int, default=2)
    ap.add_argument("--max-level", type=int, default=2)
    args = ap.parse_args()
    print(f"{'q':>2s} {'P':>8s} {'k':>2s} {'deg':>4s} {'zero':>5s} {'min dz':>6s} {'terms':>6s} {'time':>7s}")
    for q in range(1, args.max_q + 1):
        polys = sorted({p for d in range(q, q + 2) for p in chern_monomials(q, d)})
        for poly in polys:
            for k in range(args.max_level + 1):
                r = verify_bott(q, k, poly)
                print(f"{q:2d} {poly_label(poly):>8s} {k:2d} {r.deg:4d} {str(r.vanishes):>5s} "
                      f"{str(r.min_dz_degree):>6s} {r.surviving_terms:6d} {r.runtime:7.2f}")


if __name__ == "__main__":
    main()

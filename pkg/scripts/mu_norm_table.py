"""Table of mu_n estimates (sampled, exact-vertex, rigorous bound) for a few seminorms."""

import argparse

from picardevol import diagonal_algebra, matrix_algebra, matrix_opnorm, max_coeff, mu_norm, weighted_coeff
from picardevol.errors import SeminormError


def cases():
    m2 = matrix_algebra(2)
    d2 = diagonal_algebra(2)
    yield "M2 opnorm", matrix_opnorm(m2)
    yield "M2 max-coeff", max_coeff(m2)
    yield "M2 weighted (1, .25, 4, 1)", weighted_coeff(m2, [1.0, 0.25, 4.0, 1.0])
    yield "diag2 max-coeff", max_coeff(d2)
    yield "diag2 weighted (1, .5)", weighted_coeff(d2, [1.0, 0.5])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"{'seminorm':<28} n  {'sampled':>10} {'exact':>10} {'bound':>10}")
    for name, q in cases():
        for n in range(1, args.max_n + 1):
            row = [mu_norm(q, q, n, "sampled", samples=args.samples, seed=args.seed).lower]
            for mode in ("exact-vertex", "bound"):
                try:
                    row.append(mu_norm(q, q, n, mode).upper)
                except SeminormError:
                    row.append(float("nan"))
            print(f"{name:<28} {n}  " + " ".join(f"{v:10.4f}" for v in row))


if __name__ == "__main__":
    main()

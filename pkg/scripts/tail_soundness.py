"""Observed Picard increments against the certified tail bound.

For random M2 curves, records max over n of ||eta_{N+k} - eta_N||_{C^1} / bound(N).
Ratios above 1 would be violations.
"""

import argparse

import numpy as np

from picardevol import (PolyCurve, certify_star, curve_norm, matrix_algebra, matrix_opnorm,
                        picard_iterates, remainder_bound)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--curves", type=int, default=200)
    ap.add_argument("--max-norm", type=float, default=1.5)
    ap.add_argument("--lookahead", type=int, default=5)
    ap.add_argument("--depth", type=int, default=15)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    a = matrix_algebra(2)
    p = matrix_opnorm(a)
    cert = certify_star(p, [p])
    rng = np.random.default_rng(args.seed)
    ratios = np.zeros((args.curves, args.depth + 1))
    for i in range(args.curves):
        gamma = PolyCurve.polynomial(a, rng.standard_normal((int(rng.integers(1, 5)), a.dim)))
        gamma = gamma * (rng.uniform(0.1, args.max_norm) / curve_norm(gamma, 0, p, certified=True))
        R = curve_norm(gamma, 0, p, certified=True)
        its = picard_iterates(gamma, args.depth + args.lookahead, degree_cap=None).iterates
        for n in range(args.depth + 1):
            obs = curve_norm(its[n + args.lookahead] - its[n], 1, p)
            ratios[i, n] = obs / remainder_bound(cert, R, n)
    print(f"{args.curves} curves, violations: {int(np.sum(ratios > 1))}")
    print(" N  max ratio  median ratio")
    for n in range(args.depth + 1):
        print(f"{n:2d}  {ratios[:, n].max():9.3e}  {np.median(ratios[:, n]):12.3e}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Locate the separability boundary on the two-qutrit line beta = 2*alpha.

Bisects the line with the numeric verdict and compares the answer to the
swap-expectation criterion's exact -3/16.  Entangled probes are settled by
the partial-transpose test, separable ones by a distance certificate, so
each step is cheap.
"""

import argparse

from isoqudit import Point, SolverConfig, WERNER_SEPARABLE_ALPHA, is_separable


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=float, default=-0.35)
    ap.add_argument("--hi", type=float, default=-0.05)
    ap.add_argument("--width", type=float, default=1e-3, help="final bracket width")
    ap.add_argument("--seed", type=int, default=61)
    args = ap.parse_args()

    cfg = SolverConfig(inner_restarts=8, max_outer=2000, tol_converge=1e-10,
                       rng_seed=args.seed)

    def separable(alpha: float) -> bool:
        verdict = is_separable(2, Point(alpha, 2 * alpha), cfg, solve_npt=False)
        if verdict.separable is None:
            raise RuntimeError(f"no verdict at alpha={alpha}; raise the budget")
        return verdict.separable

    lo, hi = args.lo, args.hi
    assert not separable(lo), f"expected an entangled left bracket at {lo}"
    assert separable(hi), f"expected a separable right bracket at {hi}"
    while hi - lo > args.width:
        mid = 0.5 * (lo + hi)
        label = "separable" if separable(mid) else "entangled"
        print(f"alpha = {mid:+.6f}  {label}")
        if label == "separable":
            hi = mid
        else:
            lo = mid
    estimate = 0.5 * (lo + hi)
    print(f"boundary in [{lo:.6f}, {hi:.6f}] -> {estimate:.6f} "
          f"(exact {WERNER_SEPARABLE_ALPHA} = {WERNER_SEPARABLE_ALPHA:.6f})")


if __name__ == "__main__":
    main()

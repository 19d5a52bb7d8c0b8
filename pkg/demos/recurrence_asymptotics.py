"""Minimal solutions of the boundary recurrence and their predicted decay.

The three-term recurrence behind the secular equation has one solution
that decays and one that grows; only the decaying (minimal) one is
physical.  Backward recursion isolates it, a split mantissa/exponent
representation keeps thousands of steps overflow-free, and the classical
second-order difference-equation asymptotics predict the step ratio in
closed form.  A summed identity gives an independent consistency check on
forward runs, and the secular defect shows the spectral dip.
"""

from __future__ import annotations

import numpy as np

from speclab import (
    birkhoff_adams_eval,
    identity_residual,
    iterate_forward,
    minimal_solution_backward,
    secular_defect,
    secular_function,
)


def decay_vs_prediction() -> None:
    print("ratio of consecutive minimal-solution terms vs closed form:")
    for mu, lam in ((1.5, 0.3), (2.0, 0.2 + 0.1j), (5.0, 0.3)):
        sol = minimal_solution_backward(mu, lam, 10_001)
        ba = birkhoff_adams_eval(mu, lam)
        idx = ba.minimal_index()
        for n in (10, 100, 1000, 9999):
            got = sol.ratio(n - 1)
            want = ba.predicted_ratio(idx, n - 1)
            print(
                f"  mu={mu:3} lam={lam}: n={n:5d}  "
                f"|ratio/predicted - 1| = {abs(got / want - 1.0):.2e}"
            )


def identity_check() -> None:
    print("\nsummed identity on forward runs (should be ~1e-13 or below):")
    for mu, lam in ((0.5, 1.0j), (1.5, 0.3 + 0.1j), (2.0, 1.0j)):
        sol = iterate_forward(mu, lam, 1.0, 1000)
        print(f"  mu={mu} lam={lam}: residual = {identity_residual(sol, 999).residual:.2e}")


def spectral_dip() -> None:
    print("\nsecular function along real lambda for mu = sqrt(2):")
    mu = float(np.sqrt(2.0))
    grid = np.linspace(0.40, 0.49, 10)
    for lam in grid:
        val = secular_function(mu, float(lam), 200)
        print(f"  lambda = {lam:.3f}: {val.real:+.4f}")
    root = 0.4754122643107317
    print(f"  at the root {root}: defect = {secular_defect(mu, root, 200):.2e}")
    print(f"  off the real axis (lambda = i): defect = {secular_defect(mu, 1.0j, 200):.3f}")


if __name__ == "__main__":
    decay_vs_prediction()
    identity_check()
    spectral_dip()

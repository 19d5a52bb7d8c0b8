"""Tour of the coupling layer: from raw parameters to branch weights.

A contact interaction is specified by two real strengths and one complex
cross term.  Everything downstream — which Jacobi branches exist, their
weights, and whether each branch is sub- or supercritical — is algebra on
those three numbers.  This script walks a few representative couplings
through ``derive`` and ``classify`` and then traces the critical surface
at fixed cross term.
"""

from __future__ import annotations

import math

from speclab import CouplingParams, branch_mus, classify, critical_alpha, derive

POINTS = [
    CouplingParams(1.0, 0.0),            # pure delta
    CouplingParams(1.0, 1.0),            # delta plus delta'
    CouplingParams(1.4, 1.0),            # same shape, stronger
    CouplingParams(0.5, 0.0, 0.2 + 0.1j),  # cross term only partner
    CouplingParams(1.0, 4.0, 0.5),       # strong derivative coupling
]


def show_point(p: CouplingParams) -> None:
    d = derive(p)
    print(f"\n(alpha, beta, gamma) = ({p.alpha}, {p.beta}, {p.gamma})")
    print(f"  matrix eigenvalues : {d.sigma_eig_plus:.6g}, {d.sigma_eig_minus:.6g}")
    weights = ", ".join(
        f"{branch.value} -> {'inf (decoupled)' if math.isinf(mu) else f'{mu:.6g}'}"
        for branch, mu in branch_mus(p)
    )
    print(f"  branch weights     : {weights}")
    for c in classify(p):
        print(f"  {c.branch.value:>8}: mu = {c.mu:.6g} -> {c.kind.value}")


def trace_surface() -> None:
    print("\nCritical line at gamma = 0 (alpha_c should be sqrt(2) for every beta):")
    for beta in (0.5, 1.0, 2.0, 2.0 * math.sqrt(2.0)):
        print(f"  beta = {beta:.4g}: alpha_c = {critical_alpha(beta, 0.0):.15g}")
    print("\nWith a cross term the line bends (gamma = 0.8):")
    for beta in (0.5, 1.0, 2.0):
        ac = critical_alpha(beta, 0.8)
        kinds_below = {c.kind.value for c in classify(CouplingParams(ac - 1e-6, beta, 0.8))}
        kinds_above = {c.kind.value for c in classify(CouplingParams(ac + 1e-6, beta, 0.8))}
        print(f"  beta = {beta:.4g}: alpha_c = {ac:.10g}  "
              f"below={sorted(kinds_below)} above={sorted(kinds_above)}")


if __name__ == "__main__":
    for p in POINTS:
        show_point(p)
    trace_surface()

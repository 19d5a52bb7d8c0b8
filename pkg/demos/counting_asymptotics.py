"""Near-critical eigenvalue counting against the closed-form prediction.

Just above unit weight the reference operator keeps only finitely many
eigenvalues above zero, and their number diverges like
1 / (4 * sqrt(2) * sqrt(mu - 1)) as the weight approaches one from above.
Counts are integers and the law is asymptotic, so agreement is judged by
the trend of count/prediction, not point by point.
"""

from __future__ import annotations

from speclab import count_asymptotics_curve

MU_VALUES = [1.05, 1.02, 1.005, 1.002, 1.0005, 1.0002]


def main() -> None:
    rows = count_asymptotics_curve(MU_VALUES)
    print(f"{'mu - 1':>10} {'counted':>8} {'predicted':>10} {'ratio':>8}")
    for r in rows:
        print(f"{r.mu - 1.0:10.4g} {r.counted:8d} {r.predicted:10.3f} {r.ratio:8.3f}")
    first, last = rows[0], rows[-1]
    print(
        f"\n|ratio - 1| moves from {abs(first.ratio - 1.0):.3f} "
        f"to {abs(last.ratio - 1.0):.3f} along the grid."
    )


if __name__ == "__main__":
    main()

"""Three-term recurrence machinery on the oscillator mode lattice.

Solutions C = (C_0, C_1, ...) of

    d(n+1)*C_{n+1} + 2*mu*sqrt(n+1/2)*zeta_n(lam)*C_n + d(n)*C_{n-1} = 0,
    d(n) = sqrt(n) * (n^2 - 1/4)^(1/4),   d(0) = 0,

encode square-integrable eigenfunction candidates of the underlying
operator; the n = 0 row acts as the boundary condition for forward
iteration.  Here zeta_n(lam) = sqrt(n + 1/2 - lam) on the branch with
Re zeta > 0 and Im zeta * Im lam < 0, cut along [n + 1/2, inf).

Solutions can grow geometrically, so every sequence is stored in split
form: a complex mantissa per index plus a per-index log2 scale recorded
by the running rescaling accumulator (the true value is
``values[n] * 2**log2_scale[n]``).  Working magnitudes are rescaled
whenever they leave [2^-512, 2^512]; ratios, residuals and defects are
computed scale-free and never overflow.

Large-n behaviour follows the standard second-order difference-equation
asymptotics for x(n+1) + x(n-1) + (a0 + a1/n) x(n) + ... = 0: with
roots lam+- of t^2 + a0 t + b0 and exponents d+- the two basis
solutions behave like lam+-^n * n^(d+-); the degenerate root case
switches to exp(+-delta*sqrt(n)) * n^kappa.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BranchCutError,
    InvalidParametersError,
    NoDominanceSplitError,
    NonConvergenceError,
)

__all__ = [
    "zeta",
    "zeta_array",
    "coupling_weight",
    "coupling_weights",
    "RecurrenceSolution",
    "iterate_forward",
    "minimal_solution_backward",
    "BirkhoffAdamsParams",
    "birkhoff_adams_eval",
    "IdentityCheck",
    "identity_residual",
    "secular_function",
    "secular_defect",
]

_RESCALE_HI = 2.0**512
_RESCALE_LO = 2.0**-512


def _validate_lam(lam: complex, n_min: int = 0) -> complex:
    lam = complex(lam)
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        raise InvalidParametersError("spectral parameter must be finite")
    if lam.imag == 0.0 and lam.real >= n_min + 0.5:
        raise BranchCutError(
            f"real spectral parameter {lam.real} lies on the branch cut "
            f"[{n_min + 0.5}, inf)"
        )
    return lam


def zeta(n: int, lam: complex) -> complex:
    """Branch-correct sqrt(n + 1/2 - lam).

    Principal square root, negated if needed so that Re zeta > 0; for
    nonreal lam the sign convention Im zeta * Im lam < 0 follows
    automatically.  Real lam >= n + 1/2 sits on the cut and is rejected.
    """
    if n < 0:
        raise InvalidParametersError("mode index must be nonnegative")
    lam = _validate_lam(lam, n_min=n)
    w = (n + 0.5) - lam
    if lam.imag == 0.0:
        return complex(math.sqrt(w.real), 0.0)
    z = cmath.sqrt(w)
    if z.real < 0.0:
        z = -z
    if not (z.real > 0.0 and z.imag * lam.imag < 0.0):
        raise RuntimeError(
            f"branch conditions failed for zeta({n}, {lam}): got {z}"
        )
    return z


def zeta_array(ns: np.ndarray, lam: complex) -> np.ndarray:
    """Vectorised :func:`zeta` over an index array."""
    ns = np.asarray(ns)
    if ns.size == 0:
        return np.zeros(0, dtype=complex)
    if np.any(ns < 0):
        raise InvalidParametersError("mode indices must be nonnegative")
    lam = _validate_lam(lam, n_min=int(np.min(ns)))
    z = np.sqrt((ns + 0.5) - lam + 0j)
    np.negative(z, where=z.real < 0.0, out=z)
    if not np.all(z.real > 0.0):
        raise RuntimeError("branch conditions failed in zeta_array")
    if lam.imag != 0.0 and not np.all(z.imag * lam.imag < 0.0):
        raise RuntimeError("branch conditions failed in zeta_array")
    return z


def coupling_weight(n: int) -> float:
    """Offdiagonal weight d(n) = sqrt(n) * (n^2 - 1/4)^(1/4) for n >= 1."""
    if n < 1:
        raise InvalidParametersError("coupling weight defined for n >= 1")
    return math.sqrt(n) * (n * n - 0.25) ** 0.25


def coupling_weights(ns: np.ndarray) -> np.ndarray:
    ns = np.asarray(ns, dtype=np.float64)
    if np.any(ns < 1):
        raise InvalidParametersError("coupling weights defined for n >= 1")
    return np.sqrt(ns) * (ns * ns - 0.25) ** 0.25


@dataclass(frozen=True, eq=False)
class RecurrenceSolution:
    """A recurrence solution in split mantissa / log2-scale representation."""

    mu: float
    lam: complex
    values: np.ndarray = field(repr=False)
    log2_scale: np.ndarray = field(repr=False)
    direction: str
    normalization: str

    @property
    def length(self) -> int:
        return int(self.values.size)

    def value(self, n: int) -> complex:
        """True value C_n; may overflow to inf for extreme scales."""
        try:
            factor = 2.0 ** float(self.log2_scale[n])
        except OverflowError:
            factor = math.inf
        return complex(self.values[n]) * factor

    def log2_magnitude(self, n: int) -> float:
        mag = abs(self.values[n])
        if mag == 0.0:
            return -math.inf
        return math.log2(mag) + float(self.log2_scale[n])

    def ratio(self, n: int) -> complex:
        """Scale-free consecutive ratio C_{n+1} / C_n."""
        if self.values[n] == 0.0:
            raise ZeroDivisionError(f"C_{n} vanishes")
        shift = float(self.log2_scale[n + 1] - self.log2_scale[n])
        return (self.values[n + 1] / self.values[n]) * 2.0**shift

    def interior_residuals(self) -> np.ndarray:
        """Relative residual of every interior row, computed scale-free.

        Row n is rescaled by the largest neighbouring magnitude before
        the defect is formed, so geometric growth does not contaminate
        the check.
        """
        n_top = self.length - 1
        if n_top < 2:
            return np.zeros(0)
        ns = np.arange(1, n_top)
        zs = zeta_array(ns, self.lam)
        d_mid = coupling_weights(ns)
        d_up = coupling_weights(ns + 1)
        k = self.log2_scale
        kmax = np.maximum(np.maximum(k[ns - 1], k[ns]), k[ns + 1])
        c_lo = self.values[ns - 1] * np.exp2(k[ns - 1] - kmax)
        c_mid = self.values[ns] * np.exp2(k[ns] - kmax)
        c_up = self.values[ns + 1] * np.exp2(k[ns + 1] - kmax)
        t_up = d_up * c_up
        t_mid = 2.0 * self.mu * np.sqrt(ns + 0.5) * zs * c_mid
        t_lo = d_mid * c_lo
        num = np.abs(t_up + t_mid + t_lo)
        den = np.abs(t_up) + np.abs(t_mid) + np.abs(t_lo)
        out = np.zeros_like(num)
        mask = den > 0.0
        out[mask] = num[mask] / den[mask]
        return out

    def max_interior_residual(self) -> float:
        res = self.interior_residuals()
        return float(np.max(res)) if res.size else 0.0


def _store(values: np.ndarray, scales: np.ndarray, idx: int, val: complex, scale: float) -> None:
    values[idx] = val
    scales[idx] = scale


def _rescale_pair(a: complex, b: complex, scale: float) -> tuple[complex, complex, float]:
    mag = max(abs(a), abs(b))
    if mag == 0.0:
        return a, b, scale
    if mag > _RESCALE_HI or mag < _RESCALE_LO:
        shift = float(math.ceil(math.log2(mag)))
        factor = 2.0**-shift
        return a * factor, b * factor, scale + shift
    return a, b, scale


def iterate_forward(mu: float, lam: complex, c0: complex, n: int) -> RecurrenceSolution:
    """Forward solution C_0..C_n from the boundary-row seed C_0 = c0.

    The n = 0 row fixes C_1 = -2*mu*sqrt(1/2)*zeta_0(lam)*c0 / d(1); the
    interior rows then propagate upward.  Working magnitudes are kept in
    [2^-512, 2^512] by the rescaling accumulator.
    """
    mu = float(mu)
    if not math.isfinite(mu):
        raise InvalidParametersError("mu must be finite")
    if n < 0:
        raise InvalidParametersError("n must be nonnegative")
    c0 = complex(c0)
    if not (math.isfinite(c0.real) and math.isfinite(c0.imag)):
        raise InvalidParametersError("seed must be finite")
    lam = _validate_lam(lam)

    values = np.zeros(n + 1, dtype=complex)
    scales = np.zeros(n + 1, dtype=np.float64)
    values[0] = c0
    if n == 0:
        return RecurrenceSolution(
            mu=mu, lam=lam, values=values, log2_scale=scales,
            direction="forward", normalization=f"C_0 = {c0}",
        )

    zs = zeta_array(np.arange(n), lam).tolist()
    ds = coupling_weights(np.arange(1, n + 1)).tolist()
    sq = np.sqrt(np.arange(n) + 0.5).tolist()

    cur = 0.0
    c_prev = c0
    c_curr = -(2.0 * mu * sq[0] * zs[0] * c0) / ds[0]
    c_curr, c_prev, cur = _rescale_pair(c_curr, c_prev, cur)
    _store(values, scales, 1, c_curr, cur)
    for k in range(1, n):
        c_next = -(2.0 * mu * sq[k] * zs[k] * c_curr + ds[k - 1] * c_prev) / ds[k]
        c_prev = c_curr
        c_curr = c_next
        c_curr, c_prev, cur = _rescale_pair(c_curr, c_prev, cur)
        _store(values, scales, k + 1, c_curr, cur)
    return RecurrenceSolution(
        mu=mu, lam=lam, values=values, log2_scale=scales,
        direction="forward", normalization=f"C_0 = {c0}",
    )


def minimal_solution_backward(
    mu: float, lam: complex, n: int, m: int | None = None
) -> RecurrenceSolution:
    """Minimal (decaying) solution C_0..C_n, normalised to C_n = 1.

    Backward recurrence from a seed high in a buffer zone [n, m]
    projects onto the minimal solution; the buffer defaults to
    m = n + max(50, n // 10).  Requires a dominant/minimal dominance
    split, i.e. |mu| > 1 or Im lam != 0.
    """
    mu = float(mu)
    if not math.isfinite(mu):
        raise InvalidParametersError("mu must be finite")
    if n < 1:
        raise InvalidParametersError("n must be >= 1")
    lam = _validate_lam(lam)
    if abs(mu) <= 1.0 and lam.imag == 0.0:
        raise NoDominanceSplitError(
            f"no exponential dominance split at mu={mu} with real lam; "
            "backward recurrence cannot isolate the minimal solution"
        )
    if m is None:
        m = n + max(50, n // 10)
    if m <= n:
        raise InvalidParametersError("buffer top m must exceed n")

    zs = zeta_array(np.arange(m + 1), lam).tolist()
    ds = coupling_weights(np.arange(1, m + 2)).tolist()
    sq = np.sqrt(np.arange(m + 1) + 0.5).tolist()

    values = np.zeros(m + 2, dtype=complex)
    scales = np.zeros(m + 2, dtype=np.float64)
    cur = 0.0
    c_up = 0.0 + 0.0j   # C_{m+1}
    c_mid = 1.0 + 0.0j  # C_m
    values[m + 1] = c_up
    values[m] = c_mid
    # Stored (mantissa, scale) pairs are immutable once written: a later
    # rescale only changes the working copies plus the running scale, so
    # every index keeps representing the same true value.
    for k in range(m, 0, -1):
        c_down = -(ds[k] * c_up + 2.0 * mu * sq[k] * zs[k] * c_mid) / ds[k - 1]
        c_up = c_mid
        c_mid = c_down
        c_mid, c_up, cur = _rescale_pair(c_mid, c_up, cur)
        _store(values, scales, k - 1, c_mid, cur)
    return _normalise_backward(mu, lam, values, scales, n, m)


def _normalise_backward(
    mu: float,
    lam: complex,
    values: np.ndarray,
    scales: np.ndarray,
    n: int,
    m: int,
) -> RecurrenceSolution:
    pivot = values[n]
    if pivot == 0.0:
        raise NonConvergenceError(
            "backward recurrence produced a vanishing mantissa at the "
            "normalisation index"
        )
    shift = float(round(math.log2(abs(pivot))))
    pivot_m = pivot * 2.0**-shift
    out_vals = values[: n + 1] / pivot_m
    out_scales = scales[: n + 1] - (scales[n] + shift)
    return RecurrenceSolution(
        mu=mu, lam=lam, values=out_vals, log2_scale=out_scales,
        direction="backward", normalization="C_n = 1",
    )


@dataclass(frozen=True)
class BirkhoffAdamsParams:
    """Closed-form large-n behaviour of the recurrence solutions.

    ``case == "distinct"``: basis solutions behave like
    roots[i]^n * n^exponents[i].  ``case == "double"`` (mu^2 = 1): like
    exp(+-delta*sqrt(n)) * n^kappa with the double root -mu.
    """

    case: str
    coeffs: tuple[complex, complex, complex, complex]
    roots: tuple[complex, complex] | None = None
    exponents: tuple[complex, complex] | None = None
    double_root: complex | None = None
    delta: complex | None = None
    kappa: float | None = None

    def minimal_index(self) -> int:
        """Index of the root with modulus < 1 (distinct case only)."""
        if self.case != "distinct" or self.roots is None:
            raise InvalidParametersError("minimal root defined for distinct case")
        mags = [abs(r) for r in self.roots]
        if abs(mags[0] - mags[1]) <= 1e-14 * max(mags):
            raise InvalidParametersError("roots have equal modulus; no minimal root")
        return 0 if mags[0] < mags[1] else 1

    def predicted_ratio(self, index: int, n: int) -> complex:
        """Predicted C_{n+1}/C_n along basis solution ``index``."""
        if self.case != "distinct" or self.roots is None or self.exponents is None:
            raise InvalidParametersError("ratios defined for distinct case")
        return self.roots[index] * ((n + 1.0) / n) ** self.exponents[index]


def birkhoff_adams_eval(mu: float, lam: complex) -> BirkhoffAdamsParams:
    """Asymptotic roots and exponents for parameters (mu, lam).

    The normalised recurrence has the large-n expansion
    x(n+1) + x(n-1) + (a0 + a1/n + O(n^-2)) x(n) = 0 modulated by
    b0 + b1/n in the outer coefficients, with

        a0 = 2*mu, a1 = -mu*(1 + lam), b0 = 1, b1 = -1.

    Distinct characteristic roots (mu^2 != 1) give power-modulated
    geometric behaviour; mu^2 = 1 collapses to the double-root form.
    """
    mu = float(mu)
    if not math.isfinite(mu):
        raise InvalidParametersError("mu must be finite")
    lam = complex(lam)
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        raise InvalidParametersError("lam must be finite")
    a0 = complex(2.0 * mu)
    a1 = -mu * (1.0 + lam)
    b0 = complex(1.0)
    b1 = complex(-1.0)
    coeffs = (a0, a1, b0, b1)
    if mu * mu == 1.0:
        delta = 2.0 * cmath.sqrt((a0 * a1 - 2.0 * b1) / (2.0 * b0))
        return BirkhoffAdamsParams(
            case="double",
            coeffs=coeffs,
            double_root=complex(-mu),
            delta=delta,
            kappa=0.25 + (b1 / (2.0 * b0)).real,
        )
    sq = cmath.sqrt(complex(mu * mu - 1.0))
    roots = (-mu + sq, -mu - sq)
    exps = tuple(
        (a1 * r + b1) / (a0 * r + 2.0 * b0) for r in roots
    )
    return BirkhoffAdamsParams(
        case="distinct", coeffs=coeffs, roots=roots, exponents=exps
    )


@dataclass(frozen=True)
class IdentityCheck:
    """Both sides of the summed-imaginary-part identity, scale-free.

    True sides equal the reported ones times 2**log2_scale; ``residual``
    is |lhs - rhs| / (|lhs| + |rhs|), zero when both sides vanish.
    ``term_scale`` is the largest single term entering the sum, for
    judging when "both sides vanish" is meaningful.
    """

    lhs: float
    rhs: float
    log2_scale: float
    term_scale: float

    @property
    def residual(self) -> float:
        denom = abs(self.lhs) + abs(self.rhs)
        if denom == 0.0:
            return 0.0
        return abs(self.lhs - self.rhs) / denom


def identity_residual(sol: RecurrenceSolution, up_to: int) -> IdentityCheck:
    """Check 2*mu*sum_{n<=upTo} |C_n|^2 sqrt(n+1/2) Im zeta_n(lam)
    == -d(upTo+1) * Im(C_{upTo+1} * conj(C_{upTo})) in split form."""
    if up_to < 0 or up_to > sol.length - 2:
        raise InvalidParametersError(
            f"up_to must lie in [0, {sol.length - 2}] for this solution"
        )
    ns = np.arange(up_to + 1)
    zs_im = zeta_array(ns, sol.lam).imag
    k = sol.log2_scale
    kref = float(np.max(k[: up_to + 2]))
    weights = np.exp2(2.0 * (k[: up_to + 1] - kref))
    mags2 = np.abs(sol.values[: up_to + 1]) ** 2 * weights
    terms = 2.0 * sol.mu * mags2 * np.sqrt(ns + 0.5) * zs_im
    lhs = float(np.sum(terms))
    cross = (sol.values[up_to + 1] * np.conj(sol.values[up_to])).imag
    rhs = -coupling_weight(up_to + 1) * float(cross) * 2.0 ** float(
        k[up_to + 1] + k[up_to] - 2.0 * kref
    )
    term_scale = float(np.max(np.abs(terms))) if terms.size else 0.0
    return IdentityCheck(
        lhs=lhs, rhs=rhs, log2_scale=2.0 * kref, term_scale=term_scale
    )


def secular_function(
    mu: float, lam: complex, n: int, m: int | None = None
) -> complex:
    """Normalised boundary-row residual of the minimal solution.

    The backward recurrence satisfies every interior row by construction,
    so the one condition singling out spectral points is the n = 0 row
    d(1)*C_1 + 2*mu*sqrt(1/2)*zeta_0(lam)*C_0 = 0 applied to the minimal
    solution.  The residual is normalised by the sum of the term
    magnitudes, making it scale-free with values in the unit disc and a
    linear dip through zero at eigenvalues.  Real for real lam < 1/2, so
    sign changes bracket eigenvalues; ``n`` sets the depth (and default
    buffer) of the backward recurrence.
    """
    if n < 1:
        raise InvalidParametersError("n must be >= 1")
    bwd = minimal_solution_backward(mu, lam, n, m)
    g0, g1 = bwd.values[0], bwd.values[1]
    k0, k1 = float(bwd.log2_scale[0]), float(bwd.log2_scale[1])
    w0 = 2.0 * mu * math.sqrt(0.5) * zeta(0, lam)
    kref = max(k0, k1)
    t1 = coupling_weight(1) * g1 * 2.0 ** (k1 - kref)
    t0 = w0 * g0 * 2.0 ** (k0 - kref)
    denom = abs(t1) + abs(t0)
    if denom == 0.0:
        return complex(math.inf)
    return (t1 + t0) / denom


def secular_defect(mu: float, lam: complex, n: int, m: int | None = None) -> float:
    """Magnitude of :func:`secular_function`; ~0 only at spectral points."""
    return abs(secular_function(mu, lam, n, m))

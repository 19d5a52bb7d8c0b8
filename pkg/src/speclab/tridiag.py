"""Symmetric tridiagonal eigenvalue counting and windowed bisection.

The core primitive is the Sturm pivot count: the number of negative
pivots of the shifted LDL^T factorisation of T - level*I equals the
number of eigenvalues strictly below ``level``.  Counts are exact
integers; eigenvalues are then localised by bisection on the count.
Vanishing pivots are replaced by -eps*(norm(T) + 1) so the count never
divides by zero, at the cost of an ulp-scale ambiguity for levels that
collide with an eigenvalue of a leading principal submatrix.

``dense_eigen_oracle`` is the deliberately independent cross-check: it
densifies the matrix and calls LAPACK's symmetric eigensolver, sharing
no code with the pivot recurrence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParametersError, SizeExceededError

__all__ = [
    "TridiagonalMatrix",
    "EigenvalueReport",
    "sturm_count_below",
    "sturm_counts",
    "counts_for_diagonals",
    "eigenvalues_in_window",
    "smallest_eigenvalue",
    "dense_eigen_oracle",
]

_EPS = float(np.finfo(np.float64).eps)

# Batches narrower than this run faster as plain Python loops than as
# per-row numpy calls.
_SCALAR_BATCH_LIMIT = 8

DENSE_ORACLE_MAX_SIZE = 1024


@dataclass(frozen=True, eq=False)
class TridiagonalMatrix:
    """Real symmetric tridiagonal matrix stored as two arrays."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self) -> None:
        d = np.asarray(self.diag, dtype=np.float64)
        e = np.asarray(self.offdiag, dtype=np.float64)
        if d.ndim != 1 or d.size < 1:
            raise InvalidParametersError("diag must be a 1-D array of size >= 1")
        if e.ndim != 1 or e.size != d.size - 1:
            raise InvalidParametersError(
                f"offdiag must have size {d.size - 1}, got {e.size}"
            )
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise InvalidParametersError("matrix entries must be finite")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def size(self) -> int:
        return int(self.diag.size)

    def to_dense(self) -> np.ndarray:
        a = np.diag(self.diag)
        if self.size > 1:
            idx = np.arange(self.size - 1)
            a[idx, idx + 1] = self.offdiag
            a[idx + 1, idx] = self.offdiag
        return a

    def gershgorin_bounds(self) -> tuple[float, float]:
        radius = np.zeros(self.size)
        if self.size > 1:
            radius[:-1] += np.abs(self.offdiag)
            radius[1:] += np.abs(self.offdiag)
        return float(np.min(self.diag - radius)), float(np.max(self.diag + radius))


@dataclass(frozen=True)
class EigenvalueReport:
    """Eigenvalues found in a half-open window [lo, hi)."""

    window: tuple[float, float]
    eigenvalues: np.ndarray = field(repr=False)
    count_below_lo: int
    count_below_hi: int
    size: int
    tol: float

    @property
    def count(self) -> int:
        return int(self.count_below_hi - self.count_below_lo)


def _pivmin(t: TridiagonalMatrix, level_scale: float = 0.0) -> float:
    norm = float(np.max(np.abs(t.diag)))
    if t.size > 1:
        norm += 2.0 * float(np.max(np.abs(t.offdiag)))
    return _EPS * (norm + abs(level_scale) + 1.0)


def _count_scalar(diag: list, off2: list, shift: float, pivmin: float) -> int:
    q = diag[0] - shift
    if -pivmin <= q <= pivmin:
        q = -pivmin
    count = 1 if q < 0.0 else 0
    for i in range(1, len(diag)):
        q = diag[i] - shift - off2[i - 1] / q
        if -pivmin <= q <= pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def _counts_columns(diag_rows: np.ndarray, off2: np.ndarray, pivmin: float) -> np.ndarray:
    """Negative-pivot counts for the (n, k) array of shifted diagonals."""
    q = diag_rows[0].copy()
    np.copyto(q, -pivmin, where=np.abs(q) <= pivmin)
    counts = (q < 0.0).astype(np.int64)
    for i in range(1, diag_rows.shape[0]):
        q = diag_rows[i] - off2[i - 1] / q
        np.copyto(q, -pivmin, where=np.abs(q) <= pivmin)
        counts += q < 0.0
    return counts


def sturm_count_below(t: TridiagonalMatrix, level: float) -> int:
    """Number of eigenvalues of ``t`` strictly below ``level``."""
    level = float(level)
    if not np.isfinite(level):
        raise InvalidParametersError("level must be finite")
    pivmin = _pivmin(t, level)
    off2 = (t.offdiag * t.offdiag).tolist()
    return _count_scalar(t.diag.tolist(), off2, level, pivmin)


def sturm_counts(t: TridiagonalMatrix, levels) -> np.ndarray:
    """Vectorised :func:`sturm_count_below` over a batch of levels."""
    shifts = np.atleast_1d(np.asarray(levels, dtype=np.float64))
    if shifts.ndim != 1:
        raise InvalidParametersError("levels must be scalar or 1-D")
    if not np.all(np.isfinite(shifts)):
        raise InvalidParametersError("levels must be finite")
    if shifts.size == 0:
        return np.zeros(0, dtype=np.int64)
    pivmin = _pivmin(t, float(np.max(np.abs(shifts))))
    if shifts.size <= _SCALAR_BATCH_LIMIT:
        diag = t.diag.tolist()
        off2 = (t.offdiag * t.offdiag).tolist()
        return np.array(
            [_count_scalar(diag, off2, s, pivmin) for s in shifts.tolist()],
            dtype=np.int64,
        )
    rows = t.diag[:, None] - shifts[None, :]
    return _counts_columns(rows, t.offdiag * t.offdiag, pivmin)


def counts_for_diagonals(diags: np.ndarray, offdiag: np.ndarray, level: float = 0.0) -> np.ndarray:
    """Counts below ``level`` for a batch of matrices sharing one offdiagonal.

    ``diags`` has shape (k, n): k diagonals over a common coupling array.
    Used where a parameter sweep changes only the diagonal.
    """
    diags = np.asarray(diags, dtype=np.float64)
    offdiag = np.asarray(offdiag, dtype=np.float64)
    if diags.ndim != 2 or diags.shape[1] != offdiag.size + 1:
        raise InvalidParametersError("diags must be (k, n) with offdiag of size n-1")
    if not (np.all(np.isfinite(diags)) and np.all(np.isfinite(offdiag))):
        raise InvalidParametersError("entries must be finite")
    norm = float(np.max(np.abs(diags))) + 2.0 * (
        float(np.max(np.abs(offdiag))) if offdiag.size else 0.0
    )
    pivmin = _EPS * (norm + abs(level) + 1.0)
    off2 = offdiag * offdiag
    if diags.shape[0] <= _SCALAR_BATCH_LIMIT:
        off2_list = off2.tolist()
        return np.array(
            [
                _count_scalar(row, off2_list, float(level), pivmin)
                for row in diags.tolist()
            ],
            dtype=np.int64,
        )
    rows = np.ascontiguousarray(diags.T) - float(level)
    return _counts_columns(rows, off2, pivmin)


def eigenvalues_in_window(
    t: TridiagonalMatrix,
    lo: float,
    hi: float,
    tol: float = 1e-10,
) -> EigenvalueReport:
    """All eigenvalues in [lo, hi), each bisected to within ``tol``."""
    lo, hi, tol = float(lo), float(hi), float(tol)
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise InvalidParametersError("window must be finite with lo < hi")
    if not (np.isfinite(tol) and tol > 0.0):
        raise InvalidParametersError("tol must be positive")
    count_lo = sturm_count_below(t, lo)
    count_hi = sturm_count_below(t, hi)
    m = count_hi - count_lo
    if m == 0:
        return EigenvalueReport(
            window=(lo, hi),
            eigenvalues=np.zeros(0),
            count_below_lo=count_lo,
            count_below_hi=count_hi,
            size=t.size,
            tol=tol,
        )
    ks = np.arange(count_lo, count_hi)
    lows = np.full(m, lo)
    highs = np.full(m, hi)
    # count(lows[j]) <= ks[j] < count(highs[j]) throughout.
    max_iter = int(np.ceil(np.log2(max((hi - lo) / tol, 2.0)))) + 3
    for _ in range(max_iter):
        if np.max(highs - lows) <= tol:
            break
        mids = 0.5 * (lows + highs)
        counts = sturm_counts(t, mids)
        go_left = counts > ks
        highs = np.where(go_left, mids, highs)
        lows = np.where(go_left, lows, mids)
    return EigenvalueReport(
        window=(lo, hi),
        eigenvalues=0.5 * (lows + highs),
        count_below_lo=count_lo,
        count_below_hi=count_hi,
        size=t.size,
        tol=tol,
    )


def smallest_eigenvalue(t: TridiagonalMatrix, tol: float = 1e-10) -> float:
    """Lowest eigenvalue, bisected between the Gershgorin bounds."""
    tol = float(tol)
    if not (np.isfinite(tol) and tol > 0.0):
        raise InvalidParametersError("tol must be positive")
    lo, hi = t.gershgorin_bounds()
    hi = hi + max(tol, _pivmin(t, hi))
    diag = t.diag.tolist()
    off2 = (t.offdiag * t.offdiag).tolist()
    pivmin = _pivmin(t, max(abs(lo), abs(hi)))
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _count_scalar(diag, off2, mid, pivmin) >= 1:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def dense_eigen_oracle(t: TridiagonalMatrix) -> np.ndarray:
    """All eigenvalues via dense LAPACK, ascending; independent of Sturm code."""
    if t.size > DENSE_ORACLE_MAX_SIZE:
        raise SizeExceededError(
            f"dense oracle limited to size {DENSE_ORACLE_MAX_SIZE}, got {t.size}"
        )
    return np.linalg.eigvalsh(t.to_dense())

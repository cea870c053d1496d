"""Pure-Python (numpy) implementations of the hot loops."""

from __future__ import annotations

import numpy as np

_TINY = 1e-300


def recurrence_table(x, a, b, nmax: int) -> np.ndarray:
    """Run h_{k+1} = a_k x h_k - b_k h_{k-1} from h_{-1}=0, h_0=1.

    Returns a complex array of shape (len(x), nmax + 1) whose column n
    holds h_n at every point.
    """
    x = np.asarray(x, dtype=complex).ravel()
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.empty((x.size, nmax + 1), dtype=complex)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    out[:, 0] = cur
    # overflow to inf/nan is left to callers, as in the compiled kernel
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(nmax):
            prev, cur = cur, a[k] * x * cur - b[k] * prev
            out[:, k + 1] = cur
    return out


def _count_below(x: np.ndarray, off: np.ndarray) -> np.ndarray:
    """Number of eigenvalues below each x for the zero-diagonal Jacobi matrix."""
    d = -x.copy()
    count = (d < 0).astype(np.int64)
    for e in off:
        d = np.where(d == 0, -_TINY, d)
        d = -x - e * (e / d)
        count += d < 0
    return count


def zero_diagonal_jacobi_eigvals(off, rtol: float = 4e-16, max_iter: int = 400) -> np.ndarray:
    """Eigenvalues of the symmetric tridiagonal matrix with zero diagonal.

    Bisection on Sturm counts with geometric midpoints, which resolves every
    eigenvalue to relative accuracy even when the off-diagonal is strongly
    graded.  Returns eigenvalues sorted in descending order.
    """
    off = np.abs(np.asarray(off, dtype=float))
    n = off.size + 1
    npos = n // 2
    if npos == 0:
        return np.zeros(n)
    targets = np.arange(n - npos, n)
    hi = np.full(npos, 2.0 * off.max() * (1 + 1e-12) + _TINY)
    lo = np.full(npos, _TINY)
    for _ in range(max_iter):
        mid = np.sqrt(lo) * np.sqrt(hi)
        above = _count_below(mid, off) >= targets + 1
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
        if np.all(hi / lo - 1 <= rtol):
            break
    pos = (np.sqrt(lo) * np.sqrt(hi))[::-1]
    middle = [0.0] if n % 2 else []
    return np.concatenate([pos, middle, -pos[::-1]])

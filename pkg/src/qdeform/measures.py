"""Discrete orthogonality measures and position-operator spectra.

Type I (discrete_I, generalized_I on alpha = (l-1)/2).  With base p = q'
(p = q for discrete_I) and scale S = q^((2 alpha + beta)/2) / sqrt(1 - p),
atoms sit at +-S p^k for k >= 0 with weights

    w_k = (p^k / 2) (p^(2k+2); p^2)_inf (p; p^2)_inf / (p^2; p^2)_inf,

each sign carrying w_k.  The weights sum to one and the orthonormal P_n
satisfy sum w P_m P_n = delta_mn.

Type II (discrete_II, generalized_II on alpha = -(l-1)).  With base p and
lattice parameter c > 0, atoms sit at +-c p^k / (q^(-(alpha+beta)/2) sqrt(1-p))
for all integers k, with weights w(c p^k; p) p^k, w(x; p) = 1/(-x^2; p^2)_inf,
and the relation reads sum w P_m P_n = C(c) delta_mn with

    C(c) = 2 (p^2, -c^2 p, -p/c^2; p^2)_inf / (p, -c^2, -p^2/c^2; p^2)_inf.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceWarning, DomainError
from .oscillator import truncated_position_spectrum
from .polynomials import (
    PolynomialFamily,
    eval_discrete_I_on_lattice,
    require_restriction,
    transition_prefactors,
    transition_table,
)
from .qnum import q_pochhammer_inf, q_pochhammer_inf_product

_UNDERFLOW = 1e-300


@dataclass(frozen=True)
class DiscreteMeasure:
    """Atoms (point, weight) with their lattice index k and sign."""

    kind: str
    points: np.ndarray
    weights: np.ndarray
    k_index: np.ndarray
    signs: np.ndarray
    scale: float
    base: float
    lattice_c: float | None
    k_max: int
    k_min: int

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.points.tolist(), self.weights.tolist()))

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True)
class SpectrumLattice:
    """Signed lattice points sorted by decreasing absolute value; 0 is an accumulation point."""

    kind: str
    points: np.ndarray
    closure_point: bool = True


@dataclass(frozen=True)
class NotApplicable:
    reason: str


def _check_family(family: PolynomialFamily) -> None:
    if family.kind == "classical":
        raise DomainError("the classical family has a continuous spectrum and no discrete measure")
    require_restriction(family)
    if not 0 < family.qprime < 1:
        raise DomainError(
            f"{family.kind} measure needs 0 < q' < 1 (got q'={family.qprime}); "
            "on the restriction this means l > 1"
        )


def lattice_base(family: PolynomialFamily) -> float:
    return family.q if family.kind in ("discrete_I", "discrete_II") else family.qprime


def lattice_scale(family: PolynomialFamily) -> float:
    """Type I: q^((2a+b)/2)/sqrt(1-p).  Type II: c q^((a+b)/2)/sqrt(1-p)."""
    p = family.params
    base = lattice_base(family)
    if family.is_type_I:
        return p.q ** ((2 * p.alpha + p.beta) / 2) / math.sqrt(1 - base)
    return family.c * p.q ** ((p.alpha + p.beta) / 2) / math.sqrt(1 - base)


def type_I_weights(base: float, k_max: int) -> np.ndarray:
    """w_k for k = 0..k_max (per sign)."""
    b2 = base * base
    const = q_pochhammer_inf(base, b2).value / q_pochhammer_inf(b2, b2).value
    k = np.arange(k_max + 1)
    tails = np.array([q_pochhammer_inf(base ** (2 * kk + 2), b2).value for kk in k])
    return 0.5 * base**k * tails * const


def type_II_weight(x: float, base: float) -> float:
    """w(x; p) = 1/(-x^2; p^2)_inf, evaluated in log form to avoid overflow."""
    b2 = base * base
    a = x * x
    # split off the large leading factors explicitly
    log_p = 0.0
    k = 0
    while a * b2**k > 1e-3:
        log_p += math.log1p(a * b2**k)
        k += 1
        if log_p > 745:
            return 0.0
    rest = q_pochhammer_inf(-a * b2**k, b2).value
    return math.exp(-log_p) / rest


def type_II_constant(c: float, base: float) -> float:
    """C(c) = 2 (p^2, -c^2 p, -p/c^2; p^2)_inf / (p, -c^2, -p^2/c^2; p^2)_inf."""
    b2 = base * base
    num = q_pochhammer_inf_product([b2, -c * c * base, -base / (c * c)], b2).value
    den = q_pochhammer_inf_product([base, -c * c, -b2 / (c * c)], b2).value
    return 2 * num / den


def build_measure(family: PolynomialFamily, k_max: int = 80) -> DiscreteMeasure:
    """Atoms and weights of the orthogonality measure, truncated at k_max.

    Type-II lattices also extend to negative k; atoms are added on that side
    until the weight underflows.
    """
    _check_family(family)
    if k_max < 1:
        raise DomainError("k_max must be positive")
    base = lattice_base(family)
    scale = lattice_scale(family)
    if family.is_type_I:
        w = type_I_weights(base, k_max)
        k = np.arange(k_max + 1)
        pts = scale * base**k
        return _assemble(family.kind, pts, w, k, scale, base, None, k_max, 0)
    ks, ws = [], []
    kk = 0
    while kk <= k_max:
        ks.append(kk)
        ws.append(type_II_weight(family.c * base**kk, base) * base**kk)
        kk += 1
    kk = -1
    while True:
        wv = type_II_weight(family.c * base**kk, base) * base**kk
        if wv < _UNDERFLOW:
            break
        ks.append(kk)
        ws.append(wv)
        kk -= 1
    order = np.argsort(ks)
    k = np.asarray(ks)[order]
    w = np.asarray(ws)[order]
    pts = scale * base ** k.astype(float)
    return _assemble(family.kind, pts, w, k, scale, base, family.c, k_max, int(k.min()))


def _assemble(kind, pts, w, k, scale, base, c, k_max, k_min) -> DiscreteMeasure:
    points = np.concatenate([pts, -pts])
    weights = np.concatenate([w, w])
    signs = np.concatenate([np.ones(len(pts), int), -np.ones(len(pts), int)])
    kidx = np.concatenate([k, k])
    return DiscreteMeasure(kind, points, weights, kidx, signs, scale, base, c, k_max, k_min)


def _orthonormal_values(family: PolynomialFamily, measure: DiscreteMeasure, nmax: int) -> np.ndarray:
    """P_n at every atom, shape (atoms, nmax + 1).

    Type I evaluates the discrete polynomials through their terminating
    lattice form (stable where forward recurrence is not); the generalized
    type-I polynomials reduce to them on the restriction.
    """
    if family.is_type_II:
        return transition_table(family, nmax, measure.points).real
    base = measure.base
    pref = transition_prefactors(PolynomialFamily.discrete_I(base), nmax)
    s = math.sqrt(1 - base)
    out = np.empty((measure.points.size, nmax + 1))
    cache: dict[tuple[int, int], float] = {}
    for i, (kk, sg) in enumerate(zip(measure.k_index.tolist(), measure.signs.tolist())):
        for n in range(nmax + 1):
            key = (n, kk)
            if key not in cache:
                cache[key] = eval_discrete_I_on_lattice(n, kk, base)
            out[i, n] = pref[n] * cache[key] * sg**n / s**n
    return out


def orthogonality_gram(family: PolynomialFamily, nmax: int, k_max: int = 80) -> tuple[np.ndarray, float]:
    """Matrix sum_atoms w P_m P_n for m, n <= nmax and the expected diagonal value."""
    measure = build_measure(family, k_max)
    vals = _orthonormal_values(family, measure, nmax)
    gram = (vals * measure.weights[:, None]).T @ vals
    return gram, orthogonality_rhs(family)


def orthogonality_rhs(family: PolynomialFamily) -> float:
    if family.is_type_I:
        return 1.0
    return type_II_constant(family.c, lattice_base(family))


def _tail_estimate(family: PolynomialFamily, measure: DiscreteMeasure, vals: np.ndarray, m: int, n: int) -> float:
    """Bound on the neglected k > k_max atoms from the last retained weight."""
    base = measure.base
    last = measure.k_index == measure.k_max
    contrib = np.abs(measure.weights[last] * vals[last, m] * vals[last, n]).sum()
    return float(contrib * base / (1 - base))


def verify_orthogonality(
    family: PolynomialFamily, m: int, n: int, k_max: int = 80, tol: float = 1e-7
) -> tuple[float, float, float]:
    """Return (lhs, rhs, |lhs - rhs|) for the pair (m, n).

    Emits ConvergenceWarning when the truncation tail estimate exceeds tol.
    """
    measure = build_measure(family, k_max)
    nmax = max(m, n)
    vals = _orthonormal_values(family, measure, nmax)
    lhs = float(np.sum(measure.weights * vals[:, m] * vals[:, n]))
    rhs = orthogonality_rhs(family) if m == n else 0.0
    tail = _tail_estimate(family, measure, vals, m, n)
    if tail > tol:
        warnings.warn(f"lattice tail estimate {tail:.3g} exceeds tol {tol:g}; raise k_max", ConvergenceWarning, stacklevel=2)
    return lhs, rhs, abs(lhs - rhs)


def head_weight_closed_form(family: PolynomialFamily) -> float:
    """(1/2)(p; p)_inf / (p^2; p^2)_inf, the weight of each head atom of a type-I measure."""
    base = lattice_base(family)
    return 0.5 * q_pochhammer_inf(base, base).value / q_pochhammer_inf(base * base, base * base).value


# ---------------------------------------------------------------------------
# spectra


def analytic_spectrum(family: PolynomialFamily, k_max: int = 40, k_min: int | None = None) -> SpectrumLattice:
    """Lattice +-scale * p^k: k = 0..k_max for type I, k_min..k_max for type II."""
    _check_family(family)
    base = lattice_base(family)
    scale = lattice_scale(family)
    if family.is_type_I:
        k = np.arange(0, k_max + 1)
    else:
        lo = -k_max if k_min is None else k_min
        k = np.arange(lo, k_max + 1)
    mag = scale * base ** k.astype(float)
    pts = np.concatenate([mag, -mag])
    order = np.lexsort((-pts, -np.abs(pts)))
    return SpectrumLattice(family.kind, pts[order])


@dataclass(frozen=True)
class SpectrumComparison:
    """Truncated position eigenvalues matched against lattice points.

    For type I the largest eigenvalues are matched with the lattice head
    (scale, scale p, ...).  Type-II lattices are unbounded above, so the
    smallest positive eigenvalues are matched with their nearest lattice
    points instead.
    """

    kind: str
    dims: tuple[int, ...]
    lattice_points: np.ndarray  # (len(dims), top_k) nearest lattice point per eigenvalue
    eigenvalues: np.ndarray  # (len(dims), top_k)
    rel_gaps: np.ndarray  # (len(dims), top_k)
    monotone: bool
    head_gap: float


def _nearest(points: np.ndarray, values: np.ndarray) -> np.ndarray:
    idx = np.abs(points[None, :] - values[:, None]).argmin(axis=1)
    return points[idx]


def compare_spectra(family: PolynomialFamily, dim: int = 128, top_k: int = 3, floor: float | None = None):
    """Match truncated Jacobi eigenvalues to the analytic lattice at dims dim/4, dim/2, dim.

    ``monotone`` holds when each gap is non-increasing with dim up to an
    absolute rounding floor (default 64 machine epsilons), since gaps that
    have already reached rounding level fluctuate.
    """
    if family.kind == "classical":
        return NotApplicable("continuous spectrum: the classical position operator has no point lattice")
    if dim < 4 * top_k:
        raise DomainError("dim must be at least 4 * top_k")
    _check_family(family)
    floor = 64 * np.finfo(float).eps if floor is None else floor
    dims = (dim // 4, dim // 2, dim)
    lattice = analytic_spectrum(family, k_max=max(60, dim)).points
    pos_lattice = lattice[lattice > 0]
    eig_rows, lat_rows, gap_rows = [], [], []
    for d in dims:
        ev = truncated_position_spectrum(family.params, d)
        pos = ev[ev > 0]
        chosen = pos[:top_k] if family.is_type_I else pos[::-1][:top_k]
        if family.is_type_I:
            targets = np.sort(pos_lattice)[::-1][:top_k]
        else:
            targets = _nearest(pos_lattice, chosen)
        eig_rows.append(chosen)
        lat_rows.append(targets)
        gap_rows.append(np.abs(chosen - targets) / np.abs(targets))
    gaps = np.array(gap_rows)
    monotone = bool(np.all(np.diff(gaps, axis=0) <= floor))
    return SpectrumComparison(
        family.kind,
        dims,
        np.array(lat_rows),
        np.array(eig_rows),
        gaps,
        monotone,
        float(gaps[-1, 0]),
    )

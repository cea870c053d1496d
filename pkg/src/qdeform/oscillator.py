"""Deformed oscillator algebras in the Fock representation.

The four-parameter family is built on the structure function

    f_n = q^(alpha (n + 1) + beta / 2) * sqrt([n + 1]),
    [m] = (1 - q'^m) / (1 - q'),  q' = q^(l - 1),

with [m] = m at l = 1.  The annihilator acts as a|n> = f_{n-1}|n-1> and the
creator as a+|n> = f_n|n+1>.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import DomainError, UnknownPreset
from .kernels import zero_diagonal_jacobi_eigvals

FLAVORS = ("position", "momentum", "hamiltonian", "raising", "lowering", "number")


@dataclass(frozen=True)
class DeformationParams:
    """A parameter point (alpha, beta, l, q) with derived q' = q**(l - 1)."""

    alpha: float
    beta: float
    l: float
    q: float

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "l", "q"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise DomainError(f"{name} must be a finite real number (got {v!r})")
        if not self.q > 0 or self.q == 1:
            raise DomainError(f"q must satisfy q > 0, q != 1 (got {self.q!r})")

    @property
    def qprime(self) -> float:
        return self.q ** (self.l - 1)

    @property
    def log_q(self) -> float:
        return math.log(self.q)

    @property
    def log_qprime(self) -> float:
        """u = (l - 1) ln q; zero exactly when l == 1."""
        return (self.l - 1) * math.log(self.q)

    def as_dict(self) -> dict[str, float]:
        return {"alpha": self.alpha, "beta": self.beta, "l": self.l, "q": self.q}


def _log_bracket(m: np.ndarray, u: float) -> np.ndarray:
    """log of (1 - e^{m u}) / (1 - e^u) for m >= 1, stable for large |m u|."""
    m = np.asarray(m, dtype=float)
    if u == 0.0:
        return np.log(m)
    if u > 0:
        return m * u + np.log(-np.expm1(-m * u)) - math.log(math.expm1(u))
    return np.log(-np.expm1(m * u)) - math.log(-math.expm1(u))


def q_bracket(m, u: float) -> np.ndarray:
    """The deformed integer [m] = (1 - q'^m)/(1 - q') written with u = ln q'."""
    m = np.asarray(m, dtype=float)
    if u == 0.0:
        return m.copy()
    with np.errstate(over="ignore"):
        out = np.expm1(m * u) / math.expm1(u)
    bad = ~np.isfinite(out)
    if np.any(bad):
        out[bad] = np.exp(_log_bracket(m[bad], u))
    return out


def log_structure_sequence(params: DeformationParams, count: int) -> np.ndarray:
    """log f_n for n = 0 .. count-1."""
    n = np.arange(count, dtype=float)
    return (params.alpha * (n + 1) + params.beta / 2) * params.log_q + 0.5 * _log_bracket(n + 1, params.log_qprime)


def structure_sequence(params: DeformationParams, count: int) -> np.ndarray:
    """f_n for n = 0 .. count-1 as a float array."""
    n = np.arange(count, dtype=float)
    with np.errstate(over="ignore", under="ignore"):
        power = params.q ** (params.alpha * (n + 1) + params.beta / 2)
        out = power * np.sqrt(q_bracket(n + 1, params.log_qprime))
    bad = ~np.isfinite(out) | (out == 0)
    if np.any(bad):
        with np.errstate(over="ignore", under="ignore"):
            out[bad] = np.exp(log_structure_sequence(params, count)[bad])
    return out


def structure_function(params: DeformationParams, n: int) -> float:
    """f_n; the negative index f_{-1} is defined as 0."""
    if n < 0:
        if n == -1:
            return 0.0
        raise DomainError("structure function index must be >= -1")
    return float(structure_sequence(params, n + 1)[n])


def log_structure_function(params: DeformationParams, n: int) -> float:
    if n < 0:
        raise DomainError("log f_n needs n >= 0")
    m = float(n + 1)
    return (params.alpha * m + params.beta / 2) * params.log_q + 0.5 * float(_log_bracket(np.array(m), params.log_qprime))


# ---------------------------------------------------------------------------
# presets

_PRESET_TABLE: dict[str, tuple[float, float, float | None, str | None, float]] = {
    # name: (alpha, beta, l, regime, default q)
    "classical": (0.0, 0.0, 1.0, None, 0.5),
    "biedenharn_macfarlane_a": (0.5, -1.0, -1.0, "q<1", 0.5),
    "biedenharn_macfarlane_b": (-0.5, 1.0, 3.0, "q>1", 2.0),
    "symmetric": (0.5, -1.0, None, None, 0.5),
    "hermite_I": (0.5, -1.0, 2.0, "q<1", 0.5),
    "hermite_II": (-1.0, 2.0, 2.0, "q<1", 0.5),
}
_PRESET_ALIASES = {
    "bm_a": "biedenharn_macfarlane_a",
    "bm_b": "biedenharn_macfarlane_b",
    "hermite_i": "hermite_I",
    "hermite_ii": "hermite_II",
}
PRESET_NAMES = tuple(_PRESET_TABLE)

_SYMMETRIC_RE = re.compile(r"^symmetric\(\s*([-+0-9.eE]+)\s*\)$")


def preset(name: str, q: float | None = None, l: float | None = None) -> DeformationParams:
    """Return a named parameter point.

    ``symmetric`` takes its ``l`` either as a keyword or inline as
    ``"symmetric(2.5)"``.  Presets with a q regime reject a q on the wrong
    side of 1.
    """
    m = _SYMMETRIC_RE.match(name.strip())
    if m:
        name, l = "symmetric", float(m.group(1))
    key = _PRESET_ALIASES.get(name, name)
    if key not in _PRESET_TABLE:
        raise UnknownPreset(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")
    alpha, beta, lval, regime, default_q = _PRESET_TABLE[key]
    if key == "symmetric":
        if l is None:
            raise DomainError("the symmetric preset needs an l value, e.g. symmetric(2)")
        lval = float(l)
    qv = default_q if q is None else float(q)
    if regime == "q<1" and not 0 < qv < 1:
        raise DomainError(f"preset {key} requires 0 < q < 1 (got {qv})")
    if regime == "q>1" and not qv > 1:
        raise DomainError(f"preset {key} requires q > 1 (got {qv})")
    return DeformationParams(alpha, beta, float(lval), qv)


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class JacobiOperator:
    """Truncated tridiagonal operator in the basis |0> .. |dim-1>.

    ``offdiag[n]`` is f_n for the ladder flavors.  Orientation is encoded by
    the flavor: raising puts f_n at (n+1, n), lowering at (n, n+1), position
    on both, momentum at (n, n+1) = i f_n and (n+1, n) = -i f_n.
    """

    dim: int
    diag: np.ndarray
    offdiag: np.ndarray
    flavor: str

    def to_matrix(self) -> np.ndarray:
        d, e = self.diag, self.offdiag
        if self.flavor == "momentum":
            m = np.zeros((self.dim, self.dim), dtype=complex)
            idx = np.arange(self.dim - 1)
            m[idx, idx + 1] = 1j * e
            m[idx + 1, idx] = -1j * e
            return m
        m = np.diag(d).astype(float)
        if self.flavor in ("position", "raising"):
            m += np.diag(e, -1)
        if self.flavor in ("position", "lowering"):
            m += np.diag(e, 1)
        return m

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        out = self.diag * v
        out = out.astype(np.result_type(out, v, complex if self.flavor == "momentum" else float))
        e = self.offdiag
        if self.flavor in ("position", "lowering"):
            out[:-1] += e * v[1:]
        if self.flavor in ("position", "raising"):
            out[1:] += e * v[:-1]
        if self.flavor == "momentum":
            out[:-1] += 1j * e * v[1:]
            out[1:] -= 1j * e * v[:-1]
        return out


def hamiltonian_spectrum(params: DeformationParams, n_max: int) -> np.ndarray:
    """lambda_n = q^(2 alpha n + beta)[n] + q^(2 alpha (n+1) + beta)[n+1], n = 0..n_max."""
    n = np.arange(n_max + 1, dtype=float)
    u = params.log_qprime
    a, b = params.alpha, params.beta
    with np.errstate(over="ignore", under="ignore"):
        first = params.q ** (2 * a * n + b) * q_bracket(n, u)
        second = params.q ** (2 * a * (n + 1) + b) * q_bracket(n + 1, u)
    first[0] = 0.0
    return first + second


def build_operator(params: DeformationParams, flavor: str, dim: int) -> JacobiOperator:
    """Truncated matrix of a, a+, N, Q = a + a+, P = (a+ - a)/i or H = aa+ + a+a."""
    if flavor not in FLAVORS:
        raise DomainError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")
    if dim < 2:
        raise DomainError("dim must be at least 2")
    f = structure_sequence(params, dim - 1)
    zeros_d = np.zeros(dim)
    if flavor == "hamiltonian":
        return JacobiOperator(dim, hamiltonian_spectrum(params, dim - 1), np.zeros(dim - 1), flavor)
    if flavor == "number":
        return JacobiOperator(dim, np.arange(dim, dtype=float), np.zeros(dim - 1), flavor)
    return JacobiOperator(dim, zeros_d, f, flavor)


# ---------------------------------------------------------------------------
# defining relations


@dataclass(frozen=True)
class RelationCheck:
    name: str
    max_abs_deviation: float
    max_rel_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_rel_deviation <= self.tolerance


@dataclass(frozen=True)
class RelationReport:
    params: DeformationParams
    dim: int
    checks: tuple[RelationCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_deviation(self) -> float:
        return max(c.max_rel_deviation for c in self.checks)


def _compare(name: str, lhs: np.ndarray, rhs: np.ndarray, scale: np.ndarray, tol: float) -> RelationCheck:
    diff = np.abs(lhs - rhs)
    rel = diff / np.maximum(scale, 1.0)
    return RelationCheck(name, float(diff.max()), float(rel.max()), tol)


def verify_defining_relations(params: DeformationParams, dim: int, tol: float = 1e-12) -> RelationReport:
    """Check the algebra relations as matrix identities on the interior block.

    The two q-commutators

        a a+ - q^(2 alpha) a+ a      = q^(2 alpha (N+1) + beta) q'^N
        a a+ - q^(2 alpha) q' a+ a   = q^(2 alpha (N+1) + beta)

    and [N, a] = -a, [N, a+] = a+ are formed from the truncated matrices and
    compared on rows and columns 0 .. dim-2.  Deviations are measured
    relative to max(1, |a a+| + |c a+ a|) entrywise, since entries of the
    products can be large for strongly graded sequences.
    """
    if dim < 3:
        raise DomainError("dim must be at least 3")
    A = build_operator(params, "lowering", dim).to_matrix()
    Ad = build_operator(params, "raising", dim).to_matrix()
    N = build_operator(params, "number", dim).to_matrix()
    s = slice(0, dim - 1)
    aad = (A @ Ad)[s, s]
    ada = (Ad @ A)[s, s]
    n = np.arange(dim - 1, dtype=float)
    q, qp = params.q, params.qprime
    c1 = q ** (2 * params.alpha)
    c2 = c1 * qp
    with np.errstate(over="ignore", under="ignore"):
        rhs_base = q ** (2 * params.alpha * (n + 1) + params.beta)
        rhs1 = np.diag(rhs_base * qp**n)
        rhs2 = np.diag(rhs_base)
    checks = [
        _compare("q-commutator", aad - c1 * ada, rhs1, np.abs(aad) + abs(c1) * np.abs(ada), tol),
        _compare("q'-commutator", aad - c2 * ada, rhs2, np.abs(aad) + abs(c2) * np.abs(ada), tol),
    ]
    na = (N @ A - A @ N)[s, s]
    nad = (N @ Ad - Ad @ N)[s, s]
    scale_a = np.abs(A[s, s]) * (dim - 1)
    checks.append(_compare("[N,a]=-a", na, -A[s, s], scale_a, tol))
    checks.append(_compare("[N,a+]=a+", nad, Ad[s, s], np.abs(Ad[s, s]) * (dim - 1), tol))
    return RelationReport(params, dim, tuple(checks))


# ---------------------------------------------------------------------------
# self-adjointness

_TABLE_ROWS = {
    # (regime, row): (description, verdict)
    ("q<1", 1): ("alpha < 0, l-1 > 0", "convergent"),
    ("q<1", 2): ("alpha > 0, l-1 > 0", "divergent"),
    ("q<1", 3): ("alpha+l-1 < 0, l-1 < 0", "convergent"),
    ("q<1", 4): ("alpha+l-1 > 0, l-1 < 0", "divergent"),
    ("q>1", 1): ("alpha < 0, l-1 > 0", "divergent"),
    ("q>1", 2): ("alpha > 0, l-1 > 0", "convergent"),
    ("q>1", 3): ("alpha+l-1 < 0, l-1 < 0", "divergent"),
    ("q>1", 4): ("alpha+l-1 > 0, l-1 < 0", "convergent"),
}


@dataclass(frozen=True)
class SelfAdjointnessVerdict:
    """Classification of the position operator Q.

    ``series_convergent`` and the deficiency indices come from the direct
    Raabe test on f_n.  ``table_verdict`` is the published case table's
    answer (None on a table boundary, where ``table_row`` is
    ``"unclassified"``); ``agrees_with_table`` compares the two.
    """

    series_convergent: bool
    deficiency_indices: tuple[int, int]
    carleman_condition_holds: bool
    log_concavity_holds: bool
    table_row: str
    table_verdict: str | None
    direct_verdict: str
    raabe_statistic: float
    growth_rate: float
    agrees_with_table: bool | None = field(default=None)


def _on_boundary(params: DeformationParams, eps: float = 1e-12) -> bool:
    # rows with l > 1 split on the sign of alpha, rows with l < 1 on alpha + l - 1
    a, lm1 = params.alpha, params.l - 1
    if abs(lm1) <= eps:
        return True
    return abs(a) <= eps if lm1 > 0 else abs(a + lm1) <= eps


def table_verdict(params: DeformationParams) -> tuple[str, str | None]:
    """Look up the case table; returns (row label, verdict or None)."""
    if _on_boundary(params):
        return "unclassified", None
    regime = "q<1" if params.q < 1 else "q>1"
    a, lm1 = params.alpha, params.l - 1
    if lm1 > 0:
        row = 1 if a < 0 else 2
    else:
        row = 3 if a + lm1 < 0 else 4
    desc, verdict = _TABLE_ROWS[(regime, row)]
    return f"{regime} row {row}: {desc}", verdict


def raabe_statistic(params: DeformationParams, n: int = 1_000_000) -> float:
    """R = n (f_{n+1}/f_n - 1); the series sum 1/f_n converges iff R > 1 in the limit."""
    d = log_structure_function(params, n + 1) - log_structure_function(params, n)
    return n * math.expm1(d)


def growth_rate(params: DeformationParams) -> float:
    """Exponential rate gamma with f_n ~ exp(n gamma) for large n."""
    return params.alpha * params.log_q + 0.5 * max(params.log_qprime, 0.0)


def log_concavity_holds(params: DeformationParams, n_max: int = 100, rtol: float = 1e-12) -> bool:
    """f_{n-1} f_{n+1} <= f_n^2 for 1 <= n <= n_max, up to rounding."""
    lf = log_structure_sequence(params, n_max + 2)
    excess = lf[:-2] + lf[2:] - 2 * lf[1:-1]
    return bool(np.all(excess <= rtol * np.maximum(1.0, np.abs(lf[1:-1]))))


def classify_self_adjointness(params: DeformationParams, n_test: int = 1_000_000) -> SelfAdjointnessVerdict:
    """Deficiency indices of Q from convergence of sum 1/f_n.

    Convergence means indices (1, 1); divergence (the Carleman condition)
    means Q is essentially self-adjoint, indices (0, 0).
    """
    r = raabe_statistic(params, n_test)
    convergent = r > 1.0
    direct = "convergent" if convergent else "divergent"
    row, tv = table_verdict(params)
    return SelfAdjointnessVerdict(
        series_convergent=convergent,
        deficiency_indices=(1, 1) if convergent else (0, 0),
        carleman_condition_holds=not convergent,
        log_concavity_holds=log_concavity_holds(params),
        table_row=row,
        table_verdict=tv,
        direct_verdict=direct,
        raabe_statistic=r,
        growth_rate=growth_rate(params),
        agrees_with_table=None if tv is None else tv == direct,
    )


def table_representatives() -> list[tuple[str, DeformationParams]]:
    """One interior parameter point per table row, eight in total."""
    pts = {
        ("q<1", 1): (-1.0, 2.0),
        ("q<1", 2): (1.0, 2.0),
        ("q<1", 3): (-1.0, 0.0),
        ("q<1", 4): (1.0, 0.5),
        ("q>1", 1): (-1.0, 2.0),
        ("q>1", 2): (1.0, 2.0),
        ("q>1", 3): (-1.0, 0.0),
        ("q>1", 4): (1.0, 0.5),
    }
    out = []
    for (regime, row), (a, l) in pts.items():
        q = 0.5 if regime == "q<1" else 2.0
        out.append((f"{regime} row {row}", DeformationParams(a, 0.0, l, q)))
    return out


# ---------------------------------------------------------------------------
# spectra


def truncated_position_spectrum(params: DeformationParams, dim: int) -> np.ndarray:
    """Eigenvalues of the dim x dim position matrix, sorted descending.

    Uses Sturm-count bisection with geometric midpoints, which keeps
    relative accuracy for every eigenvalue of a graded Jacobi matrix.
    """
    if dim < 2:
        raise DomainError("dim must be at least 2")
    return zero_diagonal_jacobi_eigvals(structure_sequence(params, dim - 1))


def parameter_grid(alphas: Iterable[float], ls: Iterable[float], q: float, beta: float = 0.0) -> list[DeformationParams]:
    return [DeformationParams(a, beta, l, q) for a in alphas for l in ls]

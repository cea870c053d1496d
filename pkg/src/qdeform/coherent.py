"""Barut-Girardello coherent states and generating-function identities.

A coherent state is the eigenvector of the annihilator,

    |z> = N^-1 sum_n z^n / f_{n-1}! |n>,   f_{n-1}! = f_0 f_1 ... f_{n-1},

with N^2(|z|^2) = sum_n |z|^(2n) / (f_{n-1}!)^2.  The defining sums are
normative; closed forms are cross-checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError, RestrictionError, TruncationError
from .oscillator import (
    DeformationParams,
    growth_rate,
    log_structure_function,
    log_structure_sequence,
    preset,
    structure_sequence,
)
from .polynomials import (
    DISCRETE_I_POINT,
    DISCRETE_II_POINT,
    recurrence_table_for,
)
from .qnum import basic_hypergeometric, q_pochhammer, q_pochhammer_inf

GF_FAMILIES = ("discrete_II", "hermite_I", "generalized_I", "generalized_II")


# ---------------------------------------------------------------------------
# structure factorials


def log_structure_factorial(params: DeformationParams, n: int) -> float:
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n == 0:
        return 0.0
    return float(np.sum(log_structure_sequence(params, n)))


def structure_factorial(params: DeformationParams, n: int) -> float:
    """f_{n-1}! = f_0 ... f_{n-1}; the empty product is 1."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    return float(np.prod(structure_sequence(params, n))) if n else 1.0


def structure_factorial_closed_form(kind: str, params: DeformationParams, n: int) -> float:
    """Closed forms of f_{n-1}! for the three coherent-state families.

    hermite_I       sqrt( q^(n(n-1)/2) (q;q)_n / (1-q)^n )
    generalized_I   sqrt( q^(alpha n^2) q^((alpha+beta) n) (q';q')_n / (1-q')^n )
    generalized_II  sqrt( q^(beta n) q^(alpha n(n+1)) (q';q')_n / (1-q')^n )
    """
    q = params.q
    if kind == "hermite_I":
        val = q ** (n * (n - 1) / 2) * q_pochhammer(q, q, n) / (1 - q) ** n
    elif kind == "generalized_I":
        qp = params.qprime
        val = q ** (params.alpha * n * n) * q ** ((params.alpha + params.beta) * n) * q_pochhammer(qp, qp, n) / (1 - qp) ** n
    elif kind == "generalized_II":
        qp = params.qprime
        val = q ** (params.beta * n) * q ** (params.alpha * n * (n + 1)) * q_pochhammer(qp, qp, n) / (1 - qp) ** n
    else:
        raise DomainError(f"unknown closed-form family {kind!r}")
    return math.sqrt(val)


# ---------------------------------------------------------------------------
# convergence radius


def convergence_radius(params: DeformationParams) -> float:
    """Radius in |z| of the coherent-state series sum z^n / f_{n-1}!.

    Infinite when f_n grows exponentially, zero when f_n decays, and the
    limit of f_n when it tends to a constant.
    """
    g = growth_rate(params)
    if g > 1e-12:
        return math.inf
    if g < -1e-12:
        return 0.0
    if params.l == 1:
        # f_n ~ q^(alpha (n+1)) sqrt(n+1) with alpha ln q == 0 -> grows like sqrt(n)
        return math.inf
    return math.exp(log_structure_function(params, 10_000))


def _tail_ratio(params: DeformationParams, zabs: float, start: int, span: int = 2000) -> float:
    """sup over n in [start, start+span) of |z|^2 / f_n^2, the tail domination ratio."""
    lf = log_structure_sequence(params, start + span)[start:]
    return float(np.exp(2 * (math.log(zabs) - lf.min()))) if zabs > 0 else 0.0


# ---------------------------------------------------------------------------
# states


@dataclass(frozen=True)
class CoherentState:
    z: complex
    params: DeformationParams
    coefficients: np.ndarray  # normalized c_n / N
    norm_factor: float  # N = sqrt(N^2)
    n_trunc: int
    tail_bound: float
    raw_coefficients: np.ndarray = field(repr=False, default=None)  # z^n / f_{n-1}!


def _raw_coefficients(params: DeformationParams, z: complex, n_trunc: int) -> np.ndarray:
    f = structure_sequence(params, n_trunc)
    c = np.empty(n_trunc, dtype=complex)
    c[0] = 1.0
    for n in range(1, n_trunc):
        c[n] = c[n - 1] * z / f[n - 1]
    return c


def coherent_state(params: DeformationParams, z: complex, n_trunc: int = 200, tol: float = 1e-13) -> CoherentState:
    """Normalized truncated coherent state.

    The truncation remainder of sum |c_n|^2 is bounded by geometric
    domination, |c_N|^2 rho / (1 - rho) with rho = sup |z|^2 / f_n^2 beyond
    N.  A TruncationError is raised when z lies outside the convergence
    radius or the relative bound exceeds ``tol``.
    """
    z = complex(z)
    if n_trunc < 2:
        raise DomainError("n_trunc must be at least 2")
    if z == 0:
        c = np.zeros(n_trunc, dtype=complex)
        c[0] = 1.0
        return CoherentState(z, params, c, 1.0, n_trunc, 0.0, c.copy())
    radius = convergence_radius(params)
    if not abs(z) < radius:
        raise TruncationError(f"|z|={abs(z):g} is outside the convergence radius {radius:g} of the coherent-state series")
    with np.errstate(over="ignore", invalid="ignore"):
        raw = _raw_coefficients(params, z, n_trunc)
        norm2 = float(np.sum(np.abs(raw) ** 2))
    if not math.isfinite(norm2):
        raise TruncationError("coefficients overflow before the tail is certified; lower |z| or n_trunc")
    rho = _tail_ratio(params, abs(z), n_trunc - 1)
    if rho >= 1:
        raise TruncationError(f"tail ratio {rho:g} >= 1 at n_trunc={n_trunc}; increase n_trunc")
    last = abs(raw[-1]) ** 2
    tail = last * rho / (1 - rho)
    rel_tail = tail / norm2
    if rel_tail > tol:
        raise TruncationError(f"tail bound {rel_tail:.3g} exceeds tol {tol:g}; increase n_trunc")
    nf = math.sqrt(norm2)
    return CoherentState(z, params, raw / nf, nf, n_trunc, rel_tail, raw)


def eigen_residual(state: CoherentState, params: DeformationParams | None = None) -> float:
    """||(a - z)|z>|| over components 0..N-2, divided by ||z>||."""
    params = state.params if params is None else params
    c = state.coefficients
    f = structure_sequence(params, c.size - 1)
    resid = f * c[1:] - state.z * c[:-1]
    norm = np.linalg.norm(c)
    return float(np.linalg.norm(resid) / norm) if norm else 0.0


def overlap(state1: CoherentState, state2: CoherentState) -> complex:
    """<z1|z2> as the direct sum of conj(c_n(z1)) c_n(z2)."""
    if state1.params != state2.params:
        raise DomainError("overlap needs both states built from the same parameters")
    n = min(state1.n_trunc, state2.n_trunc)
    return complex(np.vdot(state1.coefficients[:n], state2.coefficients[:n]))


def overlap_series(params: DeformationParams, z1: complex, z2: complex, tol: float = 1e-16) -> complex:
    """<z1|z2> from the normalization series: S(conj(z1) z2) / sqrt(S(|z1|^2) S(|z2|^2))."""
    w = complex(z1).conjugate() * complex(z2)
    num = _factorial_series(params, w, tol)
    den = math.sqrt(normalization_factor(params, abs(z1) ** 2, tol) * normalization_factor(params, abs(z2) ** 2, tol))
    return complex(num) / den


def _factorial_series(params: DeformationParams, w: complex, tol: float, max_terms: int = 100_000) -> complex:
    """sum_n w^n / (f_{n-1}!)^2 with a geometric tail bound."""
    if w == 0:
        return 1.0
    radius = convergence_radius(params)
    if not abs(w) < radius**2:
        raise ConvergenceError(f"|w|={abs(w):g} outside the radius {radius**2:g} of the normalization series")
    total = 1.0 + 0j
    term = 1.0 + 0j
    chunk = 512
    n = 0
    while n < max_terms:
        f = structure_sequence(params, n + chunk)[n:]
        for fk in f:
            term = term * w / (fk * fk)
            n += 1
            total += term
            ratio = abs(w) / (fk * fk)
            if not math.isfinite(abs(total)):
                raise ConvergenceError("normalization series overflowed")
            if ratio < 1 and abs(term) * ratio / (1 - ratio) <= tol * abs(total) and n > 2:
                # the next ratios keep shrinking once f_n is increasing
                rho = _tail_ratio(params, math.sqrt(abs(w)), n, 200)
                if rho < 1 and abs(term) * rho / (1 - rho) <= tol * abs(total):
                    return total
    raise ConvergenceError(f"normalization series did not converge in {max_terms} terms")


def normalization_factor(params: DeformationParams, zsq: float, tol: float = 1e-16) -> float:
    """N^2(|z|^2) = sum_n zsq^n / (f_{n-1}!)^2 (the defining sum)."""
    if zsq < 0:
        raise DomainError("zsq must be nonnegative")
    return float(_factorial_series(params, zsq, tol).real)


def normalization_closed_form(kind: str, params: DeformationParams, zsq: float, tol: float = 1e-17) -> float:
    """Closed-form N^2 displays.

    hermite_I       2phi0(0, 0; -; q; (1-q) zsq)
    generalized_I   sum_n (sqrt(1-q') zsq / q^(2a+b))^n q^(-a n(n-1)) / (q';q')_n
    generalized_II  sum_n q^(-a n(n+1)) / (q';q')_n ((1-q') zsq / q^b)^n

    The generalized_I display carries sqrt(1-q') where the defining sum has
    (1-q'); :func:`normalization_closed_form` evaluates the display as
    written so the discrepancy stays visible.
    """
    q = params.q
    if kind == "hermite_I":
        sv = basic_hypergeometric("2phi0", [0.0, 0.0], [], q, (1 - q) * zsq)
        return float(complex(sv.value).real)
    qp = params.qprime
    a, b = params.alpha, params.beta
    if kind == "generalized_I":
        x = math.sqrt(1 - qp) * zsq / q ** (2 * a + b) if qp < 1 else None
        if x is None:
            raise DomainError("the generalized_I display needs q' < 1 (it contains sqrt(1-q'))")
        expo = lambda n: -a * n * (n - 1)  # noqa: E731
    elif kind == "generalized_II":
        x = (1 - qp) * zsq / q**b
        expo = lambda n: -a * n * (n + 1)  # noqa: E731
    else:
        raise DomainError(f"unknown closed-form family {kind!r}")
    total, n = 0.0, 0
    while n < 100_000:
        poch = q_pochhammer(qp, qp, n)
        term = x**n * q ** expo(n) / poch
        if not math.isfinite(term):
            raise ConvergenceError("closed-form normalization series diverges")
        total += term
        if n > 3 and abs(term) <= tol * abs(total):
            return total
        n += 1
    raise ConvergenceError("closed-form normalization series did not converge")


# ---------------------------------------------------------------------------
# generating functions


@dataclass(frozen=True)
class GeneratingFunctionCheck:
    """Both sides of a generating-function identity.

    ``status`` is pass or fail for the asserted identity and pass or
    flagged for the others.  When a display cannot be evaluated as
    written, ``closed_side`` is None and ``note`` says why.  The
    ``reconstructed_*`` fields hold a corrected identity that does hold,
    evaluated at matching arguments.
    """

    name: str
    status: str
    series_side: complex | None
    closed_side: complex | None
    gap: float | None
    tolerance: float
    reconstructed_series: complex | None = None
    reconstructed_closed: complex | None = None
    reconstructed_gap: float | None = None
    note: str = ""


def _series_sum(coeff, hvals_fn, t: complex, n_max: int, tol: float = 1e-17) -> complex:
    """sum_n coeff(n) h_n t^n, stopped once the geometric tail bound is below tol.

    Raises ConvergenceError when terms overflow or stop decreasing before
    the bound is met.
    """
    h = hvals_fn(n_max)
    total = 0j
    mags: list[float] = []
    for n in range(n_max + 1):
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                term = coeff(n) * h[n] * t**n
        except OverflowError:
            term = complex("inf")
        if not cmath.isfinite(term):
            raise ConvergenceError(f"series term overflowed at n={n} before the tail bound was met")
        total += term
        mags.append(abs(term))
        if n >= 8:
            env = max(mags[-4:])
            prev = max(mags[-8:-4])
            if env == 0.0:
                return total
            rho = env / prev if prev else math.inf
            if rho < 1 and env * rho / (1 - rho) <= tol * max(abs(total), 1e-300):
                return total
    raise ConvergenceError(f"generating-function series not converged within n_max={n_max} terms")


def _hvals(kind: str, params: DeformationParams, x: complex):
    return lambda n_max: recurrence_table_for(kind, params, n_max, [x])[0]


def _qp_n(base: float, n: int) -> float:
    return q_pochhammer(base, base, n)


def _type_II_identity(q: float, x: float, t: complex, n_max: int) -> tuple[complex, complex]:
    params = DeformationParams(*DISCRETE_II_POINT, q)
    series = _series_sum(lambda n: (-1) ** n * q ** (n * (n - 1)) / _qp_n(q, n), _hvals("discrete_II", params, x), t, n_max)
    closed = q_pochhammer_inf(-1j * t, q).value * complex(basic_hypergeometric("1phi1", [1j * x], [-1j * t], q, 1j * t).value)
    return series, closed


def _coh0_reconstructed(p: float, x: complex, t: complex, n_max: int) -> tuple[complex, complex]:
    """Base p > 1: sum (-1)^n p^(-C(n,2))/(p;p)_n h_n(x;p) t^n = (-t/p; 1/p)_inf 1phi1(x; -t/p; 1/p; t/p)."""
    params = DeformationParams(*DISCRETE_I_POINT, p)
    series = _series_sum(lambda n: (-1) ** n * p ** (-n * (n - 1) / 2) / _qp_n(p, n), _hvals("discrete_I", params, x), t, n_max)
    r = 1 / p
    closed = q_pochhammer_inf(-t * r, r).value * complex(basic_hypergeometric("1phi1", [x], [-t * r], r, t * r).value)
    return series, closed


def _gap(a: complex | None, b: complex | None) -> float | None:
    if a is None or b is None:
        return None
    return abs(a - b) / max(1.0, abs(b))


def generating_function_check(
    family: str,
    x: float,
    t: complex,
    q: float = 0.5,
    params: DeformationParams | None = None,
    n_max: int = 120,
    tol: float = 1e-8,
) -> GeneratingFunctionCheck:
    """Evaluate a generating-function identity on both sides.

    discrete_II      sum (-1)^n q^(n(n-1))/(q;q)_n h~_n(x) t^n
                       = (-it; q)_inf 1phi1(ix; -it; q; it)          asserted
    hermite_I        sum (-1)^n q^(-C(n,2))/(q;q)_n h_n(x) t^n
                       = (qt; 1/q)_inf 1phi1(x; tq; 1/q; -tq)       as displayed
    generalized_I    restricted alpha = (l-1)/2 extension of the above
    generalized_II   restricted alpha = -(l-1) extension of the discrete_II identity
    """
    t = complex(t)
    if family == "discrete_II":
        s, c = _type_II_identity(q, x, t, n_max)
        g = _gap(s, c)
        return GeneratingFunctionCheck("gf-type-II", "pass" if g <= tol else "fail", s, c, g, tol)
    if family == "hermite_I":
        return _check_coh0(x, t, q, n_max, tol)
    if family == "generalized_I":
        if params is None:
            raise DomainError("generalized_I generating function needs parameters")
        return _check_gcohr0(params, x, t, n_max, tol)
    if family == "generalized_II":
        if params is None:
            raise DomainError("generalized_II generating function needs parameters")
        return _check_gcoh3(params, x, t, n_max, tol)
    raise DomainError(f"unknown generating-function family {family!r}; expected one of {GF_FAMILIES}")


def _try(fn):
    try:
        return fn(), ""
    except (ConvergenceError, DomainError) as exc:
        return None, str(exc)


def _check_coh0(x: float, t: complex, q: float, n_max: int, tol: float) -> GeneratingFunctionCheck:
    params = DeformationParams(*DISCRETE_I_POINT, q)
    series, why_s = _try(
        lambda: _series_sum(lambda n: (-1) ** n * q ** (-n * (n - 1) / 2) / _qp_n(q, n), _hvals("discrete_I", params, x), t, n_max)
    )

    def closed_fn():
        r = 1 / q
        return q_pochhammer_inf(q * t, r).value * complex(basic_hypergeometric("1phi1", [x], [t * q], r, -t * q).value)

    closed, why_c = _try(closed_fn)
    g = _gap(series, closed)
    # the corrected identity lives at base 1/q > 1, where the series converges
    rs, rc = _coh0_reconstructed(1 / q, x, t, n_max)
    status = "pass" if g is not None and g <= tol else "flagged"
    note = "; ".join(m for m in (why_s and f"series side: {why_s}", why_c and f"closed side: {why_c}") if m)
    return GeneratingFunctionCheck("gf-hermite-I", status, series, closed, g, tol, rs, rc, _gap(rs, rc), note)


def _check_gcohr0(params: DeformationParams, x: float, t: complex, n_max: int, tol: float) -> GeneratingFunctionCheck:
    a, b, q, qp = params.alpha, params.beta, params.q, params.qprime
    if abs(a - (params.l - 1) / 2) > 1e-12:
        raise RestrictionError("generalized_I generating function needs alpha = (l-1)/2")
    if not qp > 1:
        raise DomainError("the generalized_I generating function converges only for q' > 1 (l < 1)")
    hv = _hvals("generalized_I", params, x)
    series, why_s = _try(
        lambda: _series_sum(lambda n: (-1) ** n * q ** (-(2 * a + b) * n) * q ** (-a * n * (n - 1)) / _qp_n(q, n), hv, t, n_max)
    )

    def closed_fn():
        # on the restriction the n-dependence in the upper parameter cancels
        upper = q ** (-b / 2) * qp ** (-0.5) * x
        r = 1 / qp
        return q_pochhammer_inf(t * qp, r).value * complex(basic_hypergeometric("1phi1", [upper], [qp * t], r, -t * qp).value)

    closed, why_c = _try(closed_fn)
    g = _gap(series, closed)
    # corrected: (q';q')_n in the coefficient, identity is the base-q' type-I one
    s = q ** ((2 * a + b) / 2)
    rs = _series_sum(lambda n: (-1) ** n * q ** (-(2 * a + b) * n) * q ** (-a * n * (n - 1)) / _qp_n(qp, n), hv, t, n_max)
    T = t / s
    r = 1 / qp
    rc = q_pochhammer_inf(-T * r, r).value * complex(basic_hypergeometric("1phi1", [x / s], [-T * r], r, T * r).value)
    status = "pass" if g is not None and g <= tol else "flagged"
    note = "; ".join(m for m in (why_s and f"series side: {why_s}", why_c and f"closed side: {why_c}") if m)
    return GeneratingFunctionCheck("gf-generalized-I", status, series, closed, g, tol, rs, rc, _gap(rs, rc), note)


def _check_gcoh3(params: DeformationParams, x: float, t: complex, n_max: int, tol: float) -> GeneratingFunctionCheck:
    a, b, q, qp = params.alpha, params.beta, params.q, params.qprime
    if abs(a + (params.l - 1)) > 1e-12:
        raise RestrictionError("generalized_II generating function needs alpha = -(l-1)")
    if not 0 < qp < 1:
        raise DomainError("the generalized_II generating function needs q' < 1 (l > 1)")
    hv = _hvals("generalized_II", params, x)
    series, why_s = _try(lambda: _series_sum(lambda n: (-1) ** n * q ** (-a * n * n) / _qp_n(q, n), hv, t, n_max))
    note = "closed side: upper parameter depends on the summation index n and cannot be evaluated as displayed"
    if why_s:
        note = f"series side: {why_s}; " + note
    s = q ** ((a + b / 2) / 2)
    rs = _series_sum(lambda n: (-1) ** n * q ** (-a * n * n) / _qp_n(qp, n), hv, t, n_max)
    T = qp * s * t
    rc = q_pochhammer_inf(-1j * T, qp).value * complex(basic_hypergeometric("1phi1", [1j * x / s], [-1j * T], qp, 1j * T).value)
    return GeneratingFunctionCheck("gf-generalized-II", "flagged", series, None, None, tol, rs, rc, _gap(rs, rc), note)


# ---------------------------------------------------------------------------
# convenience


def family_params(name: str, q: float = 0.5) -> DeformationParams:
    """Parameters for the coherent-state families by name."""
    if name in ("hermite_I", "hermite_II"):
        return preset(name, q)
    raise DomainError(f"no default parameters for {name!r}; pass DeformationParams explicitly")

"""Verification suites driven by ``qdeform verify``.

Each suite takes a :class:`SuiteContext` and returns a list of
:class:`Check` records.  A check compares two sides of an identity and
carries a status of ``pass``, ``fail`` or ``flagged``; ``flagged`` is used
only for the coherent-state generating-function and normalization displays
that do not hold as written but have a reconstructed form that does.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import coherent, measures, oscillator, polynomials
from .errors import ConvergenceError, DomainError, RestrictionError
from .oscillator import DeformationParams
from .polynomials import DISCRETE_I_POINT, PolynomialFamily

DEFAULT_TOLERANCES: dict[str, float] = {
    "relations": 1e-12,
    "hamiltonian": 1e-13,
    "routes": 1e-10,
    "transition": 1e-12,
    "duality": 1e-11,
    "orthogonality": 1e-7,
    "gf": 1e-8,
    "factorial": 1e-12,
    "coherent": 1e-10,
    "overlap": 1e-12,
    "normalization": 1e-12,
    "ratio": 1e-12,
    "spectrum": 1e-6,
    "classical_limit": 1e-3,
}

ROUTE_X_GRID = (-2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0)
DUALITY_X_GRID = (-2.0, -1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0, 2.0)
GF_X_GRID = (0.0, 0.5, -0.5)
GF_T_GRID = (0.1, 0.2)
COHERENT_Z_GRID = (0.0, 0.5, 1.0, cmath.exp(0.25j * math.pi), -0.3 + 0.4j)

# restricted points used when the context does not supply one
GCOHR0_DEFAULT = (-0.25, 0.3, 0.5)  # alpha = (l-1)/2, q' > 1 for q < 1
GCOH3_DEFAULT = (-0.5, 0.3, 1.5)  # alpha = -(l-1), q' < 1 for q < 1


@dataclass
class Check:
    name: str
    status: str
    lhs: object = None
    rhs: object = None
    gap: float | None = None
    tolerance: float | None = None
    note: str = ""

    def as_dict(self) -> dict:
        out = {
            "name": self.name,
            "status": self.status,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "tolerance": self.tolerance,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class SuiteContext:
    """Inputs shared by all suites."""

    params: DeformationParams
    family: PolynomialFamily | None
    tolerances: dict[str, float] = field(default_factory=dict)
    k_max: int = 80
    dim: int = 64
    n_trunc: int = 200

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, DEFAULT_TOLERANCES[name])


def _status(gap: float | None, tol: float) -> str:
    return "pass" if gap is not None and math.isfinite(gap) and gap <= tol else "fail"


def _check(name: str, lhs, rhs, gap: float, tol: float, note: str = "") -> Check:
    return Check(name, _status(gap, tol), lhs, rhs, gap, tol, note)


def _scaled(diff: float, scale: float) -> float:
    # scale is zero only where every term vanishes, e.g. odd degree at x = 0
    return diff / scale if scale > 0 else diff


def _need_family(ctx: SuiteContext, suite: str) -> PolynomialFamily:
    if ctx.family is None:
        raise DomainError(f"suite {suite!r} needs a polynomial family (q must lie in (0, 1))")
    return ctx.family


# ---------------------------------------------------------------------------
# operator algebra


def suite_relations(ctx: SuiteContext) -> list[Check]:
    """Defining commutation relations and the Hamiltonian diagonal."""
    p = ctx.params
    tol = ctx.tol("relations")
    rep = oscillator.verify_defining_relations(p, ctx.dim, tol)
    out = [
        Check(f"relations/{c.name}", "pass" if c.passed else "fail", None, None, c.max_rel_deviation, c.tolerance)
        for c in rep.checks
    ]
    out.append(hamiltonian_check(p, 100, ctx.tol("hamiltonian")))
    if p.alpha == 0 and p.beta == 0 and p.l == 1:
        lam = oscillator.hamiltonian_spectrum(p, 100)
        expect = 2 * np.arange(101) + 1.0
        gap = float(np.max(np.abs(lam - expect)))
        out.append(_check("relations/classical-hamiltonian-2n+1", float(lam[-1]), float(expect[-1]), gap, 1e-12))
    return out


def hamiltonian_check(p: DeformationParams, n_max: int, tol: float) -> Check:
    """lambda_n from the closed expression against f_{n-1}^2 + f_n^2."""
    lam = oscillator.hamiltonian_spectrum(p, n_max)
    f = oscillator.structure_sequence(p, n_max + 1)
    direct = f**2 + np.concatenate([[0.0], f[:-1] ** 2])
    rel = np.abs(lam - direct) / np.abs(direct)
    i = int(np.argmax(rel))
    return _check("relations/hamiltonian-diagonal", float(lam[i]), float(direct[i]), float(rel[i]), tol)


def suite_self_adjointness(ctx: SuiteContext) -> list[Check]:
    """Ratio test against the case table, at the context point and at one point per row."""
    out = []
    v = oscillator.classify_self_adjointness(ctx.params)
    if v.table_verdict is None:
        # the table says nothing on its boundaries; only the direct test applies
        out.append(Check("self-adjointness/context-point", "pass", v.direct_verdict, None, None, None,
                         "table boundary: unclassified"))
    else:
        out.append(Check("self-adjointness/context-point", "pass" if v.agrees_with_table else "fail",
                         v.direct_verdict, v.table_verdict, None, None, v.table_row))
    for label, rp in oscillator.table_representatives():
        rv = oscillator.classify_self_adjointness(rp)
        out.append(Check(f"self-adjointness/{label}", "pass" if rv.agrees_with_table else "fail",
                         rv.direct_verdict, rv.table_verdict, None, None,
                         f"alpha={rp.alpha:g} l={rp.l:g} q={rp.q:g}"))
    return out


# ---------------------------------------------------------------------------
# polynomial routes


def _route_gap(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(a))


def suite_routes(ctx: SuiteContext, n_max: int = 30) -> list[Check]:
    """Recurrence against explicit sum and basic hypergeometric form; transition coefficients."""
    fam = _need_family(ctx, "routes")
    polynomials.require_restriction(fam)
    tol = ctx.tol("routes")
    out = []
    for x in ROUTE_X_GRID:
        rec = np.asarray(polynomials.recurrence_table_for(fam.kind, fam.params, n_max, x)).reshape(-1)
        for route, fn in (("explicit", polynomials.eval_explicit), ("hypergeometric", polynomials.eval_hypergeometric)):
            worst, wl, wr = -1.0, None, None
            for n in range(n_max + 1):
                other = complex(fn(fam, n, x))
                g = _route_gap(complex(rec[n]), other)
                if g > worst:
                    worst, wl, wr = g, rec[n].real, other.real
            out.append(_check(f"routes/recurrence-vs-{route} x={x:g}", wl, wr, worst, tol))
    if fam.kind != "classical":
        ttol = ctx.tol("transition")
        xs = np.array([-1.0, -0.5, 0.3, 0.8, 1.5])
        res = polynomials.transition_recurrence_residual(fam, n_max, xs)
        out.append(_check("routes/transition-coefficient-recurrence", None, None, res, ttol))
        res = polynomials.intermediate_recurrence_residual(fam, n_max, xs)
        out.append(_check("routes/rescaled-recurrence", None, None, res, ttol))
    return out


def suite_generalized_closed_form(ctx: SuiteContext) -> list[Check]:
    """Predicted x^0 coefficient ratio of explicit sum to recurrence at n = 2.

    Passes when the observed ratio equals the prediction, which is 1 on the
    restriction and a known power of q and q' off it.
    """
    p = ctx.params
    if not 0 < p.q < 1 or p.l == 1:
        raise DomainError("generalized closed forms need 0 < q < 1 and l != 1")
    tol = ctx.tol("ratio")
    out = []
    for kind in ("generalized_I", "generalized_II"):
        fam = PolynomialFamily(kind, p)
        obs, pred = polynomials.restriction_gap_ratio(fam)
        r = polynomials.validity_restriction(fam)
        note = "on restriction" if r.satisfied else "off restriction: mismatch expected"
        out.append(_check(f"generalized-closed-form/{kind}-x0-ratio", obs, pred, abs(obs - pred) / abs(pred), tol, note))
    return out


def suite_duality(ctx: SuiteContext, n_max: int = 20) -> list[Check]:
    """q -> 1/q duality between the two discrete families and its generalized display."""
    q = ctx.params.q
    if not 0 < q < 1:
        raise DomainError("duality needs 0 < q < 1")
    tol = ctx.tol("duality")
    out = []
    disc = PolynomialFamily.discrete_I(q)
    gen = PolynomialFamily.generalized_I(*DISCRETE_I_POINT, q)
    disc2 = PolynomialFamily.discrete_II(q)
    for label, fam in (("discrete", disc), ("generalized-display-at-discrete-point", gen)):
        worst, wl, wr = -1.0, None, None
        for n in range(n_max + 1):
            for x in DUALITY_X_GRID:
                lhs, rhs = polynomials.duality_transform(fam, n, x)
                # relative to the absolute-term sum, which stays positive at roots
                g = _scaled(abs(lhs - rhs), polynomials.absolute_term_sum(disc2, n, x))
                if g > worst:
                    worst, wl, wr = g, lhs, rhs
        out.append(_check(f"duality/{label}", wl, wr, worst, tol))
    # the display sum at the discrete point is the discrete type-II polynomial itself
    worst = 0.0
    for n in range(n_max + 1):
        for x in DUALITY_X_GRID:
            s = polynomials.duality_display_sum(gen.params, n, x)
            h = polynomials.eval_recurrence(disc2, n, x)
            worst = max(worst, _scaled(abs(s - h), polynomials.absolute_term_sum(disc2, n, x)))
    out.append(_check("duality/display-sum-equals-discrete-II", None, None, worst, tol))
    return out


def suite_classical_limit(ctx: SuiteContext, q_near_1: float = 0.9999) -> list[Check]:
    """Type-I ladder coefficients approach sqrt(n + 1) as q -> 1."""
    rep = polynomials.classical_limit_check(q_near_1)
    return [_check(f"classical-limit/ladder q={q_near_1:g}", None, None, rep.ladder_max_rel_dev, ctx.tol("classical_limit"))]


# ---------------------------------------------------------------------------
# measures and spectra


def suite_orthogonality(ctx: SuiteContext, n_max: int = 10) -> list[Check]:
    """Discrete orthogonality of the orthonormal polynomials for 0 <= m, n <= n_max."""
    fam = _need_family(ctx, "orthogonality")
    if fam.kind == "classical":
        raise DomainError("the classical family has a continuous measure; no lattice orthogonality")
    polynomials.require_restriction(fam)
    tol = ctx.tol("orthogonality")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        G, rhs = measures.orthogonality_gram(fam, n_max, ctx.k_max)
    target = rhs * np.eye(n_max + 1)
    err = np.abs(G - target)
    m, n = np.unravel_index(int(np.argmax(err)), err.shape)
    out = [_check(f"orthogonality/gram m,n<={n_max} worst=({m},{n})", float(G[m, n]), float(target[m, n]),
                  float(err[m, n]), tol, f"k_max={ctx.k_max} c={fam.c:g}")]
    if fam.is_type_I:
        meas = measures.build_measure(fam, ctx.k_max)
        head = float(meas.weights[meas.k_index == 0][0])
        closed = measures.head_weight_closed_form(fam)
        out.append(_check("orthogonality/head-weight", head, closed, abs(head - closed) / closed, 1e-12))
    return out


def suite_spectra(ctx: SuiteContext) -> list[Check]:
    """Truncated position eigenvalues against the analytic lattice."""
    fam = _need_family(ctx, "spectra")
    if fam.kind == "classical":
        v = oscillator.classify_self_adjointness(ctx.params)
        return [Check("spectra/classical-carleman", "pass" if v.carleman_condition_holds else "fail",
                      v.direct_verdict, "divergent", None, None, "no point lattice; continuous spectrum")]
    polynomials.require_restriction(fam)
    dim = max(ctx.dim, 128)
    cmp = measures.compare_spectra(fam, dim)
    if fam.is_type_I:
        tol = ctx.tol("spectrum")
        return [
            _check(f"spectra/head-gap dim={cmp.dims[-1]}", float(cmp.eigenvalues[-1, 0]), float(cmp.lattice_points[-1, 0]),
                   cmp.head_gap, tol),
            Check(f"spectra/monotone dims={list(cmp.dims)}", "pass" if cmp.monotone else "fail", None, None,
                  None, None, "top-3 gaps non-increasing with dim"),
        ]
    # type II: the zero-diagonal Jacobi spectrum is symmetric about the origin
    ev = oscillator.truncated_position_spectrum(ctx.params, dim)
    asym = float(np.max(np.abs(ev + ev[::-1]) / np.maximum(1.0, np.abs(ev))))
    return [_check(f"spectra/symmetric dim={dim}", None, None, asym, 1e-12,
                   "lattice matching for type II is reported by `qdeform spectrum`")]


# ---------------------------------------------------------------------------
# coherent states


def _coherent_kinds(p: DeformationParams) -> list[tuple[str, DeformationParams]]:
    q = p.q if 0 < p.q < 1 else 0.5
    return [
        ("hermite_I", oscillator.preset("hermite_I", q)),
        ("generalized_I", DeformationParams(-0.5, 0.2, 2.0, q)),
        ("generalized_II", DeformationParams(-0.5, 0.2, 1.7, q)),
    ]


def suite_factorials(ctx: SuiteContext, n_max: int = 20) -> list[Check]:
    """Structure-factorial closed forms and normalization series for the three families."""
    tol = ctx.tol("factorial")
    out = []
    for kind, p in _coherent_kinds(ctx.params):
        worst = 0.0
        for n in range(n_max + 1):
            a = coherent.structure_factorial(p, n)
            b = coherent.structure_factorial_closed_form(kind, p, n)
            worst = max(worst, abs(a - b) / abs(b))
        out.append(_check(f"factorials/{kind} n<={n_max}", a, b, worst, tol))
    ntol = ctx.tol("normalization")
    for kind, p in _coherent_kinds(ctx.params)[1:]:
        zsq = 0.25
        series = coherent.normalization_factor(p, zsq)
        closed = coherent.normalization_closed_form(kind, p, zsq)
        gap = abs(series - closed) / abs(series)
        if kind == "generalized_II":
            out.append(_check(f"factorials/normalization-{kind}", series, closed, gap, ntol))
        else:
            st = "pass" if gap <= ntol else "flagged"
            out.append(Check(f"factorials/normalization-{kind}", st, series, closed, gap, ntol,
                             "" if st == "pass" else "display uses sqrt(1 - q'); series matches with (1 - q')"))
    return out


def suite_coherent(ctx: SuiteContext) -> list[Check]:
    """Annihilation-operator eigen residual and unit norm on a small z grid."""
    p = ctx.params
    radius = coherent.convergence_radius(p)
    zs = [z for z in COHERENT_Z_GRID if abs(z) < radius]
    if len(zs) < 2:
        raise DomainError(f"coherent-state series has convergence radius {radius:g}; no nonzero z on the test grid")
    rtol, otol = ctx.tol("coherent"), ctx.tol("overlap")
    out = []
    for z in zs:
        label = f"z={_fmt_z(z)}"
        try:
            st = coherent.coherent_state(p, z, ctx.n_trunc)
        except ConvergenceError as exc:
            out.append(Check(f"coherent/residual {label}", "fail", None, None, None, rtol, str(exc)))
            continue
        res = coherent.eigen_residual(st)
        out.append(_check(f"coherent/residual {label}", None, None, res, rtol))
        ov = coherent.overlap(st, st)
        out.append(_check(f"coherent/norm {label}", ov, 1.0, abs(ov - 1), otol))
    return out


def _fmt_z(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:g}"
    return f"{z.real:.4g}{z.imag:+.4g}i"


# ---------------------------------------------------------------------------
# generating functions


def _gf_check(name: str, r: coherent.GeneratingFunctionCheck) -> Check:
    note = r.note
    if r.reconstructed_gap is not None:
        extra = f"reconstructed identity gap {r.reconstructed_gap:.3g}"
        note = f"{note}; {extra}" if note else extra
    return Check(name, r.status, r.series_side, r.closed_side, r.gap, r.tolerance, note)


def suite_generating_functions(ctx: SuiteContext) -> list[Check]:
    """Type-II generating function on a grid and the three coherent-state identities."""
    q = ctx.params.q if 0 < ctx.params.q < 1 else 0.5
    tol = ctx.tol("gf")
    out = []
    for x in GF_X_GRID:
        for t in GF_T_GRID:
            r = coherent.generating_function_check("discrete_II", x, t, q, tol=tol)
            out.append(_gf_check(f"generating-function/type-II q={q:g} x={x:g} t={t:g}", r))
    p = ctx.params
    p1 = p if abs(p.alpha - (p.l - 1) / 2) < 1e-12 and p.l < 1 and p.q < 1 else DeformationParams(*GCOHR0_DEFAULT, q)
    p2 = p if abs(p.alpha + (p.l - 1)) < 1e-12 and p.l > 1 and p.q < 1 else DeformationParams(*GCOH3_DEFAULT, q)
    x, t = 0.5, 0.1
    out.append(_gf_check("generating-function/hermite-I", coherent.generating_function_check("hermite_I", x, t, q, tol=tol)))
    out.append(_gf_check("generating-function/generalized-I",
                         coherent.generating_function_check("generalized_I", x, t, q, params=p1, tol=tol)))
    out.append(_gf_check("generating-function/generalized-II",
                         coherent.generating_function_check("generalized_II", x, t, q, params=p2, tol=tol)))
    return out


# ---------------------------------------------------------------------------
# registry

SUITES: dict[str, Callable[[SuiteContext], list[Check]]] = {
    "relations": suite_relations,
    "self-adjointness": suite_self_adjointness,
    "routes": suite_routes,
    "generalized-closed-form": suite_generalized_closed_form,
    "duality": suite_duality,
    "classical-limit": suite_classical_limit,
    "orthogonality": suite_orthogonality,
    "spectra": suite_spectra,
    "factorials": suite_factorials,
    "coherent": suite_coherent,
    "generating-functions": suite_generating_functions,
}
SUITE_NAMES = tuple(SUITES) + ("all",)


def run_suite(name: str, ctx: SuiteContext) -> tuple[list[Check], list[dict]]:
    """Run one suite, or every suite for ``"all"``.

    Returns the checks and, for ``"all"``, the suites skipped because they
    do not apply to the context (with the reason).  A single named suite
    that does not apply raises instead.
    """
    if name != "all":
        if name not in SUITES:
            raise DomainError(f"unknown suite {name!r}; expected one of {SUITE_NAMES}")
        return SUITES[name](ctx), []
    checks: list[Check] = []
    skipped: list[dict] = []
    for key, fn in SUITES.items():
        try:
            checks.extend(fn(ctx))
        except (DomainError, RestrictionError) as exc:
            skipped.append({"suite": key, "reason": str(exc)})
    return checks, skipped

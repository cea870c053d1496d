"""q-calculus primitives.

Finite and infinite q-shifted factorials, the double Pochhammer symbol and
three basic hypergeometric series.  Series follow the Gasper-Rahman term
convention

    rphis(a; b; q, z) = sum_n (a_1..a_r; q)_n / ((q; q)_n (b_1..b_s; q)_n)
                        * [(-1)^n q^(n(n-1)/2)]^(1+s-r) * z^n

which is the convention under which every polynomial representation in
:mod:`qdeform.polynomials` reproduces the recurrence-defined polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ConvergenceError, DomainError

Number = complex | float

_KINDS = {
    "2phi0": (2, 0),
    "2phi1": (2, 1),
    "1phi1": (1, 1),
}
_KIND_ALIASES = {"2φ0": "2phi0", "2φ1": "2phi1", "1φ1": "1phi1"}


@dataclass(frozen=True)
class SeriesValue:
    """A truncated sum or product with a bound on the neglected remainder."""

    value: Number
    abs_error_bound: float
    terms_used: int

    def __complex__(self) -> complex:
        return complex(self.value)

    def __float__(self) -> float:
        if isinstance(self.value, complex):
            if self.value.imag != 0.0:
                raise TypeError("complex SeriesValue cannot be converted to float")
            return self.value.real
        return float(self.value)


def _check_base(q: float) -> None:
    if not q > 0 or q == 1:
        raise DomainError(f"base q must satisfy q > 0, q != 1 (got {q!r})")


def _real_if_possible(x: Number) -> Number:
    if isinstance(x, complex) and x.imag == 0.0:
        return x.real
    return x


def q_pochhammer(a: Number, q: float, n: int) -> Number:
    """Return (a; q)_n = prod_{k=0}^{n-1} (1 - a q^k)."""
    if n < 0:
        raise DomainError("n must be a nonnegative integer")
    p: Number = 1.0
    qk = 1.0
    for _ in range(n):
        p *= 1 - a * qk
        qk *= q
    return p


def q_pochhammer_inf(a: Number, q: float, tol: float = 1e-15, max_terms: int = 1_000_000) -> SeriesValue:
    """Infinite product (a; q)_inf for 0 < q < 1 with a certified remainder.

    Factors are multiplied until the bound

        |log prod_{k>=K} (1 - a q^k)| <= |a| q^K / ((1 - q)(1 - |a| q^K))

    drops below ``tol``; the returned ``abs_error_bound`` is
    ``|value| * expm1(bound)``.
    """
    if not 0 < q < 1:
        raise DomainError(f"(a; q)_inf needs 0 < q < 1 (got q={q!r})")
    if a == 0:
        return SeriesValue(1.0, 0.0, 0)
    absa = abs(a)
    p: Number = 1.0
    qk = 1.0
    k = 0
    while k < max_terms:
        t = absa * qk
        if t < 0.5:
            bound = t / ((1 - q) * (1 - t))
            if bound <= tol:
                err = abs(p) * math.expm1(bound)
                return SeriesValue(p, err, k)
        p *= 1 - a * qk
        qk *= q
        k += 1
        if p == 0:
            return SeriesValue(p, 0.0, k)
    raise ConvergenceError(f"(a; q)_inf did not reach tol={tol} within {max_terms} factors")


def q_pochhammer_inf_product(args: Sequence[Number], q: float, tol: float = 1e-15) -> SeriesValue:
    """(a_1, ..., a_m; q)_inf as a single value with a combined bound."""
    value: Number = 1.0
    rel = 0.0
    terms = 0
    for a in args:
        sv = q_pochhammer_inf(a, q, tol)
        value *= sv.value
        if sv.value != 0:
            rel = (1 + rel) * (1 + sv.abs_error_bound / abs(sv.value)) - 1
        terms += sv.terms_used
    return SeriesValue(value, abs(value) * rel, terms)


def double_pochhammer(a: Number, c: Number, p: Number, qq: Number, k: int) -> Number:
    """((a, c); (p, qq))_k = (a - c)(a p - c qq)...(a p^{k-1} - c qq^{k-1})."""
    if k < 0:
        raise DomainError("k must be a nonnegative integer")
    out: Number = 1.0
    pj: Number = 1.0
    qj: Number = 1.0
    for _ in range(k):
        out *= a * pj - c * qj
        pj *= p
        qj *= qq
    return out


def _termination_index(a: Number, q: float, rtol: float = 1e-12) -> int | None:
    """Return m if a == q^{-m} for an integer m >= 0, else None."""
    if isinstance(a, complex):
        if abs(a.imag) > rtol * abs(a):
            return None
        a = a.real
    if a <= 0:
        return None
    m = round(-math.log(a) / math.log(q))
    if m < 0:
        return None
    if abs(a * q**m - 1) <= rtol:
        return m
    return None


def _normalize_kind(kind: str) -> str:
    kind = _KIND_ALIASES.get(kind, kind)
    if kind not in _KINDS:
        raise DomainError(f"unsupported series kind {kind!r}; expected one of {sorted(_KINDS)}")
    return kind


def basic_hypergeometric(
    kind: str,
    upper: Sequence[Number],
    lower: Sequence[Number],
    q: float,
    z: Number,
    max_terms: int = 2000,
    tol: float = 1e-17,
) -> SeriesValue:
    """Evaluate a 2phi0, 2phi1 or 1phi1 basic hypergeometric series.

    Parameters
    ----------
    kind : {"2phi0", "2phi1", "1phi1"}
    upper, lower : sequences of numerator / denominator parameters.
    q : base, q > 0 and q != 1.  Bases above one are accepted but only
        terminating series converge there.
    z : argument.
    max_terms : hard cap on the number of terms.
    tol : relative tail tolerance for non-terminating series.

    Returns
    -------
    SeriesValue
        Terminating series (an upper parameter equal to q^{-m}) are summed
        exactly through index m with ``abs_error_bound == 0``.  Otherwise the
        remainder is bounded by geometric domination from the last term ratio.

    Raises
    ------
    ConvergenceError
        If the tail bound is not met within ``max_terms`` terms.
    """
    kind = _normalize_kind(kind)
    r, s = _KINDS[kind]
    if len(upper) != r or len(lower) != s:
        raise DomainError(f"{kind} takes {r} upper and {s} lower parameters")
    _check_base(q)
    if z == 0:
        return SeriesValue(1.0, 0.0, 1)

    stops = [m for m in (_termination_index(a, q) for a in upper) if m is not None]
    stop = min(stops) if stops else None
    power = 1 + s - r

    total: Number = 1.0
    term: Number = 1.0
    qn = 1.0
    prev_abs = 1.0
    n = 0
    limit = stop if stop is not None else max_terms
    while n < limit:
        num: Number = 1.0
        for a in upper:
            num *= 1 - a * qn
        den: Number = 1 - qn * q
        for b in lower:
            den *= 1 - b * qn
        if den == 0:
            raise DomainError(f"{kind}: lower parameter hits a pole at n={n}")
        term = term * num / den * z
        if power:
            term *= (-qn) ** power
        n += 1
        qn *= q
        total += term
        if stop is not None:
            continue
        cur_abs = abs(term)
        if not math.isfinite(cur_abs) or not math.isfinite(abs(total)):
            raise ConvergenceError(f"{kind} series overflowed at n={n}")
        ratio = cur_abs / prev_abs if prev_abs else 0.0
        prev_abs = cur_abs
        if cur_abs == 0.0:
            return SeriesValue(_real_if_possible(total), 0.0, n + 1)
        if ratio < 1 and cur_abs * ratio / (1 - ratio) <= tol * max(abs(total), 1e-300):
            bound = cur_abs * ratio / (1 - ratio)
            return SeriesValue(_real_if_possible(total), bound, n + 1)
    if stop is not None:
        return SeriesValue(_real_if_possible(total), 0.0, stop + 1)
    raise ConvergenceError(f"{kind} series did not converge within {max_terms} terms (z={z!r}, q={q!r})")


def ipow(n: int) -> complex:
    """i**n without accumulating rounding."""
    return (1, 1j, -1, -1j)[n % 4]

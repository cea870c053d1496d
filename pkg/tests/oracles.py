"""Independent high-precision reference implementations (mpmath) used as test oracles."""

from __future__ import annotations

import mpmath as mp

mp.mp.dps = 35


def mp_phi(upper, lower, q, z, terms: int = 5000, absolute: bool = False):
    """r-phi-s from its definition: running Pochhammer products and the explicit sign/power factor.

    With ``absolute=True`` returns the sum of |terms|, the scale of the rounding error of a float sum.
    """
    q, z = mp.mpf(q), mp.mpmathify(z)
    r, s = len(upper), len(lower)
    num, den = mp.mpf(1), mp.mpf(1)
    total = mp.mpf(0)
    for n in range(terms):
        if n:
            qn = q ** (n - 1)
            num *= mp.fprod(1 - a * qn for a in upper)
            den *= (1 - q * qn) * mp.fprod(1 - b * qn for b in lower)
        term = num / den * ((-1) ** n * q ** (n * (n - 1) // 2)) ** (1 + s - r) * z**n
        total += abs(term) if absolute else term
        if n > 5 and abs(term) < mp.mpf(10) ** -32 * max(1, abs(total)):
            break
    return total


def _ratio(q, n, k):
    q = mp.mpf(q)
    return mp.qp(q, q, n) / (mp.qp(q * q, q * q, k) * mp.qp(q, q, n - 2 * k))


def discrete_hermite_I(n: int, x, q):
    """sum_k (q;q)_n / ((q^2;q^2)_k (q;q)_{n-2k}) (-1)^k q^(k(k-1)) x^(n-2k)."""
    x, q = mp.mpmathify(x), mp.mpf(q)
    return mp.fsum(_ratio(q, n, k) * (-1) ** k * q ** (k * (k - 1)) * x ** (n - 2 * k) for k in range(n // 2 + 1))


def discrete_hermite_II(n: int, x, q):
    """sum_k (q;q)_n / ((q^2;q^2)_k (q;q)_{n-2k}) (-1)^k q^(-2nk + k(2k+1)) x^(n-2k)."""
    x, q = mp.mpmathify(x), mp.mpf(q)
    return mp.fsum(
        _ratio(q, n, k) * (-1) ** k * q ** (-2 * n * k + k * (2 * k + 1)) * x ** (n - 2 * k) for k in range(n // 2 + 1)
    )


def discrete_hermite_II_hyper(n: int, x, q):
    """x^n 2phi1(q^-n, q^(-n+1); 0; q^2, -q^2/x^2)."""
    x, q = mp.mpmathify(x), mp.mpf(q)
    return x**n * mp_phi([q**-n, q ** (-n + 1)], [0], q * q, -q * q / x**2, terms=n // 2 + 1)


def physicists_hermite(n: int, x):
    return mp.hermite(n, x)


def ks_type_I_weight(k: int, q):
    """Normalized weight of the atoms +-q^k for the discrete type-I family.

    q^k (q^(k+1), -q^(k+1); q)_inf / ((q; q)_inf (-1, -q; q)_inf), so the
    mass over both signs and all k >= 0 is one.
    """
    q = mp.mpf(q)
    num = q**k * mp.qp(q ** (k + 1), q) * mp.qp(-(q ** (k + 1)), q)
    return num / (mp.qp(q, q) * mp.qp(-1, q) * mp.qp(-q, q))


def ks_type_I_norm(n: int, q):
    """sum over the lattice of w h_n^2 for the monic type-I polynomials, normalized weight."""
    q = mp.mpf(q)
    return q ** (n * (n - 1) // 2) * mp.qp(q, q, n)


def ks_type_II_weight(x, q):
    """1/(ix, -ix; q)_inf = 1/(-x^2; q^2)_inf."""
    q, x = mp.mpf(q), mp.mpf(x)
    return 1 / mp.qp(-(x**2), q * q)


def ks_type_II_constant(c, q):
    q, c = mp.mpf(q), mp.mpf(c)
    q2 = q * q
    num = mp.qp(q2, q2) * mp.qp(-(c**2) * q, q2) * mp.qp(-q / c**2, q2)
    den = mp.qp(q, q2) * mp.qp(-(c**2), q2) * mp.qp(-q2 / c**2, q2)
    return 2 * num / den

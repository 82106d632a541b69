"""Complex special functions used by the asymptotic constants.

``log_gamma`` and ``recip_gamma`` delegate to :mod:`scipy.special`; the Barnes
G-function is evaluated here from its Weierstrass product.
"""
from __future__ import annotations

import numpy as np
from scipy import special

# Euler's constant to 30 digits.
EULER_GAMMA = 0.577215664901532860606512090082

_LOG_2PI = np.log(2.0 * np.pi)


class PoleError(ValueError):
    """Argument sits on a pole of the requested function."""


class DomainError(ValueError):
    """Argument outside the domain of a branch-cut function."""


def _is_nonpositive_integer(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def log_gamma(z):
    """Analytic branch of log Gamma (cut along the negative real axis).

    Agrees with the principal log of Gamma on the positive real axis and is
    continuous elsewhere off the cut, which is what sums of log-Gammas need.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(_is_nonpositive_integer(z)):
        raise PoleError(f"log_gamma has a pole at {z[_is_nonpositive_integer(z)]}")
    out = special.loggamma(z)
    return out if out.ndim else complex(out)


def recip_gamma(z):
    """1/Gamma(z); exactly zero at 0, -1, -2, ..."""
    z = np.asarray(z, dtype=complex)
    out = special.rgamma(z)
    out = np.where(_is_nonpositive_integer(z), 0.0, out)
    return out if out.ndim else complex(out)


def binom(gamma, n: int) -> complex:
    """Generalized binomial coefficient gamma*(gamma-1)*...*(gamma-n+1)/n!."""
    if n < 0:
        raise ValueError("binom needs n >= 0")
    return complex(binom_row(gamma, n)[n])


def binom_row(gamma, nmax: int) -> np.ndarray:
    """Vector of binom(gamma, k) for k = 0..nmax via the product recurrence.

    Exact zeros appear from index gamma+1 on when gamma is a nonnegative
    integer, because the factor (gamma - k) is then exactly 0.0.
    """
    k = np.arange(nmax, dtype=float)
    ratios = (complex(gamma) - k) / (k + 1.0)
    out = np.empty(nmax + 1, dtype=complex)
    out[0] = 1.0
    out[1:] = np.cumprod(ratios)
    return out


def _log_principal(base: np.ndarray) -> np.ndarray:
    out = np.log(base)
    # a -0.0 imaginary part would put the negative real axis at arg = -pi
    neg_axis = (base.imag == 0) & (base.real < 0)
    return np.where(neg_axis, out.real + 1j * np.pi, out)


def principal_log(base):
    """Principal logarithm, arg in (-pi, pi]."""
    base = np.asarray(base, dtype=complex)
    if np.any(base == 0):
        raise DomainError("logarithm of zero")
    out = _log_principal(base)
    return out if out.ndim else complex(out)


def principal_pow(base, exponent):
    """exp(exponent * Log(base)) with the principal branch of Log."""
    base = np.asarray(base, dtype=complex)
    exponent = np.asarray(exponent, dtype=complex)
    zero = base == 0
    if np.any(zero & (exponent != 0)):
        raise DomainError("0 raised to a nonzero complex power")
    out = np.exp(exponent * _log_principal(np.where(zero, 1.0, base)))
    out = np.where(zero, 1.0 + 0j, out)
    return out if out.ndim else complex(out)


def _log_g1p_band(w: complex) -> complex:
    """log G(1+w) from the Weierstrass product, for |Re w| <= 1/2.

    The partial sum runs to K >= 4|w|; the remaining tail
    sum_{k>K} [k log(1+w/k) - w + w^2/(2k)] is summed term by term in
    powers of w through Hurwitz zeta values, which converges geometrically.
    """
    K = int(max(24, np.ceil(4.0 * abs(w))))
    k = np.arange(1, K + 1, dtype=float)
    partial = np.sum(k * np.log1p(w / k) - w + w * w / (2.0 * k))
    tail = 0j
    wk = w * w
    ratio = abs(w) / (K + 1.0)
    for j in range(3, 200):
        wk = wk * w
        term = (-1) ** (j + 1) * wk / j * special.zeta(j - 1.0, K + 1.0)
        tail += term
        if abs(term) < 1e-18 * max(1.0, abs(tail)) and ratio ** j < 1e-18:
            break
    return 0.5 * w * _LOG_2PI - 0.5 * (w + 1.0) * w - 0.5 * EULER_GAMMA * w * w + partial + tail


def _shift(z: complex) -> int:
    """Integer m with Re(z - m) in [1/2, 3/2)."""
    return int(np.floor(z.real - 0.5))


def log_barnes_g(z) -> complex:
    """A continuous logarithm of the Barnes G-function.

    Undefined at the zeros 0, -1, -2, ... of G, where PoleError is raised.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Barnes G vanishes at {z}")
    m = _shift(z)
    base = z - m
    out = _log_g1p_band(base - 1.0)
    if m > 0:
        # G(z) = G(z - m) * prod_{j=1..m} Gamma(z - j)
        out += np.sum(special.loggamma(z - np.arange(1, m + 1)))
    elif m < 0:
        # G(z) = G(z + |m|) / prod_{j=0..|m|-1} Gamma(z + j)
        out -= np.sum(special.loggamma(z + np.arange(0, -m)))
    return complex(out)


def barnes_g(z) -> complex:
    """Barnes G-function; exact zeros at the nonpositive integers."""
    z = complex(z)
    m = _shift(z)
    if m >= 0:
        return complex(np.exp(log_barnes_g(z)))
    # Shift up with 1/Gamma, which carries the zeros of G exactly.
    base = z - m
    val = np.exp(_log_g1p_band(base - 1.0))
    return complex(val * np.prod(special.rgamma(z + np.arange(0, -m))))

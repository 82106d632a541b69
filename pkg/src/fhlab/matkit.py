"""Dense Toeplitz, Hankel and Toeplitz+Hankel matrices and their log-determinants."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .symbolkit import CoeffSeq, CoefficientRangeError

MATRIX_KINDS = ("T", "H", "M")


@dataclass(frozen=True)
class LogDet:
    """det = exp(log_abs) * phase, with phase on the unit circle.

    ``sign_exact`` is +1/-1 when the phase lies within 1e-8 of the real axis.
    """

    log_abs: float
    phase: complex
    sign_exact: int | None = None

    @property
    def singular(self) -> bool:
        return self.log_abs == -math.inf

    @property
    def arg(self) -> float:
        return math.atan2(self.phase.imag, self.phase.real)

    @property
    def log(self) -> complex:
        """Principal complex logarithm of the determinant."""
        return complex(self.log_abs, self.arg)

    @property
    def value(self) -> complex:
        if self.singular:
            return 0j
        return self.phase * math.exp(self.log_abs)


def _coeff_window(kind: str, N: int) -> tuple[int, int]:
    if kind == "T":
        return -(N - 1), N - 1
    if kind == "H":
        return 1, 2 * N - 1
    return -(N - 1), 2 * N - 1


def build(kind: str, N: int, coeffs: CoeffSeq) -> np.ndarray:
    """T_N = (a_{j-k}), H_N = (a_{j+k+1}), M_N = T_N + H_N for j, k = 0..N-1."""
    kind = kind.upper()
    if kind not in MATRIX_KINDS:
        raise ValueError(f"matrix kind must be one of {MATRIX_KINDS}, got {kind!r}")
    if N < 1:
        raise ValueError("matrix order must be positive")
    lo, hi = _coeff_window(kind, N)
    try:
        a = coeffs.values(lo, hi)
    except (IndexError, CoefficientRangeError) as exc:
        raise CoefficientRangeError(f"coefficients {lo}..{hi} unavailable: {exc}") from exc
    if not np.all(np.isfinite(a)):
        raise CoefficientRangeError(f"non-finite coefficients in {lo}..{hi}")

    def at(n0: int, n1: int) -> np.ndarray:
        return a[n0 - lo : n1 - lo + 1]

    out = np.zeros((N, N), dtype=complex)
    if kind in ("T", "M"):
        # first column a_0..a_{N-1}, first row a_0, a_{-1}, ..., a_{-(N-1)}
        out += linalg.toeplitz(at(0, N - 1), at(-(N - 1), 0)[::-1])
    if kind in ("H", "M"):
        # first column a_1..a_N, last row a_N..a_{2N-1}
        out += linalg.hankel(at(1, N), at(N, 2 * N - 1))
    return out


def log_det(A: np.ndarray) -> LogDet:
    """Log-determinant by LU with partial pivoting; singular gives log_abs = -inf."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("log_det needs a square matrix")
    if n == 0:
        return LogDet(0.0, 1 + 0j, 1)
    with warnings.catch_warnings():
        # an exactly singular matrix is a valid outcome, reported as log_abs = -inf
        warnings.simplefilter("ignore", linalg.LinAlgWarning)
        lu, piv = linalg.lu_factor(A, check_finite=True)
    d = np.diag(lu)
    if np.any(d == 0):
        return LogDet(-math.inf, 1 + 0j, None)
    log_abs = float(np.sum(np.log(np.abs(d))))
    swaps = int(np.count_nonzero(piv != np.arange(n)))
    angle = float(np.sum(np.angle(d))) + math.pi * (swaps % 2)
    phase = complex(math.cos(angle), math.sin(angle))
    sign = None
    if abs(phase.imag) <= 1e-8:
        sign = 1 if phase.real > 0 else -1
    return LogDet(log_abs, phase, sign)


def flip(A: np.ndarray) -> np.ndarray:
    """W_N A W_N: reverse both rows and columns."""
    return np.asarray(A)[::-1, ::-1].copy()


def hankel_block(coeffs: CoeffSeq, N: int, reflected: bool = False) -> np.ndarray:
    """N x N section of H(a) = (a_{j+k+1}), or of H(a~) = (a_{-j-k-1}) when reflected."""
    j = np.add.outer(np.arange(N), np.arange(N)) + 1
    if reflected:
        vals = coeffs.values(-(2 * N - 1), -1)
        return vals[(2 * N - 1) - j]
    vals = coeffs.values(1, 2 * N - 1)
    return vals[j - 1]


def widom_check(a1: CoeffSeq, a2: CoeffSeq, N: int) -> float:
    """Frobenius residual of T(a1 a2) = T(a1)T(a2) + P H(a1)H(a2~) P + W H(a1~)H(a2) W.

    For banded a1, a2 the Hankel operators have finite rank, so the identity
    holds exactly at order N with their N x N sections (bandwidth < N).
    """
    from .symbolkit import product_coeffs

    for a in (a1, a2):
        if not a.finite:
            raise ValueError("widom_check needs finitely supported sequences")
        width = max(abs(a.support[0]), abs(a.support[1]))
        if width >= N:
            raise ValueError(f"bandwidth {int(width)} must be below N = {N}")
    prod = product_coeffs(a1, a2)
    lhs = build("T", N, prod)
    rhs = build("T", N, a1) @ build("T", N, a2)
    rhs = rhs + hankel_block(a1, N) @ hankel_block(a2, N, reflected=True)
    rhs = rhs + flip(hankel_block(a1, N, reflected=True) @ hankel_block(a2, N))
    return float(np.linalg.norm(lhs - rhs))

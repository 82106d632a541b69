"""Symbols of Fisher-Hartwig type and their Fourier coefficients.

A symbol is a smooth part ``b = exp(sum_n s_n t^n)`` (a Laurent polynomial in
the exponent) times singular factors ``omega``, ``eta`` and ``xi`` placed at
distinct angles, optionally multiplied by the sign distribution ``sigma``.
Coefficient sequences are exposed through :class:`CoeffSeq`.
"""
from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .specfun import binom_row, log_gamma, recip_gamma

INF = math.inf


class ParameterError(ValueError):
    """Parameters outside the domain of a coefficient formula."""


class EvennessError(ValueError):
    """A sequence or symbol required to be even is not."""


class ConvergenceError(RuntimeError):
    """A truncated convolution did not reach the requested accuracy."""


class CoefficientRangeError(IndexError):
    """Coefficients requested outside the range a construction supports."""


def normalize_angle(theta: float) -> float:
    """Map an angle to (-pi, pi]."""
    theta = float(theta)
    out = math.remainder(theta, 2.0 * math.pi)
    if out <= -math.pi:
        out += 2.0 * math.pi
    return out


# ---------------------------------------------------------------------------
# Coefficient sequences
# ---------------------------------------------------------------------------

BlockFn = Callable[[int, int], np.ndarray]


class CoeffSeq:
    """Indexed provider ``n -> c_n`` with an absolute accuracy bound.

    ``block(lo, hi)`` returns the coefficients for ``lo..hi`` inclusive and is
    only called inside ``[support_lo, support_hi]``; outside that window the
    sequence is zero. Computed blocks are cached and never recomputed, so a
    given index always returns the same value for the lifetime of the object.
    """

    def __init__(
        self,
        block: BlockFn,
        *,
        support: tuple[float, float] = (-INF, INF),
        accuracy: float = 0.0,
        decay: float = INF,
        parity: str | None = None,
        label: str = "",
    ):
        self._block = block
        self.support = (support[0], support[1])
        self.accuracy = float(accuracy)
        # |c_n| = O(|n|^-decay); INF for finite or faster-than-power decay
        self.decay = decay
        self.parity = parity
        self.label = label
        self._lock = threading.Lock()
        self._lo = 0
        self._cache = np.zeros(0, dtype=complex)

    def __repr__(self) -> str:
        return f"CoeffSeq({self.label or '?'}, support={self.support}, accuracy={self.accuracy:.1e})"

    @property
    def finite(self) -> bool:
        return math.isfinite(self.support[0]) and math.isfinite(self.support[1])

    def _fill(self, lo: int, hi: int) -> None:
        if self._cache.size and self._lo <= lo and hi < self._lo + self._cache.size:
            return
        if not self._cache.size:
            new_lo, new_hi = lo, hi
            self._cache = np.asarray(self._block(lo, hi), dtype=complex).copy()
            self._lo = new_lo
            return
        old_lo, old_hi = self._lo, self._lo + self._cache.size - 1
        new_lo, new_hi = min(lo, old_lo), max(hi, old_hi)
        out = np.empty(new_hi - new_lo + 1, dtype=complex)
        if new_lo < old_lo:
            out[: old_lo - new_lo] = self._block(new_lo, old_lo - 1)
        out[old_lo - new_lo : old_hi - new_lo + 1] = self._cache
        if new_hi > old_hi:
            out[old_hi - new_lo + 1 :] = self._block(old_hi + 1, new_hi)
        self._lo, self._cache = new_lo, out

    def values(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients for indices lo..hi inclusive."""
        lo, hi = int(lo), int(hi)
        out = np.zeros(max(hi - lo + 1, 0), dtype=complex)
        slo = lo if self.support[0] == -INF else max(lo, int(self.support[0]))
        shi = hi if self.support[1] == INF else min(hi, int(self.support[1]))
        if slo > shi:
            return out
        with self._lock:
            self._fill(slo, shi)
            out[slo - lo : shi - lo + 1] = self._cache[slo - self._lo : shi - self._lo + 1]
        return out

    def prefetch(self, lo: int, hi: int) -> None:
        self.values(lo, hi)

    def __call__(self, n: int) -> complex:
        return complex(self.values(n, n)[0])

    def __getitem__(self, n: int) -> complex:
        return self(n)


def finite_coeffs(mapping: dict[int, complex] | Sequence[tuple[int, complex]], label: str = "") -> CoeffSeq:
    """Sequence with finitely many nonzero entries (a Laurent polynomial)."""
    items = dict(mapping)
    items = {int(k): complex(v) for k, v in items.items() if v != 0}
    if not items:
        items = {0: 0j}
    lo, hi = min(items), max(items)
    arr = np.zeros(hi - lo + 1, dtype=complex)
    for k, v in items.items():
        arr[k - lo] = v
    parity = None
    if all(items.get(-k, 0) == v for k, v in items.items()):
        parity = "even"
    elif all(items.get(-k, 0) == -v for k, v in items.items()):
        parity = "odd"

    def block(a: int, b: int) -> np.ndarray:
        return arr[a - lo : b - lo + 1]

    return CoeffSeq(block, support=(lo, hi), parity=parity, label=label or "finite")


def delta_coeffs() -> CoeffSeq:
    """Unit of convolution: 1 at n = 0."""
    return finite_coeffs({0: 1.0}, label="delta")


# ---------------------------------------------------------------------------
# Symbol data model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothPart:
    """``b = exp(sum_n s_n t^n)`` with finitely many log-coefficients ``s_n``."""

    log_coeffs: tuple[tuple[int, complex], ...] = ()
    even: bool = False

    def __post_init__(self):
        merged: dict[int, complex] = {}
        for n, v in self.log_coeffs:
            merged[int(n)] = merged.get(int(n), 0j) + complex(v)
        canon = tuple(sorted((n, v) for n, v in merged.items() if v != 0))
        object.__setattr__(self, "log_coeffs", canon)
        if self.even:
            d = dict(canon)
            for n, v in canon:
                if d.get(-n, 0j) != v:
                    raise EvennessError(f"even smooth part needs s_{-n} == s_{n}")

    @classmethod
    def from_dict(cls, mapping: dict[int, complex], even: bool | None = None) -> "SmoothPart":
        d = {int(k): complex(v) for k, v in mapping.items()}
        if even is None:
            even = all(d.get(-k, 0j) == v for k, v in d.items())
        return cls(tuple(d.items()), even)

    @classmethod
    def constant_one(cls) -> "SmoothPart":
        return cls((), True)

    def as_dict(self) -> dict[int, complex]:
        return dict(self.log_coeffs)

    def coeff(self, n: int) -> complex:
        return self.as_dict().get(n, 0j)

    @property
    def degree(self) -> int:
        return max((abs(n) for n, _ in self.log_coeffs), default=0)

    def is_even(self) -> bool:
        d = self.as_dict()
        return all(d.get(-n, 0j) == v for n, v in d.items())


@dataclass(frozen=True)
class SingularFactor:
    """One Fisher-Hartwig factor at angle ``theta``.

    kind ``omega``: ``(2 - 2cos(x - theta))^alpha exp(i beta (x - theta - pi))``;
    kind ``eta``: ``(1 - e^{i(x - theta)})^gamma`` (``gamma`` held in ``alpha``);
    kind ``xi``: ``(1 - e^{i(theta - x)})^delta`` (``delta`` held in ``alpha``).
    A pure jump is ``omega`` with ``alpha = 0``.
    """

    kind: str
    theta: float
    alpha: complex = 0j
    beta: complex = 0j

    def __post_init__(self):
        if self.kind not in ("omega", "eta", "xi"):
            raise ParameterError(f"unknown factor kind {self.kind!r}")
        object.__setattr__(self, "theta", normalize_angle(self.theta))
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        if self.kind == "omega":
            two_a = 2 * self.alpha
            if two_a.imag == 0 and two_a.real < 0 and two_a.real == round(two_a.real):
                raise ParameterError(f"2*alpha = {two_a.real:g} is a negative integer")

    # constructors -------------------------------------------------------
    @classmethod
    def omega(cls, alpha, beta, theta) -> "SingularFactor":
        return cls("omega", theta, alpha, beta)

    @classmethod
    def jump(cls, beta, theta) -> "SingularFactor":
        return cls("omega", theta, 0.0, beta)

    @classmethod
    def eta(cls, gamma, theta) -> "SingularFactor":
        return cls("eta", theta, gamma)

    @classmethod
    def xi(cls, delta, theta) -> "SingularFactor":
        return cls("xi", theta, delta)

    # ------------------------------------------------------------------
    @property
    def t(self) -> complex:
        return complex(math.cos(self.theta), math.sin(self.theta))

    @property
    def gamma(self) -> complex:
        """Exponent of the (1 - t/t_r) part: alpha+beta for omega."""
        if self.kind == "omega":
            return self.alpha + self.beta
        return self.alpha if self.kind == "eta" else 0j

    @property
    def delta(self) -> complex:
        """Exponent of the (1 - t_r/t) part: alpha-beta for omega."""
        if self.kind == "omega":
            return self.alpha - self.beta
        return self.alpha if self.kind == "xi" else 0j

    @property
    def is_jump(self) -> bool:
        return self.kind == "omega" and self.alpha == 0

    def tilde(self) -> "SingularFactor":
        """Factor of the reflected symbol t -> 1/t."""
        if self.kind == "omega":
            return SingularFactor("omega", -self.theta, self.alpha, -self.beta)
        if self.kind == "eta":
            return SingularFactor("xi", -self.theta, self.alpha)
        return SingularFactor("eta", -self.theta, self.alpha)

    def same_as(self, other: "SingularFactor", tol: float = 1e-12) -> bool:
        return (
            self.kind == other.kind
            and abs(normalize_angle(self.theta - other.theta)) <= tol
            and abs(self.alpha - other.alpha) <= tol
            and abs(self.beta - other.beta) <= tol
        )

    def coeffs(self) -> CoeffSeq:
        if self.kind == "omega":
            return omega_coeffs(self.alpha, self.beta, self.theta)
        if self.kind == "eta":
            return eta_coeffs(self.alpha, self.theta)
        return xi_coeffs(self.alpha, self.theta)

    def value(self, x) -> np.ndarray:
        """Pointwise value at e^{ix} (away from theta)."""
        x = np.asarray(x, dtype=float)
        d = np.mod(x - self.theta, 2.0 * np.pi)
        if self.kind == "omega":
            mag = (2.0 - 2.0 * np.cos(d)).astype(complex) ** self.alpha
            return mag * np.exp(1j * self.beta * (d - np.pi))
        if self.kind == "eta":
            return (1.0 - np.exp(1j * d)) ** self.alpha
        return (1.0 - np.exp(-1j * d)) ** self.alpha


@dataclass(frozen=True)
class SymbolSpec:
    """``b * prod(factors)``, optionally times the sign distribution sigma."""

    smooth: SmoothPart = field(default_factory=SmoothPart.constant_one)
    factors: tuple[SingularFactor, ...] = ()
    sigma: bool = False
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        angles = [f.theta for f in self.factors]
        for i in range(len(angles)):
            for j in range(i):
                if abs(normalize_angle(angles[i] - angles[j])) < 1e-12:
                    raise ParameterError(f"factor angles must be distinct (theta = {angles[i]:.15g} repeats)")
        if self.sigma:
            if any(abs(a) < 1e-12 for a in angles):
                raise ParameterError("sigma-multiplied symbols cannot have a factor at theta = 0")
            self.check_even()

    # evenness ----------------------------------------------------------
    def is_even(self) -> bool:
        if not self.smooth.is_even():
            return False
        remaining = list(self.factors)
        for f in self.factors:
            partner = f.tilde()
            for i, g in enumerate(remaining):
                if g.same_as(partner):
                    del remaining[i]
                    break
            else:
                return False
        return not remaining

    def check_even(self) -> None:
        if not self.smooth.is_even():
            raise EvennessError("smooth part is not even")
        if not self.is_even():
            raise EvennessError("singular factors do not pair as (omega_{a,b,t}, omega_{a,-b,-t}) or (eta_{g,t}, xi_{g,-t})")

    def even_representatives(self) -> tuple[list[SingularFactor], list[SingularFactor]]:
        """Split an even symbol into one representative per mirrored pair.

        Returns ``(m0, mpm)``: omega pairs represented by the member with
        theta in (0, pi) and eta/xi pairs represented by their eta member.
        """
        self.check_even()
        m0: list[SingularFactor] = []
        mpm: list[SingularFactor] = []
        for f in self.factors:
            if f.kind == "omega":
                if f.theta in (0.0, math.pi) or abs(f.theta) < 1e-12 or abs(abs(f.theta) - math.pi) < 1e-12:
                    raise ParameterError("even representatives need factors away from theta = 0, pi")
                if f.theta > 0:
                    m0.append(f)
            elif f.kind == "eta":
                mpm.append(f)
        return m0, mpm

    # coefficients ------------------------------------------------------
    def symbol_coeffs(self, tail: "TailPolicy | None" = None) -> CoeffSeq:
        """Coefficients of ``b * prod(factors)`` (sigma not applied)."""
        seqs = [smooth_coeffs(self.smooth)] + [f.coeffs() for f in self.factors]
        if len(seqs) == 1:
            return seqs[0]
        return product_coeffs(*seqs, tail=tail)

    def coeffs(self, tail: "TailPolicy | None" = None) -> CoeffSeq:
        """Coefficients of the full symbol, sigma included when flagged."""
        a = self.symbol_coeffs(tail)
        return sigma_product_coeffs(a) if self.sigma else a

    def value(self, x) -> np.ndarray:
        """Pointwise value of the function part (sigma excluded)."""
        x = np.asarray(x, dtype=float)
        out = evaluate_smooth(self.smooth, np.exp(1j * x))
        for f in self.factors:
            out = out * f.value(x)
        return out

    def with_sigma(self, flag: bool = True) -> "SymbolSpec":
        return SymbolSpec(self.smooth, self.factors, flag, self.name)

    # serialization ------------------------------------------------------
    def to_json_dict(self) -> dict:
        def num(z: complex):
            z = complex(z)
            return z.real if z.imag == 0 else [z.real, z.imag]

        facs = []
        for f in self.factors:
            if f.is_jump:
                facs.append({"kind": "jump", "theta": f.theta, "beta": num(f.beta)})
            elif f.kind == "omega":
                facs.append({"kind": "omega", "theta": f.theta, "alpha": num(f.alpha), "beta": num(f.beta)})
            elif f.kind == "eta":
                facs.append({"kind": "eta", "theta": f.theta, "gamma": num(f.alpha)})
            else:
                facs.append({"kind": "xi", "theta": f.theta, "delta": num(f.alpha)})
        out = {
            "smooth": {
                "logCoeffs": [[n, v.real, v.imag] for n, v in self.smooth.log_coeffs],
                "even": self.smooth.even,
            },
            "factors": facs,
            "sigma": self.sigma,
        }
        if self.name:
            out["name"] = self.name
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, doc: dict) -> "SymbolSpec":
        return parse_spec(doc)

    @classmethod
    def from_json(cls, text: str) -> "SymbolSpec":
        return parse_spec(json.loads(text))

    def semantically_equal(self, other: "SymbolSpec", tol: float = 1e-14) -> bool:
        if self.sigma != other.sigma or len(self.factors) != len(other.factors):
            return False
        a, b = self.smooth.as_dict(), other.smooth.as_dict()
        if set(a) != set(b) or any(abs(a[k] - b[k]) > tol for k in a):
            return False
        return all(f.same_as(g, tol) for f, g in zip(self.factors, other.factors))


class ConfigError(ValueError):
    """A symbol configuration document does not match the schema."""


def _complex(v, what: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, dict) and set(v) <= {"re", "im"}:
        return complex(float(v.get("re", 0.0)), float(v.get("im", 0.0)))
    raise ConfigError(f"{what}: expected a number or [re, im], got {v!r}")


def _angle(doc: dict) -> float:
    if "theta" in doc:
        return float(doc["theta"])
    if "theta_over_pi" in doc:
        return float(doc["theta_over_pi"]) * math.pi
    raise ConfigError(f"factor {doc!r} needs 'theta' or 'theta_over_pi'")


def parse_factor(doc: dict) -> list[SingularFactor]:
    """Parse one factor entry; ``"pair": true`` also adds the mirrored factor."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ConfigError(f"factor entry needs a 'kind': {doc!r}")
    kind = doc["kind"]
    theta = _angle(doc)
    try:
        if kind == "jump":
            f = SingularFactor.jump(_complex(doc.get("beta", 0.0), "beta"), theta)
        elif kind == "omega":
            f = SingularFactor.omega(_complex(doc.get("alpha", 0.0), "alpha"), _complex(doc.get("beta", 0.0), "beta"), theta)
        elif kind == "eta":
            f = SingularFactor.eta(_complex(doc["gamma"], "gamma"), theta)
        elif kind == "xi":
            f = SingularFactor.xi(_complex(doc["delta"], "delta"), theta)
        else:
            raise ConfigError(f"unknown factor kind {kind!r}")
    except KeyError as exc:
        raise ConfigError(f"factor {doc!r} is missing {exc}") from None
    out = [f]
    if doc.get("pair", False):
        out.append(f.tilde())
    return out


def parse_spec(doc: dict) -> SymbolSpec:
    """Build a :class:`SymbolSpec` from its JSON document."""
    if not isinstance(doc, dict):
        raise ConfigError("symbol config must be a JSON object")
    unknown = set(doc) - {"smooth", "factors", "sigma", "name", "description"}
    if unknown:
        raise ConfigError(f"unknown top-level keys {sorted(unknown)}")
    sm = doc.get("smooth", {}) or {}
    pairs = []
    for entry in sm.get("logCoeffs", []):
        if len(entry) == 2:
            n, v = entry
            pairs.append((int(n), _complex(v, "logCoeffs value")))
        elif len(entry) == 3:
            pairs.append((int(entry[0]), complex(float(entry[1]), float(entry[2]))))
        else:
            raise ConfigError(f"logCoeffs entry must be [n, re, im]: {entry!r}")
    try:
        smooth = SmoothPart(tuple(pairs), bool(sm.get("even", False)))
        factors: list[SingularFactor] = []
        for fd in doc.get("factors", []):
            factors.extend(parse_factor(fd))
        return SymbolSpec(smooth, tuple(factors), bool(doc.get("sigma", False)), str(doc.get("name", "")))
    except (ParameterError, EvennessError) as exc:
        raise ConfigError(str(exc)) from exc


def load_spec(path) -> SymbolSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    return parse_spec(doc)


# ---------------------------------------------------------------------------
# Smooth part: coefficients, Wiener-Hopf factors, Szego constants
# ---------------------------------------------------------------------------


def evaluate_smooth(b: SmoothPart, t) -> np.ndarray | complex:
    """exp(sum_n s_n t^n) at points of the unit circle."""
    return np.exp(log_smooth(b, t))


def log_smooth(b: SmoothPart, t):
    """The exponent sum_n s_n t^n itself (a continuous logarithm of b)."""
    t = np.asarray(t, dtype=complex)
    out = np.zeros_like(t)
    for n, s in b.log_coeffs:
        out = out + s * t ** n
    return out if out.ndim else complex(out)


def wiener_hopf_plus(b: SmoothPart) -> SmoothPart:
    """b_+ = exp(sum_{n>=1} s_n t^n)."""
    return SmoothPart(tuple((n, v) for n, v in b.log_coeffs if n >= 1), False)


def wiener_hopf_minus(b: SmoothPart) -> SmoothPart:
    """b_- = exp(sum_{n>=1} s_{-n} t^{-n})."""
    return SmoothPart(tuple((n, v) for n, v in b.log_coeffs if n <= -1), False)


@dataclass(frozen=True)
class SzegoConstants:
    """Logarithms of G[b], E[b], F[b] and the even-case constant Ê[b]."""

    log_G: complex
    log_E: complex
    log_F: complex
    log_Ehat: complex

    @property
    def G(self) -> complex:
        return complex(np.exp(self.log_G))

    @property
    def E(self) -> complex:
        return complex(np.exp(self.log_E))

    @property
    def F(self) -> complex:
        return complex(np.exp(self.log_F))

    @property
    def Ehat(self) -> complex:
        return complex(np.exp(self.log_Ehat))


def szego_constants(b: SmoothPart) -> SzegoConstants:
    s = b.as_dict()
    deg = b.degree
    k = range(1, deg + 1)
    log_E = sum(j * s.get(j, 0j) * s.get(-j, 0j) for j in k)
    sq = sum(j * s.get(j, 0j) ** 2 for j in k)
    odd = sum(s.get(j, 0j) for j in range(1, deg + 1, 2))
    return SzegoConstants(
        log_G=complex(s.get(0, 0j)),
        log_E=complex(log_E),
        log_F=complex(odd - 0.5 * sq),
        log_Ehat=complex(0.5 * sq + odd),
    )


def _cauchy_reach(b: SmoothPart, side: int, log_floor: float) -> int:
    """Smallest R with the Cauchy bound |c_n| <= e^{log_floor} for all side*n > R.

    On the circle of radius r^side, |b| <= exp(Re s_0 + sum |s_k| r^{side*k}),
    so log|c_n| <= that exponent - |n| log r; minimized over a grid of r > 1.
    """
    s = b.as_dict()
    logr = np.linspace(1e-3, 8.0, 4000)
    expo = np.full(logr.size, s.get(0, 0j).real)
    for k, v in s.items():
        if k != 0:
            # |t^k| = r^k on the outer circle, r^-|k| for the opposite powers
            expo = expo + abs(v) * np.exp(np.sign(side * k) * abs(k) * logr)
    n = 0
    while True:
        n += 1
        if np.min(expo - n * logr) < log_floor:
            return n - 1


def smooth_coeffs(b: SmoothPart, nrange: tuple[int, int] | None = None) -> CoeffSeq:
    """Fourier coefficients of exp(sum s_n t^n), via FFT on a fine grid.

    The coefficients decay faster than any geometric rate. The sequence is
    treated as finite, cut where a Cauchy estimate puts every further
    coefficient below 1e-18 of |c_0|-scale, and the grid is large enough that
    aliasing is below the same level. ``nrange`` only widens the grid.
    """
    if not b.log_coeffs:
        return finite_coeffs({0: 1.0}, label="b=1")
    has_pos = any(n > 0 for n, _ in b.log_coeffs)
    has_neg = any(n < 0 for n, _ in b.log_coeffs)
    # scale: the mean of |b| bounds max|c_n| from below well enough for a floor
    x = 2.0 * np.pi * np.arange(256) / 256
    scale = float(np.abs(evaluate_smooth(b, np.exp(1j * x))).max())
    log_floor = math.log(1e-18 * scale)
    hi = _cauchy_reach(b, 1, log_floor) if has_pos else 0
    lo = -_cauchy_reach(b, -1, log_floor) if has_neg else 0
    width = hi - lo
    if nrange is not None:
        width = max(width, nrange[1] - nrange[0])
    M = 1 << max(6, (8 * (width + b.degree)).bit_length())
    x = 2.0 * np.pi * np.arange(M) / M
    c = np.fft.fft(evaluate_smooth(b, np.exp(1j * x))) / M
    idx = np.fft.fftfreq(M, 1.0 / M).astype(int)
    table = {int(i): complex(v) for i, v in zip(idx, c) if lo <= i <= hi}
    if b.even:
        # symmetrize the roundoff so evenness holds exactly
        table = {n: 0.5 * (table.get(n, 0j) + table.get(-n, 0j)) for n in table}
    seq = finite_coeffs(table, label="smooth")
    seq.accuracy = 4e-16 * scale * math.log2(M)
    return seq


# ---------------------------------------------------------------------------
# Singular-factor engines
# ---------------------------------------------------------------------------


def _omega_direct(alpha: complex, beta: complex, theta: float, n: np.ndarray) -> np.ndarray:
    """Gamma-ratio formula evaluated through log-Gamma; zero at denominator poles."""
    phase = np.exp(1j * n * (np.pi - theta))
    z1 = 1 + alpha + beta - n
    z2 = 1 + alpha - beta + n
    out = np.zeros(n.shape, dtype=complex)
    pole = np.zeros(n.shape, dtype=bool)
    for z in (z1, z2):
        pole |= (np.imag(z) == 0) & (np.real(z) <= 0) & (np.real(z) == np.round(np.real(z)))
    ok = ~pole
    if np.any(ok):
        lg = log_gamma(1 + 2 * alpha) - log_gamma(z1[ok].astype(complex)) - log_gamma(z2[ok].astype(complex))
        out[ok] = np.exp(lg) * phase[ok]
    return out


def omega_coeffs(alpha, beta, theta) -> CoeffSeq:
    """[omega]_n = e^{in(pi-theta)} Gamma(1+2a) / (Gamma(1+a+b-n) Gamma(1+a-b+n)).

    Evaluated by the ratio recurrence outward from n = 0; the log-Gamma form
    is used when the seed vanishes or a recurrence denominator hits zero.
    """
    alpha, beta = complex(alpha), complex(beta)
    theta = normalize_angle(theta)
    two_a = 2 * alpha
    if two_a.imag == 0 and two_a.real < 0 and two_a.real == round(two_a.real):
        raise ParameterError(f"omega coefficients undefined for 2*alpha = {two_a.real:g}")
    e = complex(math.cos(math.pi - theta), math.sin(math.pi - theta))
    g0 = complex(np.exp(log_gamma(1 + two_a))) if not (two_a.imag == 0 and two_a.real == 0) else 1.0 + 0j
    seed = g0 * complex(recip_gamma(1 + alpha + beta)) * complex(recip_gamma(1 + alpha - beta))

    def block(lo: int, hi: int) -> np.ndarray:
        n = np.arange(lo, hi + 1)
        if seed == 0:
            return _omega_direct(alpha, beta, theta, n)
        out = np.empty(n.size, dtype=complex)
        if hi >= 0:
            m = np.arange(0, hi)
            den = 1 + alpha - beta + m
            if np.any(den == 0):
                return _omega_direct(alpha, beta, theta, n)
            up = np.empty(hi + 1, dtype=complex)
            up[0] = seed
            up[1:] = seed * np.cumprod(e * (alpha + beta - m) / den)
            sel = n >= 0
            out[sel] = up[n[sel]]
        if lo < 0:
            m = np.arange(0, lo, -1)
            den = 1 + alpha + beta - m
            if np.any(den == 0):
                return _omega_direct(alpha, beta, theta, n)
            # dn[j] holds index -j
            dn = np.empty(-lo + 1, dtype=complex)
            dn[0] = seed
            dn[1:] = seed * np.cumprod((alpha - beta + m) / den / e)
            sel = n < 0
            out[sel] = dn[-n[sel]]
        return out

    return CoeffSeq(
        block,
        decay=1.0 + 2.0 * alpha.real,
        label=f"omega({alpha:.4g},{beta:.4g},{theta:.4g})",
    )


def eta_coeffs(gamma, theta) -> CoeffSeq:
    """[eta]_n = e^{in(pi-theta)} binom(gamma, n) for n >= 0, zero for n < 0."""
    gamma = complex(gamma)
    theta = normalize_angle(theta)
    e = np.exp(1j * (np.pi - theta))

    def block(lo: int, hi: int) -> np.ndarray:
        row = binom_row(gamma, hi)
        n = np.arange(lo, hi + 1)
        return row[lo:] * e ** n

    finite = gamma.imag == 0 and gamma.real >= 0 and gamma.real == round(gamma.real)
    hi = int(gamma.real) if finite else INF
    return CoeffSeq(block, support=(0, hi), decay=1.0 + gamma.real, label=f"eta({gamma:.4g},{theta:.4g})")


def xi_coeffs(delta, theta) -> CoeffSeq:
    """[xi]_n = e^{in(pi-theta)} binom(delta, -n) for n <= 0, zero for n > 0."""
    delta = complex(delta)
    theta = normalize_angle(theta)
    e = np.exp(1j * (np.pi - theta))

    def block(lo: int, hi: int) -> np.ndarray:
        row = binom_row(delta, -lo)
        n = np.arange(lo, hi + 1)
        return row[-n] * e ** n

    finite = delta.imag == 0 and delta.real >= 0 and delta.real == round(delta.real)
    lo = -int(delta.real) if finite else -INF
    return CoeffSeq(block, support=(lo, 0), decay=1.0 + delta.real, label=f"xi({delta:.4g},{theta:.4g})")


def sigma_coeffs() -> CoeffSeq:
    """sigma_n = sign(n)."""
    return CoeffSeq(lambda lo, hi: np.sign(np.arange(lo, hi + 1)).astype(complex), decay=0.0, parity="odd", label="sigma")


def nu_coeffs() -> CoeffSeq:
    """nu_n = sign(n) (-1)^n, the coefficients of T(sigma)^{-1}."""

    def block(lo, hi):
        n = np.arange(lo, hi + 1)
        return (np.sign(n) * np.where(n % 2 == 0, 1, -1)).astype(complex)

    return CoeffSeq(block, decay=0.0, parity="odd", label="nu")


def h_coeffs(inverse: bool = False) -> CoeffSeq:
    """h = xi_1^{-1} xi_{-1}: 1 at n=0, 2 (or 2(-1)^n for the inverse) for n<0."""

    def block(lo, hi):
        n = np.arange(lo, hi + 1)
        tail = 2.0 * np.where(n % 2 == 0, 1.0, -1.0) if inverse else np.full(n.size, 2.0)
        return np.where(n == 0, 1.0, np.where(n < 0, tail, 0.0)).astype(complex)

    return CoeffSeq(block, support=(-INF, 0), decay=0.0, label="h^-1" if inverse else "h")


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TailPolicy:
    """Truncation control for convolutions of infinitely supported sequences.

    ``K0`` is the minimum truncation index; the working index is
    ``max(K0, 50 * L)`` for output range ``|n| <= L``, doubled until two
    successive truncations agree to ``accuracy`` or ``K_max`` is passed.
    ``window="smooth"`` tapers the sequences with a C-infinity step on
    ``K/2 <= |k| <= K``; ``"sharp"`` truncates abruptly.
    """

    K0: int = 10_000
    K_max: int = 2 ** 20
    accuracy: float = 1e-10
    window: str = "smooth"
    per_index: int = 50


def _smooth_step(x: np.ndarray) -> np.ndarray:
    """C-infinity taper: 1 for x <= 1/2, 0 for x >= 1."""
    y = np.clip((x - 0.5) / 0.5, 0.0, 1.0)

    def f(u):
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(u > 0, np.exp(-1.0 / np.where(u > 0, u, 1.0)), 0.0)

    a, b = f(1.0 - y), f(y)
    return a / (a + b)


def _convolve_all(arrays: Sequence[np.ndarray]) -> np.ndarray:
    total = sum(a.size for a in arrays) - len(arrays) + 1
    if total <= 256 or len(arrays) == 1:
        out = arrays[0]
        for a in arrays[1:]:
            out = np.convolve(out, a)
        return out
    size = 1 << (total - 1).bit_length()
    acc = np.ones(size, dtype=complex)
    for a in arrays:
        acc *= np.fft.fft(a, size)
    return np.fft.ifft(acc)[:total]


def _l1(a: np.ndarray) -> float:
    return float(np.abs(a).sum())


def product_coeffs(*seqs: CoeffSeq, tail: TailPolicy | None = None) -> CoeffSeq:
    """Coefficients of a product of symbols: c_n = sum_k f1_{n-k} f2_k (...).

    Exact whenever every factor's needed index window is finite (all but one
    factor finitely supported, or all one-sided to the same side). Otherwise
    the infinite tails are cut at K with the window of ``tail`` and K is
    doubled until the result is stable to ``tail.accuracy``.
    """
    if not seqs:
        return delta_coeffs()
    if len(seqs) == 1:
        return seqs[0]
    tail = tail or TailPolicy()
    seqs = tuple(seqs)
    lo_all = sum(s.support[0] for s in seqs)
    hi_all = sum(s.support[1] for s in seqs)
    acc_state = {"truncation": 0.0}

    def needed(i: int, lo: int, hi: int) -> tuple[float, float]:
        others_hi = sum(s.support[1] for j, s in enumerate(seqs) if j != i)
        others_lo = sum(s.support[0] for j, s in enumerate(seqs) if j != i)
        a = max(seqs[i].support[0], lo - others_hi)
        b = min(seqs[i].support[1], hi - others_lo)
        return a, b

    def evaluate(lo: int, hi: int, K: int | None) -> tuple[np.ndarray, float]:
        arrays, offset, l1s, accs = [], 0, [], []
        for i, s in enumerate(seqs):
            a, b = needed(i, lo, hi)
            wlo = a == -INF
            whi = b == INF
            a = -K if wlo else int(a)
            b = K if whi else int(b)
            v = s.values(a, b)
            if (wlo or whi) and tail.window == "smooth":
                k = np.arange(a, b + 1)
                w = _smooth_step(np.abs(k) / K)
                if not wlo:
                    w = np.where(k < 0, 1.0, w)
                if not whi:
                    w = np.where(k > 0, 1.0, w)
                v = v * w
            arrays.append(v)
            offset += a
            l1s.append(_l1(v))
            accs.append(s.accuracy)
        full = _convolve_all(arrays)
        out = full[lo - offset : hi - offset + 1]
        prop = 0.0
        for i in range(len(seqs)):
            prop += accs[i] * float(np.prod([l1s[j] for j in range(len(seqs)) if j != i]))
        prop += 1e-16 * float(np.prod(l1s)) * math.log2(max(full.size, 2))
        return out, prop

    def block(lo: int, hi: int) -> np.ndarray:
        exact = all(math.isfinite(x) for i in range(len(seqs)) for x in needed(i, lo, hi))
        if exact:
            out, prop = evaluate(lo, hi, None)
            acc_state["truncation"] = max(acc_state["truncation"], prop)
            result.accuracy = max(result.accuracy, prop)
            return out
        L = max(abs(lo), abs(hi), 1)
        K = max(tail.K0, tail.per_index * L)
        K = 1 << (K - 1).bit_length()
        prev, _ = evaluate(lo, hi, K)
        while True:
            K2 = 2 * K
            if K2 > tail.K_max:
                raise ConvergenceError(f"convolution not converged to {tail.accuracy:g} with K <= {tail.K_max}")
            cur, prop = evaluate(lo, hi, K2)
            diff = float(np.abs(cur - prev).max()) if cur.size else 0.0
            if diff <= tail.accuracy:
                result.accuracy = max(result.accuracy, diff + prop)
                return cur
            prev, K = cur, K2

    parity = None
    finite_decays = [s.decay for s in seqs]
    result = CoeffSeq(
        block,
        support=(lo_all, hi_all),
        decay=min(finite_decays),
        parity=parity,
        label="*".join(s.label or "?" for s in seqs),
    )
    return result


def sigma_product_coeffs(a: CoeffSeq, tol: float = 1e-12) -> CoeffSeq:
    """c = a * sigma for even a: c_n = sum_{k=-n+1}^{n} a_k, c_0 = 0, c_{-n} = -c_n."""

    def block(lo: int, hi: int) -> np.ndarray:
        L = max(abs(lo), abs(hi))
        vals = a.values(-L, L)
        scale = max(1.0, float(np.abs(vals).max()))
        asym = float(np.abs(vals - vals[::-1]).max())
        if asym > tol * scale:
            raise EvennessError(f"sequence is not even: max |a_-n - a_n| = {asym:.3e}")
        # partial sums S(n) = sum_{k=-n+1}^{n} a_k for n = 1..L
        center = L
        pos = vals[center + 1 :]  # a_1..a_L
        neg = vals[center - 1 :: -1][: L - 1] if L > 1 else np.zeros(0, dtype=complex)  # a_-1..a_-(L-1)
        c_pos = np.empty(L, dtype=complex)
        if L:
            c_pos[:] = vals[center] + np.cumsum(pos)
            c_pos[1:] += np.cumsum(neg)
        # each partial sum collects at most 2L inexact terms
        seq.accuracy = max(seq.accuracy, 2.0 * L * a.accuracy)
        n = np.arange(lo, hi + 1)
        out = np.zeros(n.size, dtype=complex)
        m = n > 0
        out[m] = c_pos[n[m] - 1]
        m = n < 0
        out[m] = -c_pos[-n[m] - 1]
        return out

    seq = CoeffSeq(block, decay=0.0, parity="odd", label=f"sigma*({a.label})")
    return seq

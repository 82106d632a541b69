"""Closed-form asymptotics of Toeplitz and Toeplitz+Hankel determinants.

Every prediction has the shape ``det ~ G^N N^Omega E (1 + O(N^rho))`` and is
carried in log form. Constants are accumulated as sums of
``exponent * Log(base)`` with principal logarithms and exponentiated once;
powers of the Wiener-Hopf factors ``b_+`` and ``b_-`` use their analytic
logarithms ``sum s_n t^n`` rather than the principal log of their values.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .specfun import PoleError, log_barnes_g
from .symbolkit import (
    SingularFactor,
    SmoothPart,
    SymbolSpec,
    log_smooth,
    normalize_angle,
    szego_constants,
    wiener_hopf_minus,
    wiener_hopf_plus,
)

NEG_INF = -math.inf
LOG2 = math.log(2.0)
LOG2PI = math.log(2.0 * math.pi)


class HypothesisError(ValueError):
    """Parameters violate the hypotheses of the selected asymptotic formula."""

    def __init__(self, theorem: str, violations: Sequence[str]):
        self.theorem = theorem
        self.violations = tuple(violations)
        super().__init__(f"{theorem}: " + "; ".join(self.violations))


@dataclass(frozen=True)
class Prediction:
    """``det ~ exp(log_g)^N * N^omega * exp(log_e) * (1 + O(N^rho))``.

    ``rho`` is ``None`` when no error exponent is known and ``-inf`` for an
    exact formula. ``violations`` lists hypotheses overridden by the caller.
    """

    log_g: complex
    omega: complex
    log_e: complex
    rho: float | None
    theorem: str
    violations: tuple[str, ...] = ()
    conjecture: bool = False
    params: dict = field(default_factory=dict, compare=False)

    @property
    def G(self) -> complex:
        return cmath.exp(self.log_g)

    @property
    def E(self) -> complex:
        return cmath.exp(self.log_e)

    def log_value(self, N: int) -> complex:
        return self.log_g * N + self.omega * math.log(N) + self.log_e

    def as_dict(self) -> dict:
        def c(z):
            z = complex(z)
            return [z.real, z.imag]

        return {
            "theorem": self.theorem,
            "logG": c(self.log_g),
            "Omega": c(self.omega),
            "logE": c(self.log_e),
            "E": c(self.E),
            "rho": self.rho,
            "conjecture": self.conjecture,
            "violations": list(self.violations),
        }


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _is_int(z: complex, tol: float = 0.0) -> bool:
    z = complex(z)
    return abs(z.imag) <= tol and abs(z.real - round(z.real)) <= tol


def _neg_int(z: complex) -> bool:
    """z in Z_- = {-1, -2, ...}."""
    return _is_int(z) and round(complex(z).real) <= -1


def _nonpos_int(z: complex) -> bool:
    return _is_int(z) and round(complex(z).real) <= 0


def _log(base: complex) -> complex:
    """Principal Log for the bases 1 +- t_r t_s^{+-1}, which lie in Re >= 0."""
    base = complex(base)
    if base == 0:
        raise HypothesisError("power", [f"zero base in a complex power"])
    if base.real < -1e-12:
        raise ArithmeticError(f"base {base} crosses into the left half-plane")
    return cmath.log(base)


def _lpow(base: complex, expo: complex) -> complex:
    """log of base**expo on the principal branch; zero exponent contributes 0."""
    expo = complex(expo)
    if expo == 0:
        return 0j
    return expo * _log(base)


def _log_g(z: complex) -> complex:
    return complex(log_barnes_g(z))


def _unit(theta: float) -> complex:
    return complex(math.cos(theta), math.sin(theta))


def _max(values: Iterable[float]) -> float:
    vals = list(values)
    return max(vals) if vals else NEG_INF


def _finish(theorem: str, violations: list[str], override: bool) -> tuple[str, ...]:
    if violations and not override:
        raise HypothesisError(theorem, violations)
    return tuple(violations)


def _barnes_sum(terms: Sequence[tuple[complex, float]], theorem: str) -> complex:
    """sum weight * log G(z); a zero of G is reported as a hypothesis failure."""
    out = 0j
    for z, w in terms:
        try:
            out += w * _log_g(z)
        except PoleError as exc:
            raise HypothesisError(theorem, [f"Barnes G vanishes at {complex(z):.6g}"]) from exc
    return out


@dataclass(frozen=True)
class WienerHopf:
    """Analytic logs of b_+ and b_- plus the Szego constants of b."""

    b: SmoothPart

    def log_plus(self, t: complex) -> complex:
        return complex(log_smooth(wiener_hopf_plus(self.b), t))

    def log_minus(self, t: complex) -> complex:
        return complex(log_smooth(wiener_hopf_minus(self.b), t))

    @property
    def consts(self):
        return szego_constants(self.b)


# ---------------------------------------------------------------------------
# smooth symbols
# ---------------------------------------------------------------------------


def predict_szego(b: SmoothPart) -> Prediction:
    """Strong Szego limit: det T_N(b) ~ G[b]^N E[b]."""
    c = szego_constants(b)
    return Prediction(c.log_G, 0j, c.log_E, None, "szego")


def predict_smooth_th(b: SmoothPart) -> Prediction:
    """det M_N(b) ~ G[b]^N E[b] F[b], or G[b]^N Ê[b] for even b."""
    c = szego_constants(b)
    log_e = c.log_Ehat if b.is_even() else c.log_E + c.log_F
    return Prediction(c.log_G, 0j, log_e, None, "smooth_th")


# ---------------------------------------------------------------------------
# general Fisher-Hartwig Toeplitz asymptotics
# ---------------------------------------------------------------------------


def classify_factors(factors: Sequence[SingularFactor]) -> dict[str, list[int]]:
    """Index sets M0, M+, M+*, M-, M-* by kind and integrality of the exponent."""
    sets = {"M0": [], "M+": [], "M+*": [], "M-": [], "M-*": []}
    for i, f in enumerate(factors):
        if f.kind == "omega":
            sets["M0"].append(i)
        elif f.kind == "eta":
            sets["M+*" if _neg_int(f.alpha) else "M+"].append(i)
        else:
            sets["M-*" if _neg_int(f.alpha) else "M-"].append(i)
    return sets


def fh_toeplitz_exponents(factors: Sequence[SingularFactor]) -> dict[str, float]:
    """rho_1, rho_2, rho_0^* and rho_0 for a Fisher-Hartwig factor list."""
    sets = classify_factors(factors)
    m0 = [factors[i] for i in sets["M0"]]
    rho1 = _max([-1 - 2 * f.beta.real for f in m0] + [-1 + factors[i].delta.real for i in sets["M-"]])
    rho2 = _max([-1 + 2 * f.beta.real for f in m0] + [-1 + factors[i].gamma.real for i in sets["M+"]])
    rho0_star = -1.0 if m0 else NEG_INF
    return {"rho1": rho1, "rho2": rho2, "rho0_star": rho0_star, "rho0": max(rho0_star, rho1 + rho2)}


def _fh_conditions(factors: Sequence[SingularFactor]) -> list[str]:
    out = []
    sets = classify_factors(factors)
    for i in sets["M0"]:
        f = factors[i]
        if _neg_int(2 * f.alpha):
            out.append(f"2*alpha = {2 * f.alpha:.6g} is a negative integer (factor {i})")
        for name, z in (("alpha+beta", f.alpha + f.beta), ("alpha-beta", f.alpha - f.beta)):
            if _nonpos_int(z):
                out.append(f"{name} = {z:.6g} lies in Z_- or is 0 (factor {i})")
    for i in sets["M+"]:
        if factors[i].alpha == 0:
            out.append(f"gamma = 0 (factor {i})")
    for i in sets["M-"]:
        if factors[i].alpha == 0:
            out.append(f"delta = 0 (factor {i})")
    return out


def predict_fh_toeplitz(spec: SymbolSpec, override: bool = False) -> Prediction:
    """det T_N(c) for c = b * prod omega * prod eta * prod xi."""
    theorem = "fh_toeplitz"
    if spec.sigma:
        raise HypothesisError(theorem, ["sigma-multiplied symbols are outside this formula"])
    factors = spec.factors
    violations = _fh_conditions(factors)
    ex = fh_toeplitz_exponents(factors)
    if not ex["rho0"] < 0:
        violations.append(f"rho_0 = {ex['rho0']:.6g} is not negative")
    violations = _finish(theorem, violations, override)

    wh = WienerHopf(spec.smooth)
    c = wh.consts
    sets = classify_factors(factors)
    m0 = sets["M0"]
    plus = m0 + sets["M+"] + sets["M+*"]
    minus = m0 + sets["M-"] + sets["M-*"]

    omega = sum((factors[i].alpha ** 2 - factors[i].beta ** 2 for i in m0), 0j)
    barnes = []
    for i in m0:
        f = factors[i]
        barnes += [(1 + f.alpha + f.beta, 1.0), (1 + f.alpha - f.beta, 1.0), (1 + 2 * f.alpha, -1.0)]
    log_e = c.log_E + _barnes_sum(barnes, theorem)
    for r in plus:
        for s in minus:
            if r == s:
                continue
            tr, ts = factors[r].t, factors[s].t
            log_e += _lpow(1 - ts / tr, -factors[r].gamma * factors[s].delta)
    for r in minus:
        log_e += -factors[r].delta * wh.log_plus(factors[r].t)
    for r in plus:
        log_e += -factors[r].gamma * wh.log_minus(factors[r].t)
    return Prediction(c.log_G, omega, log_e, ex["rho0"], theorem, violations)


# ---------------------------------------------------------------------------
# even symbols
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EvenParams:
    """One representative per mirrored pair of an even Fisher-Hartwig symbol.

    ``m0``: (alpha, beta, theta) standing for omega_{a,b,t} omega_{a,-b,-t};
    ``mpm``: (gamma, theta) standing for eta_{g,t} xi_{g,-t}.
    """

    b: SmoothPart
    m0: tuple[tuple[complex, complex, float], ...] = ()
    mpm: tuple[tuple[complex, float], ...] = ()

    @classmethod
    def from_spec(cls, spec: SymbolSpec) -> "EvenParams":
        reps0, repspm = spec.even_representatives()
        return cls(
            spec.smooth,
            tuple((f.alpha, f.beta, f.theta) for f in reps0),
            tuple((f.alpha, f.theta) for f in repspm),
        )

    def to_spec(self, sigma: bool = False) -> SymbolSpec:
        factors = []
        for a, bb, th in self.m0:
            f = SingularFactor.omega(a, bb, th)
            factors += [f, f.tilde()]
        for g, th in self.mpm:
            f = SingularFactor.eta(g, th)
            factors += [f, f.tilde()]
        return SymbolSpec(self.b, tuple(factors), sigma)

    def doubled_factors(self) -> tuple[SingularFactor, ...]:
        return self.to_spec().factors


def _even_conditions(p: EvenParams) -> list[str]:
    out = []
    if not p.b.is_even():
        out.append("smooth part is not even")
    thetas = [th for _, _, th in p.m0] + [th for _, th in p.mpm]
    for th in thetas:
        th = normalize_angle(th)
        if abs(th) < 1e-14 or abs(abs(th) - math.pi) < 1e-14:
            out.append(f"angle {th:.6g} must lie in (-pi,0) or (0,pi)")
    for i in range(len(thetas)):
        for j in range(i):
            if abs(abs(normalize_angle(thetas[i])) - abs(normalize_angle(thetas[j]))) < 1e-14:
                out.append(f"|theta| values must be distinct ({thetas[i]:.6g}, {thetas[j]:.6g})")
    for a, b, _ in p.m0:
        a, b = complex(a), complex(b)
        if _neg_int(2 * a):
            out.append(f"2*alpha = {2 * a:.6g} is a negative integer")
        if _nonpos_int(a + b) or _nonpos_int(a - b):
            out.append(f"alpha+-beta = {a + b:.6g}, {a - b:.6g} hits Z_- or 0")
        if not abs(b.real) < 0.5:
            out.append(f"|Re beta| = {abs(b.real):.6g} is not below 1/2")
    for g, _ in p.mpm:
        g = complex(g)
        if not _neg_int(g):
            if g == 0:
                out.append("gamma = 0")
            if not g.real < 1:
                out.append(f"Re gamma = {g.real:.6g} is not below 1")
    return out


def even_exponents(p: EvenParams) -> dict[str, float]:
    """rho_12, rho_0^* and rho_0 = max(rho_0^*, 2 rho_12) for an even symbol."""
    rho12 = _max(
        [-1 + 2 * abs(complex(b).real) for _, b, _ in p.m0]
        + [-1 + complex(g).real for g, _ in p.mpm if not _neg_int(g)]
    )
    rho0_star = -1.0 if p.m0 else NEG_INF
    return {"rho12": rho12, "rho0_star": rho0_star, "rho0": max(rho0_star, 2 * rho12)}


def _unpack(p: EvenParams):
    m0 = [(complex(a), complex(b), _unit(th)) for a, b, th in p.m0]
    mpm = [(complex(g), _unit(th)) for g, th in p.mpm]
    return m0, mpm


def _even_pair_blocks(p: EvenParams, half: bool) -> complex:
    """The four pair-product blocks; ``half`` gives the Toeplitz+Hankel exponents."""
    m0, mpm = _unpack(p)
    h = 0.5 if half else 1.0
    out = 0j
    for ar, br, tr in m0:
        for as_, bs, ts in m0:
            out += _lpow(1 - tr * ts, -h * (ar - br) * (as_ - bs))
            out += _lpow(1 - 1 / (tr * ts), -h * (ar + br) * (as_ + bs))
    for i, (ar, br, tr) in enumerate(m0):
        for j, (as_, bs, ts) in enumerate(m0):
            if i == j:
                continue
            out += _lpow(1 - tr / ts, -h * (ar - br) * (as_ + bs))
            out += _lpow(1 - ts / tr, -h * (ar + br) * (as_ - bs))
    # the mixed block carries the same exponents in both determinants
    mix = 1.0 if half else 2.0
    for ar, br, tr in m0:
        for gs, ts in mpm:
            out += _lpow(1 - 1 / (tr * ts), -mix * (ar + br) * gs)
            out += _lpow(1 - tr / ts, -mix * (ar - br) * gs)
    for gr, tr in mpm:
        for gs, ts in mpm:
            out += _lpow(1 - 1 / (tr * ts), -h * gr * gs)
    return out


def fh_toeplitz_even_constants(p: EvenParams, theorem: str = "fh_toeplitz_even") -> tuple[complex, complex]:
    """(Omega_T^sym, log E_T^sym) without hypothesis checks."""
    wh = WienerHopf(p.b)
    m0, mpm = _unpack(p)
    omega = 2 * sum((a * a - b * b for a, b, _ in m0), 0j)
    barnes = []
    for a, b, _ in m0:
        barnes += [(1 + a + b, 2.0), (1 + a - b, 2.0), (1 + 2 * a, -2.0)]
    log_e = wh.consts.log_E + _barnes_sum(barnes, theorem)
    for a, b, t in m0:
        log_e += -2 * (a - b) * wh.log_plus(t) - 2 * (a + b) * wh.log_minus(t)
    for g, t in mpm:
        log_e += -2 * g * wh.log_minus(t)
    log_e += _even_pair_blocks(p, half=False)
    return omega, log_e


def predict_fh_toeplitz_even(spec: SymbolSpec | EvenParams, override: bool = False) -> Prediction:
    """det T_N(c) for an even Fisher-Hartwig symbol given by mirrored pairs."""
    theorem = "fh_toeplitz_even"
    p = spec if isinstance(spec, EvenParams) else EvenParams.from_spec(spec.with_sigma(False))
    violations = _finish(theorem, _even_conditions(p), override)
    omega, log_e = fh_toeplitz_even_constants(p, theorem)
    ex = even_exponents(p)
    return Prediction(szego_constants(p.b).log_G, omega, log_e, ex["rho0"], theorem, violations)


def log_c_plus_ratio(p: EvenParams) -> complex:
    """log of c_+(1)/c_+(-1) for the plus factor of an even symbol."""
    wh = WienerHopf(p.b)
    m0, mpm = _unpack(p)
    out = wh.log_plus(1.0) - wh.log_plus(-1.0)
    for a, b, t in m0:
        out += _lpow(1 - 1 / t, a + b) - _lpow(1 + 1 / t, a + b)
        out += _lpow(1 - t, a - b) - _lpow(1 + t, a - b)
    for g, t in mpm:
        out += _lpow(1 - 1 / t, g) - _lpow(1 + 1 / t, g)
    return out


def th_even_constants(p: EvenParams, theorem: str = "th_even") -> tuple[complex, complex]:
    """(Omega_M^sym, log E_M^sym) without hypothesis checks."""
    wh = WienerHopf(p.b)
    m0, mpm = _unpack(p)
    omega = sum((a * a - b * b for a, b, _ in m0), 0j)
    barnes = []
    for a, b, _ in m0:
        barnes += [(1 + a + b, 1.0), (1 + a - b, 1.0), (1 + 2 * a, -1.0)]
    log_e = wh.consts.log_Ehat + _barnes_sum(barnes, theorem)
    for a, b, t in m0:
        log_e += _lpow(1 - 1 / t, (a + b) / 2) + _lpow(1 - t, (a - b) / 2)
        log_e -= _lpow(1 + 1 / t, (a + b) / 2) + _lpow(1 + t, (a - b) / 2)
        log_e += (a * a - b * b) * LOG2
        log_e += -(a - b) * wh.log_plus(t) - (a + b) * wh.log_minus(t)
    for g, t in mpm:
        log_e += _lpow(1 - 1 / t, g / 2) - _lpow(1 + 1 / t, g / 2)
        log_e += -g * wh.log_minus(t)
    log_e += _even_pair_blocks(p, half=True)
    return omega, log_e


def predict_th_even(spec: SymbolSpec | EvenParams, override: bool = False) -> Prediction:
    """det M_N(c) for an even Fisher-Hartwig symbol; error exponent rho_12."""
    theorem = "th_even"
    p = spec if isinstance(spec, EvenParams) else EvenParams.from_spec(spec.with_sigma(False))
    violations = _finish(theorem, _even_conditions(p), override)
    omega, log_e = th_even_constants(p, theorem)
    ex = even_exponents(p)
    return Prediction(szego_constants(p.b).log_G, omega, log_e, ex["rho12"], theorem, violations)


def _jump_pairs(spec: SymbolSpec) -> tuple[SmoothPart, list[tuple[complex, float]]]:
    """(b, [(beta_r, theta_r)]) for b * prod t_{beta_r,theta_r} t_{-beta_r,-theta_r}."""
    p = EvenParams.from_spec(spec.with_sigma(False))
    if p.mpm or any(complex(a) != 0 for a, _, _ in p.m0):
        raise HypothesisError("th_jumps", ["only pure jump pairs (alpha = 0) are allowed"])
    return p.b, [(complex(b), float(th)) for _, b, th in p.m0]


def predict_th_jumps(spec: SymbolSpec, override: bool = False) -> Prediction:
    """Piecewise continuous even symbols: b times jump pairs at +-theta_r.

    An independent assembly of the pure-jump case, with theta_r in (0, pi).
    """
    theorem = "th_jumps"
    b, pairs = _jump_pairs(spec)
    violations = []
    if not b.is_even():
        violations.append("smooth part is not even")
    for beta, th in pairs:
        if not 0 < th < math.pi:
            violations.append(f"theta = {th:.6g} not in (0, pi)")
        if not abs(beta.real) < 0.5:
            violations.append(f"|Re beta| = {abs(beta.real):.6g} is not below 1/2")
    violations = _finish(theorem, violations, override)
    wh = WienerHopf(b)
    c = wh.consts
    omega = -sum((beta * beta for beta, _ in pairs), 0j)
    log_e = c.log_Ehat
    barnes = []
    ts = [(beta, _unit(th)) for beta, th in pairs]
    for beta, t in ts:
        barnes += [(1 + beta, 1.0), (1 - beta, 1.0)]
        log_e += _lpow(1 - t * t, -beta * beta / 2) + _lpow(1 - 1 / (t * t), -beta * beta / 2)
        log_e += -beta * beta * LOG2
        log_e += _lpow(1 - 1 / t, beta / 2) + _lpow(1 - t, -beta / 2)
        log_e -= _lpow(1 + 1 / t, beta / 2) + _lpow(1 + t, -beta / 2)
        log_e += beta * wh.log_plus(t) - beta * wh.log_minus(t)
    log_e += _barnes_sum(barnes, theorem)
    for i in range(len(ts)):
        for j in range(i + 1, len(ts)):
            (br, tr), (bs, tss) = ts[i], ts[j]
            bb = br * bs
            log_e += _lpow(1 - tr * tss, -bb) + _lpow(1 - 1 / (tr * tss), -bb)
            log_e += _lpow(1 - tr / tss, bb) + _lpow(1 - tss / tr, bb)
    rho = _max([-1 + 2 * abs(beta.real) for beta, _ in pairs])
    return Prediction(c.log_G, omega, log_e, rho, theorem, violations)


# ---------------------------------------------------------------------------
# limit ratio det T_2N(a sigma) / det T_2N(a)
# ---------------------------------------------------------------------------


def predict_limit_ratio(spec: SymbolSpec | EvenParams, override: bool = False) -> complex:
    """c_+(1)/c_+(-1) for an even symbol with no singularity at +-1.

    With ``override`` a non-even smooth symbol is accepted; its plus factor
    is still b_+, so the ratio b_+(1)/b_+(-1) is returned.
    """
    theorem = "limit_ratio"
    if isinstance(spec, EvenParams):
        return cmath.exp(log_c_plus_ratio(spec))
    s = spec.with_sigma(False)
    violations = [f"factor at theta = {f.theta:.6g} sits at +-1" for f in s.factors
                  if abs(f.theta) < 1e-14 or abs(abs(f.theta) - math.pi) < 1e-14]
    even = s.is_even()
    if not even:
        violations.append("symbol is not even")
    _finish(theorem, violations, override)
    if not even and s.factors:
        raise HypothesisError(theorem, ["no plus factor for a non-even symbol with singular factors"])
    try:
        p = EvenParams.from_spec(s) if even else EvenParams(s.smooth)
    except ValueError as exc:
        raise HypothesisError(theorem, [str(exc)]) from exc
    return cmath.exp(log_c_plus_ratio(p))


def limit_ratio_order(spec: SymbolSpec | EvenParams) -> float:
    """Error exponent max(rho_0, rho_12) = rho_12 of the limit ratio."""
    p = spec if isinstance(spec, EvenParams) else EvenParams.from_spec(spec.with_sigma(False))
    ex = even_exponents(p)
    return max(ex["rho0"], ex["rho12"])


# ---------------------------------------------------------------------------
# single jump closed forms and localization
# ---------------------------------------------------------------------------

SINGLE_JUMP_VARIANTS = ("at1", "atMinus1", "interior", "conjugate_pair", "even_pair")


def predict_single_jump(variant: str, beta: complex, theta0: float | None = None, override: bool = False) -> Prediction:
    """Closed forms for det M_N of one jump or one symmetric pair of jumps.

    at1: t_{beta,0}; atMinus1: t_{beta,pi}; interior: t_{beta,theta0};
    conjugate_pair: t_{beta,pi/2} t_{beta,-pi/2};
    even_pair: t_{beta,theta0} t_{-beta,-theta0}.
    """
    theorem = f"single_jump:{variant}"
    beta = complex(beta)
    b2 = beta * beta
    violations = []
    if variant in ("at1", "atMinus1", "conjugate_pair"):
        if _is_int(beta):
            violations.append(f"beta = {beta:.6g} is an integer")
    elif variant == "interior":
        if theta0 is None:
            raise ValueError("interior variant needs theta0")
        th = normalize_angle(theta0)
        if abs(th) < 1e-14 or abs(abs(th) - math.pi) < 1e-14:
            violations.append(f"theta0 = {th:.6g} must lie in (-pi,0) or (0,pi)")
        if not abs(beta.real) < 0.5:
            violations.append(f"|Re beta| = {abs(beta.real):.6g} is not below 1/2")
    elif variant == "even_pair":
        if theta0 is None:
            raise ValueError("even_pair variant needs theta0")
        if not 0 < normalize_angle(theta0) < math.pi:
            violations.append(f"theta0 = {theta0:.6g} not in (0, pi)")
        if not abs(beta.real) < 0.5:
            violations.append(f"|Re beta| = {abs(beta.real):.6g} is not below 1/2")
    else:
        raise ValueError(f"unknown variant {variant!r}; choose from {SINGLE_JUMP_VARIANTS}")
    violations = _finish(theorem, violations, override)

    rho: float | None = None
    if variant in ("at1", "atMinus1"):
        shift = 0.5 if variant == "at1" else 1.5
        omega = -1.5 * b2 - 0.5 * beta if variant == "at1" else -1.5 * b2 + 0.5 * beta
        log_e = 0.5 * beta * LOG2PI + 1.5 * b2 * LOG2
        log_e += _barnes_sum([(shift - beta, 1.0), (1 - beta, 1.0), (1 + beta, 1.0), (shift, -1.0)], theorem)
    elif variant == "interior":
        t0 = _unit(theta0)
        omega = -b2
        log_e = _barnes_sum([(1 - beta, 1.0), (1 + beta, 1.0)], theorem)
        log_e += _lpow(1 - 1 / t0, b2 / 2 + beta / 2) + _lpow(1 + 1 / t0, b2 / 2 - beta / 2)
    elif variant == "conjugate_pair":
        omega = -3 * b2
        log_e = 4 * b2 * LOG2 + _barnes_sum([(1 - 2 * beta, 1.0), (1 + beta, 2.0)], theorem)
    else:
        t0 = _unit(theta0)
        omega = -b2
        log_e = -b2 * LOG2 + _lpow(1 - t0 * t0, -b2 / 2) + _lpow(1 - 1 / (t0 * t0), -b2 / 2)
        log_e += _lpow(1 - 1 / t0, beta / 2) + _lpow(1 - t0, -beta / 2)
        log_e -= _lpow(1 + 1 / t0, beta / 2) + _lpow(1 + t0, -beta / 2)
        log_e += _barnes_sum([(1 + beta, 1.0), (1 - beta, 1.0)], theorem)
        rho = -1 + 2 * abs(beta.real)
    return Prediction(0j, omega, log_e, rho, theorem, violations, params={"beta": beta, "theta0": theta0})


def predict_conjecture(beta1: complex, beta2: complex, theta0: float, override: bool = False) -> Prediction:
    """Conjectured asymptotics of det M_N(t_{beta1,theta0} t_{beta2,-theta0})."""
    theorem = "conjecture"
    b1, b2 = complex(beta1), complex(beta2)
    violations = []
    if not 0 < theta0 < math.pi:
        violations.append(f"theta0 = {theta0:.6g} not in (0, pi)")
    for name, z in (("beta1", b1), ("beta2", b2), ("beta1+beta2", b1 + b2)):
        if not abs(z.real) < 0.5:
            violations.append(f"|Re {name}| = {abs(z.real):.6g} is not below 1/2")
    violations = _finish(theorem, violations, override)
    t0 = _unit(theta0)
    omega = -b1 * b1 - b1 * b2 - b2 * b2
    log_e = _barnes_sum([(1 + b1, 1.0), (1 + b2, 1.0), (1 - b1 - b2, 1.0)], theorem)
    log_e += b1 * b2 * LOG2
    log_e += _lpow(1 - 1 / (t0 * t0), b1 * b1 / 2 + b1 * b2) + _lpow(1 - t0 * t0, b2 * b2 / 2 + b1 * b2)
    log_e += _lpow(1 - 1 / t0, b1 / 2) + _lpow(1 - t0, b2 / 2)
    log_e -= _lpow(1 + 1 / t0, b1 / 2) + _lpow(1 + t0, b2 / 2)
    return Prediction(0j, omega, log_e, None, theorem, violations, conjecture=True,
                      params={"beta1": b1, "beta2": b2, "theta0": theta0})


@dataclass(frozen=True)
class JumpLayout:
    """b * t_{beta_plus,0} * t_{beta_minus,pi} * prod t_{bp_r,theta_r} t_{bm_r,-theta_r}."""

    b: SmoothPart
    beta_plus: complex = 0j
    beta_minus: complex = 0j
    pairs: tuple[tuple[complex, complex, float], ...] = ()

    @classmethod
    def from_spec(cls, spec: SymbolSpec) -> "JumpLayout":
        bp = bm = 0j
        upper: dict[float, list] = {}
        for f in spec.factors:
            if not f.is_jump:
                raise HypothesisError("localization", ["only jump factors (alpha = 0) are allowed"])
            th = f.theta
            if abs(th) < 1e-14:
                bp = f.beta
            elif abs(th - math.pi) < 1e-14:
                bm = f.beta
            else:
                key = round(abs(th), 12)
                slot = upper.setdefault(key, [0j, 0j, abs(th)])
                slot[0 if th > 0 else 1] = f.beta
        pairs = tuple((p, m, th) for p, m, th in (upper[k] for k in sorted(upper)))
        return cls(spec.smooth, bp, bm, pairs)

    def to_spec(self) -> SymbolSpec:
        fs = []
        if self.beta_plus != 0:
            fs.append(SingularFactor.jump(self.beta_plus, 0.0))
        if self.beta_minus != 0:
            fs.append(SingularFactor.jump(self.beta_minus, math.pi))
        for p, m, th in self.pairs:
            if p != 0:
                fs.append(SingularFactor.jump(p, th))
            if m != 0:
                fs.append(SingularFactor.jump(m, -th))
        return SymbolSpec(self.b, tuple(fs))


def _localization_conditions(lay: JumpLayout) -> list[str]:
    out = []
    if not -0.5 < complex(lay.beta_plus).real < 0.25:
        out.append("Re beta_+ must lie in (-1/2, 1/4)")
    if not -0.25 < complex(lay.beta_minus).real < 0.5:
        out.append("Re beta_- must lie in (-1/4, 1/2)")
    for p, m, th in lay.pairs:
        if not 0 < th < math.pi:
            out.append(f"theta = {th:.6g} not in (0, pi)")
        for name, z in (("beta_r^+", p), ("beta_r^-", m), ("beta_r^+ + beta_r^-", complex(p) + complex(m))):
            if not abs(complex(z).real) < 0.5:
                out.append(f"|Re {name}| is not below 1/2 at theta = {th:.6g}")
    return out


def log_localization_H(lay: JumpLayout) -> complex:
    """log H relating det M_N(phi) to the product of its localized pieces."""
    wh = WienerHopf(lay.b)
    bp, bm = complex(lay.beta_plus), complex(lay.beta_minus)
    out = 2 * bp * wh.log_plus(1.0) - bp * wh.log_minus(1.0)
    out += 2 * bm * wh.log_plus(-1.0) - bm * wh.log_minus(-1.0)
    out += 3 * bp * bm * LOG2
    ps = [(complex(p), complex(m), _unit(th)) for p, m, th in lay.pairs]
    for p, m, t in ps:
        out += (p + m) * wh.log_plus(t) - p * wh.log_minus(t)
        out += (p + m) * wh.log_plus(1 / t) - m * wh.log_minus(1 / t)
        out += _lpow(1 - t, bp * (p + 2 * m)) + _lpow(1 - 1 / t, bp * (2 * p + m))
        out += _lpow(1 + t, bm * (p + 2 * m)) + _lpow(1 + 1 / t, bm * (2 * p + m))
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            (pr, mr, tr), (ps_, ms, ts) = ps[i], ps[j]
            out += _lpow(1 - tr * ts, mr * ms + pr * ms + mr * ps_)
            out += _lpow(1 - 1 / (tr * ts), pr * ps_ + pr * ms + mr * ps_)
            out += _lpow(1 - tr / ts, pr * ps_ + mr * ms + mr * ps_)
            out += _lpow(1 - ts / tr, pr * ps_ + mr * ms + pr * ms)
    return out


def predict_localization_H(spec: SymbolSpec | JumpLayout, override: bool = False) -> complex:
    """The localization constant H of a jump layout."""
    lay = spec if isinstance(spec, JumpLayout) else JumpLayout.from_spec(spec)
    _finish("localization", _localization_conditions(lay), override)
    return cmath.exp(log_localization_H(lay))


def predict_localization_H_even(b: SmoothPart, pairs: Sequence[tuple[complex, float]], override: bool = False) -> complex:
    """H for even b and pairs t_{beta_r,theta_r} t_{-beta_r,-theta_r}."""
    violations = [] if b.is_even() else ["smooth part is not even"]
    for beta, th in pairs:
        if not 0 < th < math.pi:
            violations.append(f"theta = {th:.6g} not in (0, pi)")
        if not abs(complex(beta).real) < 0.5:
            violations.append("|Re beta_r| is not below 1/2")
    _finish("localization_even", violations, override)
    wh = WienerHopf(b)
    ps = [(complex(beta), _unit(th)) for beta, th in pairs]
    out = sum((beta * wh.log_plus(t) - beta * wh.log_minus(t) for beta, t in ps), 0j)
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            (br, tr), (bs, ts) = ps[i], ps[j]
            out += _lpow(1 - tr * ts, -br * bs) + _lpow(1 - 1 / (tr * ts), -br * bs)
            out += _lpow(1 - tr / ts, br * bs) + _lpow(1 - ts / tr, br * bs)
    return cmath.exp(out)


def predict_localized(spec: SymbolSpec, override: bool = False) -> Prediction:
    """det M_N of a jump layout as H times the product of localized asymptotics.

    Each piece uses the matching closed form; a pair with two unrelated
    jumps falls back on the conjectured formula and marks the result.
    """
    theorem = "localized"
    lay = JumpLayout.from_spec(spec)
    violations = list(_finish(theorem, _localization_conditions(lay), override))
    parts = [predict_smooth_th(lay.b)]
    conj = False
    if lay.beta_plus != 0:
        parts.append(predict_single_jump("at1", lay.beta_plus, override=override))
    if lay.beta_minus != 0:
        parts.append(predict_single_jump("atMinus1", lay.beta_minus, override=override))
    for p, m, th in lay.pairs:
        p, m = complex(p), complex(m)
        if m == 0:
            parts.append(predict_single_jump("interior", p, th, override=override))
        elif p == 0:
            parts.append(predict_single_jump("interior", m, -th, override=override))
        elif abs(p + m) < 1e-15:
            parts.append(predict_single_jump("even_pair", p, th, override=override))
        elif abs(p - m) < 1e-15 and abs(th - math.pi / 2) < 1e-15:
            parts.append(predict_single_jump("conjugate_pair", p, override=override))
        else:
            parts.append(predict_conjecture(p, m, th, override=override))
            conj = True
    omega = sum((q.omega for q in parts), 0j)
    log_e = sum((q.log_e for q in parts), 0j) + log_localization_H(lay)
    for q in parts:
        violations += list(q.violations)
    return Prediction(parts[0].log_g, omega, log_e, None, theorem, tuple(violations), conjecture=conj)


def predict_prop_sigma(spec: SymbolSpec) -> Prediction:
    """det T_2N(sigma) = 1 exactly."""
    if spec.factors or spec.smooth.log_coeffs or not spec.sigma:
        raise HypothesisError("prop_sigma", ["the symbol must be sigma alone"])
    return Prediction(0j, 0j, 0j, NEG_INF, "prop_sigma")


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

THEOREMS = {
    "szego": "toeplitz",
    "fh_toeplitz": "toeplitz",
    "fh_toeplitz_even": "toeplitz",
    "prop_sigma": "toeplitz",
    "smooth_th": "th",
    "th_even": "th",
    "th_jumps": "th",
    "single_jump": "th",
    "localized": "th",
    "conjecture": "th",
    "limit_ratio": "ratio",
}


def _single_jump_from_spec(spec: SymbolSpec, override: bool) -> Prediction:
    if spec.smooth.log_coeffs or spec.sigma:
        raise HypothesisError("single_jump", ["needs b = 1 and no sigma"])
    fs = spec.factors
    if not fs or not all(f.is_jump for f in fs):
        raise HypothesisError("single_jump", ["needs one jump or one pair of jumps"])
    if len(fs) == 1:
        f = fs[0]
        if abs(f.theta) < 1e-14:
            return predict_single_jump("at1", f.beta, override=override)
        if abs(f.theta - math.pi) < 1e-14:
            return predict_single_jump("atMinus1", f.beta, override=override)
        return predict_single_jump("interior", f.beta, f.theta, override=override)
    if len(fs) == 2:
        f, g = sorted(fs, key=lambda x: -x.theta)
        if abs(f.theta + g.theta) < 1e-14:
            if abs(f.beta + g.beta) < 1e-15 and f.theta > 0:
                return predict_single_jump("even_pair", f.beta, f.theta, override=override)
            if abs(f.beta - g.beta) < 1e-15 and abs(f.theta - math.pi / 2) < 1e-14:
                return predict_single_jump("conjugate_pair", f.beta, override=override)
    raise HypothesisError("single_jump", ["factor layout has no closed form"])


def conjecture_params(spec: SymbolSpec) -> tuple[complex, complex, float]:
    """(beta1, beta2, theta0) for t_{beta1,theta0} t_{beta2,-theta0}."""
    fs = spec.factors
    if spec.smooth.log_coeffs or spec.sigma or len(fs) != 2 or not all(f.is_jump for f in fs):
        raise HypothesisError("conjecture", ["needs exactly two jumps and b = 1"])
    f, g = sorted(fs, key=lambda x: -x.theta)
    if abs(f.theta + g.theta) > 1e-14 or f.theta <= 0:
        raise HypothesisError("conjecture", ["jumps must sit at theta0 and -theta0"])
    return f.beta, g.beta, f.theta


def predict(spec: SymbolSpec, theorem: str, override: bool = False) -> Prediction:
    """Prediction for ``spec`` under the named formula (see ``THEOREMS``)."""
    if theorem == "szego":
        if spec.factors or spec.sigma:
            raise HypothesisError(theorem, ["needs a smooth symbol"])
        return predict_szego(spec.smooth)
    if theorem == "smooth_th":
        if spec.factors or spec.sigma:
            raise HypothesisError(theorem, ["needs a smooth symbol"])
        return predict_smooth_th(spec.smooth)
    if theorem == "fh_toeplitz":
        return predict_fh_toeplitz(spec, override)
    if theorem == "fh_toeplitz_even":
        return predict_fh_toeplitz_even(spec, override)
    if theorem == "th_even":
        return predict_th_even(spec, override)
    if theorem == "th_jumps":
        return predict_th_jumps(spec, override)
    if theorem == "single_jump":
        return _single_jump_from_spec(spec, override)
    if theorem == "localized":
        return predict_localized(spec, override)
    if theorem == "conjecture":
        return predict_conjecture(*conjecture_params(spec), override=override)
    if theorem == "prop_sigma":
        return predict_prop_sigma(spec)
    if theorem == "limit_ratio":
        ratio = predict_limit_ratio(spec, override)
        return Prediction(0j, 0j, cmath.log(ratio), limit_ratio_order(spec), theorem)
    raise ValueError(f"unknown theorem {theorem!r}; choose from {sorted(THEOREMS)}")

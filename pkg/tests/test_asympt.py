import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fhlab import asympt
from fhlab.asympt import EvenParams, HypothesisError
from fhlab.harness import random_even_params
from fhlab.symbolkit import SingularFactor, SmoothPart, SymbolSpec

finite = dict(allow_nan=False, allow_infinity=False)
mpmath.mp.dps = 30
G = mpmath.barnesg


def rel(a, b):
    return abs(complex(a) - complex(b)) / max(abs(complex(b)), 1e-300)


def jump_pair(beta, theta, b=None):
    f = SingularFactor.jump(beta, theta)
    return SymbolSpec(b or SmoothPart.constant_one(), (f, f.tilde()))


# closed forms transcribed directly with mpmath as an independent route

def ref_pair(beta, th):
    t = mpmath.expj(th)
    b2 = beta * beta
    return (
        mpmath.power(2, -b2)
        * mpmath.power(1 - t * t, -b2 / 2)
        * mpmath.power(1 - 1 / (t * t), -b2 / 2)
        * mpmath.power(1 - 1 / t, beta / 2)
        * mpmath.power(1 - t, -beta / 2)
        / (mpmath.power(1 + 1 / t, beta / 2) * mpmath.power(1 + t, -beta / 2))
        * G(1 + beta)
        * G(1 - beta)
    )


def ref_interior(beta, th):
    t = mpmath.expj(th)
    b2 = beta * beta
    return G(1 - beta) * G(1 + beta) * mpmath.power(1 - 1 / t, b2 / 2 + beta / 2) * mpmath.power(1 + 1 / t, b2 / 2 - beta / 2)


def ref_at1(beta):
    return mpmath.power(2 * mpmath.pi, beta / 2) * mpmath.power(2, 1.5 * beta**2) * G(0.5 - beta) * G(1 - beta) * G(1 + beta) / G(0.5)


def ref_atm1(beta):
    return mpmath.power(2 * mpmath.pi, beta / 2) * mpmath.power(2, 1.5 * beta**2) * G(1.5 - beta) * G(1 - beta) * G(1 + beta) / G(1.5)


def ref_conj_pair(beta):
    return mpmath.power(2, 4 * beta**2) * G(1 - 2 * beta) * G(1 + beta) ** 2


def ref_conjecture(b1, b2, th):
    t = mpmath.expj(th)
    return (
        G(1 + b1) * G(1 + b2) * G(1 - b1 - b2) * mpmath.power(2, b1 * b2)
        * mpmath.power(1 - 1 / (t * t), b1**2 / 2 + b1 * b2)
        * mpmath.power(1 - t * t, b2**2 / 2 + b1 * b2)
        * mpmath.power(1 - 1 / t, b1 / 2) * mpmath.power(1 - t, b2 / 2)
        / (mpmath.power(1 + 1 / t, b1 / 2) * mpmath.power(1 + t, b2 / 2))
    )


def ref_two_pairs(pairs, s):
    """E for b = exp(s(t + 1/t)) times jump pairs, so b_+(t) = e^{st}, b_-(t) = e^{s/t}."""
    out = mpmath.exp(s * s / 2 + s)
    ts = [mpmath.expj(th) for _, th in pairs]
    for (beta, _), t in zip(pairs, ts):
        out *= ref_pair(beta, float(mpmath.arg(t)))
        out *= mpmath.exp(beta * s * t) * mpmath.exp(-beta * s / t)
    for r in range(len(pairs)):
        for q in range(r + 1, len(pairs)):
            br, bs = pairs[r][0], pairs[q][0]
            tr, tq = ts[r], ts[q]
            out *= mpmath.power(1 - tr * tq, -br * bs) * mpmath.power(1 - 1 / (tr * tq), -br * bs)
            out *= mpmath.power(1 - tr / tq, br * bs) * mpmath.power(1 - tq / tr, br * bs)
    return out


class TestSmooth:
    def test_trivial(self):
        p = asympt.predict_smooth_th(SmoothPart.constant_one())
        assert p.E == pytest.approx(1) and p.rho is None

    @pytest.mark.parametrize("s", [0.3, -0.2 + 0.1j])
    def test_even(self, s):
        p = asympt.predict_smooth_th(SmoothPart.from_dict({1: s, -1: s}))
        assert p.E == pytest.approx(np.exp(s * s / 2 + s), rel=1e-14)

    def test_non_even(self):
        s = 0.35
        p = asympt.predict_smooth_th(SmoothPart.from_dict({1: s}))
        assert p.E == pytest.approx(np.exp(s - s * s / 2), rel=1e-14)

    def test_szego(self):
        s = 0.3
        p = asympt.predict_szego(SmoothPart.from_dict({0: 0.1, 1: s, -1: s}))
        assert p.G == pytest.approx(np.exp(0.1)) and p.E == pytest.approx(np.exp(s * s))


class TestFisherHartwigToeplitz:
    def test_empty(self):
        p = asympt.predict_fh_toeplitz(SymbolSpec())
        assert p.omega == 0 and p.E == pytest.approx(1) and p.rho == -math.inf

    @pytest.mark.parametrize("beta", [0.3, -0.2, 0.1 + 0.1j])
    def test_single_jump(self, beta):
        spec = SymbolSpec(factors=(SingularFactor.jump(beta, 0.0),))
        p = asympt.predict_fh_toeplitz(spec)
        assert p.omega == pytest.approx(-beta * beta)
        assert rel(p.E, G(1 + beta) * G(1 - beta)) < 1e-12
        assert p.rho < 0

    def test_eta_only(self):
        p = asympt.predict_fh_toeplitz(SymbolSpec(factors=(SingularFactor.eta(0.4, 1.0),)))
        assert p.omega == 0 and p.E == pytest.approx(1)

    def test_sigma_rejected(self):
        with pytest.raises(HypothesisError):
            asympt.predict_fh_toeplitz(jump_pair(0.2, 1.0).with_sigma())


class TestEven:
    def test_empty_reduces_to_smooth(self):
        b = SmoothPart.from_dict({1: 0.3, -1: 0.3, 2: -0.1, -2: -0.1}, even=True)
        spec = SymbolSpec(b)
        assert asympt.predict_fh_toeplitz_even(spec).E == pytest.approx(asympt.predict_szego(b).E, rel=1e-14)
        assert asympt.predict_th_even(spec).E == pytest.approx(asympt.predict_smooth_th(b).E, rel=1e-14)

    def test_single_pair_toeplitz(self):
        beta, th = 0.3, 1.1
        p = asympt.predict_fh_toeplitz_even(jump_pair(beta, th))
        assert p.omega == pytest.approx(-2 * beta * beta)
        assert rel(p.E, asympt.predict_fh_toeplitz(jump_pair(beta, th)).E) < 1e-12

    @pytest.mark.parametrize("beta,th", [(0.3, 2 * math.pi / 5), (-0.45, 0.2), (0.1 + 0.3j, 2.9)])
    def test_th_even_single_pair(self, beta, th):
        p = asympt.predict_th_even(jump_pair(beta, th))
        assert p.omega == pytest.approx(-beta * beta)
        assert rel(p.E, ref_pair(beta, th)) < 1e-12
        assert p.rho == pytest.approx(-1 + 2 * abs(complex(beta).real))

    def test_two_pairs(self):
        pairs = ((0.25, 1.0), (-0.2, 2.2))
        s = 0.3
        b = SmoothPart.from_dict({1: s, -1: s}, even=True)
        factors = []
        for beta, th in pairs:
            f = SingularFactor.jump(beta, th)
            factors += [f, f.tilde()]
        spec = SymbolSpec(b, tuple(factors))
        ref = ref_two_pairs(pairs, s)
        for theorem in ("th_even", "th_jumps", "localized"):
            p = asympt.predict(spec, theorem)
            assert rel(p.E, ref) < 1e-12, theorem
            assert p.omega == pytest.approx(-(0.25**2 + 0.2**2))

    def test_doubled_list_matches_even_formula(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            p = random_even_params(rng)
            spec = p.to_spec()
            full = asympt.predict_fh_toeplitz(spec)
            even = asympt.predict_fh_toeplitz_even(p)
            assert abs(full.omega - even.omega) < 1e-12
            assert rel(full.E, even.E) < 1e-10

    def test_representative_choice(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            p = random_even_params(rng)
            # swap each pair for its mirror: (a, b, t) -> (a, -b, -t), (g, t) -> (g, -t) as xi at -t
            flipped = EvenParams(p.b, tuple((a, -b, -t) for a, b, t in p.m0), p.mpm)
            for fn in (asympt.predict_th_even, asympt.predict_fh_toeplitz_even):
                assert rel(fn(flipped).E, fn(p).E) < 1e-10
            assert abs(asympt.predict_limit_ratio(flipped) - asympt.predict_limit_ratio(p)) < 1e-10 * abs(asympt.predict_limit_ratio(p))

    def test_squared_identity(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            p = random_even_params(rng)
            om_t, le_t = asympt.fh_toeplitz_even_constants(p)
            om_m, le_m = asympt.th_even_constants(p)
            assert abs(om_t - 2 * om_m) < 1e-12
            lhs = om_t * math.log(2) + le_t + asympt.log_c_plus_ratio(p)
            d = lhs - 2 * le_m
            assert abs(cmath.exp(d) - 1) < 1e-10

    def test_hypothesis_violation(self):
        with pytest.raises(HypothesisError):
            asympt.predict_th_even(jump_pair(0.6, 1.0))
        p = asympt.predict_th_even(jump_pair(0.6, 1.0), override=True)
        assert p.violations

    @given(st.floats(-0.45, 0.45, **finite), st.floats(-0.3, 0.3, **finite), st.floats(0.1, 3.0, **finite))
    def test_continuity_in_beta(self, br, bi, th):
        beta = complex(br, bi)
        assume(abs(beta) > 1e-3)  # beta = 0 puts a zero of G in the formula
        h = 1e-6
        a = asympt.predict_th_even(jump_pair(beta, th)).log_e
        b = asympt.predict_th_even(jump_pair(beta + h, th)).log_e
        assert abs(a - b) < 1e-4


class TestLimitRatio:
    def test_constant(self):
        assert asympt.predict_limit_ratio(SymbolSpec()) == pytest.approx(1)

    def test_exponential(self):
        spec = SymbolSpec(SmoothPart.from_dict({1: 1.0}))
        assert asympt.predict_limit_ratio(spec, override=True) == pytest.approx(math.e**2)
        with pytest.raises(HypothesisError):
            asympt.predict_limit_ratio(spec)

    def test_single_pair(self):
        beta, th = 0.3, 2 * math.pi / 5
        t = cmath.exp(1j * th)
        # plus factor (1 - z/t)^beta (1 - z t)^-beta evaluated at z = 1 and z = -1
        ref = (1 - 1 / t) ** beta * (1 + 1 / t) ** (-beta) * (1 - t) ** (-beta) * (1 + t) ** beta
        assert rel(asympt.predict_limit_ratio(jump_pair(beta, th)), ref) < 1e-12


class TestSingleJump:
    def test_interior_zero(self):
        p = asympt.predict_single_jump("interior", 0.0, 1.0)
        assert p.omega == 0 and p.E == pytest.approx(1)

    @pytest.mark.parametrize("beta", [0.2, -0.3, 0.15 + 0.2j, 1.3])
    def test_at_plus_minus_one(self, beta):
        p = asympt.predict_single_jump("at1", beta)
        assert p.omega == pytest.approx(-1.5 * beta**2 - beta / 2)
        assert rel(p.E, ref_at1(beta)) < 1e-12
        q = asympt.predict_single_jump("atMinus1", beta)
        assert q.omega == pytest.approx(-1.5 * beta**2 + beta / 2)
        assert rel(q.E, ref_atm1(beta)) < 1e-12

    @pytest.mark.parametrize("beta,th", [(0.2, 1.0), (-0.4, -2.5), (0.1 - 0.2j, 0.3)])
    def test_interior(self, beta, th):
        p = asympt.predict_single_jump("interior", beta, th)
        assert rel(p.E, ref_interior(beta, th)) < 1e-12

    @pytest.mark.parametrize("beta", [0.2, -0.35, 0.1 + 0.1j])
    def test_conjugate_pair(self, beta):
        p = asympt.predict_single_jump("conjugate_pair", beta)
        assert p.omega == pytest.approx(-3 * beta**2)
        assert rel(p.E, ref_conj_pair(beta)) < 1e-12

    def test_integer_beta(self):
        with pytest.raises(HypothesisError):
            asympt.predict_single_jump("at1", 1.0)

    def test_dispatch_from_spec(self):
        spec = SymbolSpec(factors=(SingularFactor.jump(0.2, math.pi),))
        assert asympt.predict(spec, "single_jump").theorem == "single_jump:atMinus1"


class TestConjecture:
    @pytest.mark.parametrize("b1,b2,th", [(0.2, 0.15, 1.1), (-0.3, 0.1j, 2.0), (0.1, -0.35, 0.4)])
    def test_formula(self, b1, b2, th):
        p = asympt.predict_conjecture(b1, b2, th)
        assert p.conjecture
        assert rel(p.E, ref_conjecture(b1, b2, th)) < 1e-12
        assert p.omega == pytest.approx(-(b1 * b1 + b1 * b2 + b2 * b2))

    @given(st.floats(-0.24, 0.24, **finite), st.floats(-0.3, 0.3, **finite), st.floats(0.05, 3.09, **finite))
    def test_degenerations(self, br, bi, th):
        b = complex(br, bi)
        assume(abs(b) > 1e-3)
        pairs = [
            (asympt.predict_conjecture(b, -b, th), asympt.predict_single_jump("even_pair", b, th)),
            (asympt.predict_conjecture(b, b, math.pi / 2), asympt.predict_single_jump("conjugate_pair", b)),
            (asympt.predict_conjecture(b, 0.0, th), asympt.predict_single_jump("interior", b, th)),
            (asympt.predict_conjecture(b, -b, th), asympt.predict_th_even(jump_pair(b, th))),
        ]
        for c, t in pairs:
            assert rel(c.E, t.E) < 1e-10
            assert abs(c.omega - t.omega) < 1e-12

    def test_range(self):
        with pytest.raises(HypothesisError):
            asympt.predict_conjecture(0.3, 0.3, 1.0)


class TestLocalization:
    def test_trivial(self):
        assert asympt.predict_localization_H(SymbolSpec()) == pytest.approx(1)

    def test_even_single_pair(self):
        assert asympt.predict_localization_H_even(SmoothPart.constant_one(), [(0.3, 1.0)]) == pytest.approx(1)

    def test_even_two_pairs(self):
        (b1, th1), (b2, th2) = (0.25, 1.0), (-0.2, 2.2)
        t1, t2 = cmath.exp(1j * th1), cmath.exp(1j * th2)
        ref = ((1 - t1 * t2) * (1 - 1 / (t1 * t2))) ** (-b1 * b2) * ((1 - t1 / t2) * (1 - t2 / t1)) ** (b1 * b2)
        H = asympt.predict_localization_H_even(SmoothPart.constant_one(), [(b1, th1), (b2, th2)])
        assert rel(H, ref) < 1e-12

    def test_general_matches_even(self):
        b = SmoothPart.from_dict({1: 0.3, -1: 0.3, 2: 0.1, -2: 0.1}, even=True)
        pairs = [(0.25, 1.0), (-0.2, 2.2), (0.1 + 0.1j, 0.4)]
        factors = []
        for beta, th in pairs:
            f = SingularFactor.jump(beta, th)
            factors += [f, f.tilde()]
        spec = SymbolSpec(b, tuple(factors))
        assert rel(asympt.predict_localization_H(spec), asympt.predict_localization_H_even(b, pairs)) < 1e-12


class TestDispatch:
    def test_every_theorem_is_known(self):
        assert set(asympt.THEOREMS.values()) <= {"toeplitz", "th", "ratio"}

    def test_unknown(self):
        with pytest.raises(ValueError):
            asympt.predict(SymbolSpec(), "riemann")

    def test_prop_sigma(self):
        p = asympt.predict(SymbolSpec(sigma=True), "prop_sigma")
        assert p.E == 1 and p.rho == -math.inf

import csv
import io
import json
import math

import numpy as np
import pytest

from fhlab import harness
from fhlab.harness import (
    InsufficientDataError,
    SweepPlan,
    SweepRow,
    estimate_order,
    identity_deviation,
    run_identity_suite,
    run_limit_ratio_sweep,
    run_sweep,
)
from fhlab.symbolkit import SingularFactor, SmoothPart, SymbolSpec, finite_coeffs


class TestEstimateOrder:
    def test_inverse_n(self):
        rows = [(N, 1.0 / N) for N in (32, 64, 128, 256, 512)]
        assert estimate_order(rows) == pytest.approx(-1.0, abs=1e-12)

    def test_power(self):
        rows = [(N, 5 * N**-0.4) for N in (32, 64, 128, 256, 512)]
        assert estimate_order(rows) == pytest.approx(-0.4, abs=1e-12)

    def test_noise_floor(self):
        with pytest.raises(InsufficientDataError):
            estimate_order([(N, 1e-15) for N in (32, 64, 128, 256, 512)])

    def test_uses_tail_only(self):
        # the head rows follow a different law and must not influence the fit
        rows = [(8, 1.0), (16, 1.0), (32, 1.0), (64, 64.0**-0.5), (128, 128.0**-0.5), (256, 256.0**-0.5)]
        assert estimate_order(rows) == pytest.approx(-0.5, abs=1e-12)

    def test_accepts_rows(self):
        rows = [SweepRow(N, complex(math.log1p(N**-0.7), 0), 0j) for N in (16, 32, 64, 128)]
        assert estimate_order(rows) == pytest.approx(-0.7, abs=1e-12)


class TestPlan:
    def test_default_target(self):
        assert SweepPlan(SymbolSpec(), "smooth_th").target == "th"
        assert SweepPlan(SymbolSpec(), "limit_ratio").target == "ratio"

    @pytest.mark.parametrize("Ns", [(), (64, 32), (0, 4), (64, 2049)])
    def test_bad_ladders(self, Ns):
        with pytest.raises(ValueError):
            SweepPlan(SymbolSpec(), "smooth_th", Ns)

    def test_ratio_order_cap(self):
        with pytest.raises(ValueError):
            SweepPlan(SymbolSpec(), "limit_ratio", (512, 1025))


class TestSweeps:
    def test_constant_one(self):
        rep = run_sweep(SweepPlan(SymbolSpec(), "smooth_th", (4, 16, 64)))
        assert all(r.absdev < 1e-14 for r in rep.rows)
        assert [r.N for r in rep.rows] == [4, 16, 64]

    def test_sigma_up_to_2048(self):
        Ns = (2, 8, 64, 256, 1024, 2048)
        rep = run_sweep(SweepPlan(SymbolSpec(sigma=True), "prop_sigma", Ns))
        assert rep.verdict == "pass"
        assert all(abs(r.logdet) < 1e-10 for r in rep.rows)

    def test_limit_ratio_constant(self):
        rep = run_limit_ratio_sweep(SymbolSpec(), (8, 16, 32))
        assert all(r.absdev < 1e-13 for r in rep.rows)

    def test_limit_ratio_smooth(self):
        b = SmoothPart.from_dict({1: 0.4, -1: 0.4, 2: 0.1, -2: 0.1}, even=True)
        rep = run_limit_ratio_sweep(SymbolSpec(b), (8, 16, 32), require_monotone=False)
        assert rep.rows[-1].absdev < 1e-10

    def test_jump_pair_small(self):
        f = SingularFactor.jump(0.3, 2 * math.pi / 5)
        spec = SymbolSpec(factors=(f, f.tilde()))
        rep = run_sweep(SweepPlan(spec, "th_even", (32, 64, 128), check_order=False))
        assert rep.rows[-1].absdev < 0.05
        assert rep.predicted_order == pytest.approx(-0.4)

    def test_conjecture_label(self):
        spec = SymbolSpec(factors=(SingularFactor.jump(0.2, 1.1), SingularFactor.jump(0.15, -1.1)))
        rep = run_sweep(SweepPlan(spec, "conjecture", (16, 32, 64)))
        assert rep.verdict == "CONJECTURE" and rep.passed

    def test_deterministic(self):
        f = SingularFactor.jump(0.25, 1.0)
        spec = SymbolSpec(SmoothPart.from_dict({1: 0.3, -1: 0.3}, even=True), (f, f.tilde()))
        plan = SweepPlan(spec, "th_even", (16, 32, 64))
        a, b = run_sweep(plan), run_sweep(plan)
        assert a.to_csv() == b.to_csv()
        assert a.summary_json() == b.summary_json()

    def test_override_is_reported(self):
        f = SingularFactor.jump(0.6, 1.0)
        spec = SymbolSpec(factors=(f, f.tilde()))
        rep = run_sweep(SweepPlan(spec, "th_even", (16, 32, 64), override=True))
        assert rep.notes and rep.notes[0] == "hypotheses overridden"


class TestReports:
    def test_csv_and_json(self, tmp_path):
        rep = run_sweep(SweepPlan(SymbolSpec(), "smooth_th", (4, 8, 16)))
        rep.write(str(tmp_path / "r.csv"), str(tmp_path / "r.json"))
        rows = list(csv.reader(io.StringIO((tmp_path / "r.csv").read_text())))
        assert rows[0] == ["N", "logdet_re", "logdet_im", "logpred_re", "logpred_im", "ratio_re", "ratio_im", "absdev"]
        assert [int(r[0]) for r in rows[1:]] == [4, 8, 16]
        doc = json.loads((tmp_path / "r.json").read_text())
        for key in ("theorem", "params", "fittedOrder", "predictedOrder", "verdict"):
            assert key in doc

    def test_phase_unwrapping(self):
        # log-dets that differ from the prediction by 2 pi i jumps are put on the prediction's branch
        logs = [complex(0, 3.1), complex(0, -3.1), complex(0, 3.0)]
        preds = [complex(0, 3.1 + 2 * math.pi * k) for k in range(3)]
        rows = harness._rows_from_logs((1, 2, 3), logs, [False] * 3, preds)
        assert all(abs(r.logdet.imag - r.logpred.imag) < 0.2 for r in rows)


class TestIdentitySuite:
    def test_hand_example(self):
        dev, _ = identity_deviation(finite_coeffs({0: 2.0, 1: 1.0, -1: 1.0}), 1)
        assert dev < 1e-14

    def test_constant(self):
        for N in (1, 5, 20):
            dev, scale = identity_deviation(finite_coeffs({0: 1.0}), N)
            assert dev < 1e-13 and scale < 1e-13

    def test_small_suite(self):
        res = run_identity_suite(trials=10, max_n=16, seed=7)
        assert res.passed and res.checks == 160

    def test_detects_odd_input(self):
        with pytest.raises(ValueError):
            identity_deviation(finite_coeffs({0: 1.0, 1: 0.5}), 3)

import numpy as np
import pytest

from trajkit.errors import InvalidArgumentError, UndefinedMetricError
from trajkit.metrics import (
    MetricReport,
    analytic_phase,
    cumulative_l2,
    hausdorff,
    rho,
    sn_csd,
    symbolic_entropy,
)


class TestHausdorff:
    def test_identical_sets(self, rng):
        pts = rng.normal(size=(15, 2))
        assert hausdorff(pts, pts) == 0.0

    def test_single_pair(self):
        assert hausdorff([[0, 0]], [[3, 4]]) == pytest.approx(5.0)

    def test_matches_brute_force(self, rng):
        for _ in range(15):
            a = rng.normal(size=(20, 3))
            b = rng.normal(size=(17, 3))
            d_ab = max(min(np.linalg.norm(p - q) for q in b) for p in a)
            d_ba = max(min(np.linalg.norm(p - q) for p in a) for q in b)
            assert hausdorff(a, b) == pytest.approx(max(d_ab, d_ba), abs=1e-12)

    def test_symmetric_and_nonnegative(self, rng):
        a = rng.normal(size=(9, 2))
        b = rng.normal(size=(6, 2))
        assert hausdorff(a, b) == hausdorff(b, a) >= 0.0

    def test_triangle_inequality(self, rng):
        for _ in range(20):
            a, b, c = (rng.normal(size=(rng.integers(2, 9), 2)) for _ in range(3))
            assert hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-12

    def test_empty_set_rejected(self):
        with pytest.raises(InvalidArgumentError):
            hausdorff(np.zeros((0, 2)), [[0, 0]])

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(InvalidArgumentError):
            hausdorff([[0, 0]], [[0, 0, 0]])


class TestCumulativeL2:
    def test_identical(self, rng):
        a = rng.normal(size=(10, 2))
        assert cumulative_l2(a, a) == 0.0

    def test_constant_offset(self):
        a = np.zeros(10)
        b = np.full(10, 0.5)
        assert cumulative_l2(a, b) == pytest.approx(5.0)

    def test_matches_per_index_oracle(self, rng):
        a = rng.normal(size=(30, 3))
        b = rng.normal(size=(30, 3))
        expected = sum(np.linalg.norm(a[i] - b[i]) for i in range(30))
        assert cumulative_l2(a, b) == pytest.approx(expected, abs=1e-12)

    def test_unequal_lengths_rejected(self):
        with pytest.raises(InvalidArgumentError):
            cumulative_l2(np.zeros(5), np.zeros(6))

    def test_metric_properties(self, rng):
        a, b, c = (rng.normal(size=(12, 2)) for _ in range(3))
        assert cumulative_l2(a, b) == pytest.approx(cumulative_l2(b, a))
        assert cumulative_l2(a, c) <= cumulative_l2(a, b) + cumulative_l2(b, c) + 1e-12


class TestAnalyticPhase:
    def test_cosine_phase_is_linear(self):
        n, cycles = 512, 8
        x = np.cos(2 * np.pi * cycles * np.arange(n) / n)
        phase, degenerate = analytic_phase(x)
        assert not degenerate
        unwrapped = np.unwrap(phase)
        interior = slice(n // 8, -n // 8)
        slope = np.polyfit(np.arange(n)[interior], unwrapped[interior], 1)[0]
        expected = 2 * np.pi * cycles / n
        assert abs(slope - expected) < 0.05 * expected
        residual = unwrapped[interior] - np.polyval(
            np.polyfit(np.arange(n)[interior], unwrapped[interior], 1), np.arange(n)[interior]
        )
        assert np.abs(residual).max() < 0.05

    def test_quarter_period_lag(self):
        n, cycles = 1024, 8
        t = np.arange(n) / n
        sin_phase, _ = analytic_phase(np.sin(2 * np.pi * cycles * t))
        cos_phase, _ = analytic_phase(np.cos(2 * np.pi * cycles * t))
        lag = np.angle(np.exp(1j * (cos_phase - sin_phase)))
        interior = slice(n // 8, -n // 8)
        assert np.abs(lag[interior] - np.pi / 2).max() < 0.05

    def test_constant_signal_flagged(self):
        phase, degenerate = analytic_phase(np.full(32, 3.7))
        assert degenerate
        assert np.all(phase == 0.0)

    def test_too_short_rejected(self):
        with pytest.raises(InvalidArgumentError):
            analytic_phase(np.zeros(4))


class TestRho:
    def test_identical_sinusoids(self):
        t = np.linspace(0, 4, 800, endpoint=False)
        s = np.sin(2 * np.pi * t)
        assert rho([s, s, s]) == pytest.approx(1.0, abs=1e-6)

    def test_constant_phase_offset_is_perfectly_consistent(self):
        t = np.linspace(0, 4, 800, endpoint=False)
        assert rho([np.sin(2 * np.pi * t), np.cos(2 * np.pi * t)]) == pytest.approx(1.0, abs=1e-3)

    def test_white_noise_has_low_consistency(self):
        values = [
            rho(np.random.default_rng(seed).normal(size=(6, 1000))) for seed in range(25)
        ]
        assert max(values) < 0.8

    def test_constant_signal_excluded_with_warning(self):
        t = np.linspace(0, 4, 800, endpoint=False)
        s = np.sin(2 * np.pi * t)
        with pytest.warns(UserWarning):
            value = rho([s, np.full(800, 2.0), s])
        assert value == pytest.approx(1.0, abs=1e-6)

    def test_all_constant_is_undefined(self):
        with pytest.warns(UserWarning):
            with pytest.raises(UndefinedMetricError):
                rho([np.zeros(64), np.ones(64)])

    def test_needs_two_signals(self):
        with pytest.raises(InvalidArgumentError):
            rho([np.zeros(64)])


class TestSymbolicEntropy:
    def test_all_constant_signals(self):
        assert symbolic_entropy(np.ones((3, 50))) == 0.0

    def test_identical_signals_at_most_one_bit(self, rng):
        s = rng.normal(size=200)
        value = symbolic_entropy([s, s, s, s])
        assert 0.0 < value <= 1.0

    def test_independent_fair_bits_approach_k_bits(self):
        signals = np.random.default_rng(0).normal(size=(3, 10000))
        assert symbolic_entropy(signals) == pytest.approx(3.0, abs=0.1)

    def test_invariant_under_positive_affine_rescaling(self, rng):
        signals = rng.normal(size=(4, 300))
        scaled = signals * 7.3 + 11.0
        assert symbolic_entropy(scaled) == pytest.approx(symbolic_entropy(signals), abs=1e-12)


class TestSnCsd:
    def test_identical_signals(self, rng):
        s = rng.normal(size=256)
        assert sn_csd([s, s, s]) == pytest.approx(1.0, abs=1e-9)

    def test_disjoint_frequencies_split_evenly(self):
        n = 256
        f1 = np.sin(2 * np.pi * 3 * np.arange(n) / n)
        f2 = np.sin(2 * np.pi * 11 * np.arange(n) / n)
        assert sn_csd([f1, f2]) == pytest.approx(0.5, abs=1e-6)

    def test_sign_flipped_pair_cancels(self, rng):
        s = rng.normal(size=128)
        assert sn_csd([s, -s]) == pytest.approx(0.0, abs=1e-9)

    def test_bounded_in_unit_interval(self, rng):
        for _ in range(20):
            signals = rng.normal(size=(rng.integers(2, 6), 64))
            value = sn_csd(signals)
            assert -1e-12 <= value <= 1.0 + 1e-12

    def test_all_zero_is_undefined(self):
        with pytest.raises(UndefinedMetricError):
            sn_csd(np.zeros((2, 64)))


class TestMetricReport:
    def test_csv_round_shape(self):
        report = MetricReport(
            rho=0.5, entropy=1.25, sncsd=0.75, l2=10.0, domain="time", method="euc", group="g1"
        )
        row = report.to_csv_row()
        assert row.startswith("g1,time,euc,")
        assert len(row.split(",")) == len(MetricReport.csv_header().split(","))

    def test_bounds_validated(self):
        with pytest.raises(InvalidArgumentError):
            MetricReport(rho=1.5, entropy=0, sncsd=0.5, l2=0, domain="time", method="euc")
        with pytest.raises(InvalidArgumentError):
            MetricReport(rho=0.5, entropy=-1, sncsd=0.5, l2=0, domain="time", method="euc")

    def test_tiny_overshoot_clamped(self):
        report = MetricReport(
            rho=1.0 + 1e-12, entropy=0.0, sncsd=1.0, l2=0.0, domain="time", method="euc"
        )
        assert report.rho == 1.0

import json
import math

import numpy as np
import pytest

from lfmo import (
    CompoundPoisson,
    ConstantSteps,
    Ecdf,
    ExperimentConfig,
    ExponentialSteps,
    LinearDrift,
    ParetoSteps,
    convergence_study_config,
    decomposition_check,
    gumbel_switch_error_bound,
    ks_critical_value,
    ks_one_sample,
    ks_two_sample,
    mo_equivalence_check,
    parse_subordinator,
    run_experiment,
    subordinator_to_dict,
)


class TestEcdf:
    def test_step_function(self):
        ecdf = Ecdf.from_samples([3.0, 1.0, 2.0])
        assert ecdf.count == 3
        assert ecdf.evaluate(0.5) == 0.0
        assert ecdf.evaluate(1.0) == pytest.approx(1 / 3)  # right-continuous
        assert ecdf.evaluate(2.5) == pytest.approx(2 / 3)
        assert ecdf.evaluate(100.0) == 1.0

    def test_nondecreasing(self, rng):
        ecdf = Ecdf.from_samples(rng.normal(size=500))
        xs = np.linspace(-4, 4, 200)
        assert np.all(np.diff(ecdf.evaluate(xs)) >= 0.0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Ecdf.from_samples([])


class TestKs:
    def test_identical_samples_zero(self):
        e = Ecdf.from_samples([1.0, 2.0, 3.0, 4.0])
        assert ks_two_sample(e, e).statistic == 0.0

    def test_disjoint_supports_one(self):
        a = Ecdf.from_samples([1.0, 2.0, 3.0])
        b = Ecdf.from_samples([10.0, 11.0, 12.0])
        assert ks_two_sample(a, b).statistic == 1.0

    def test_uniform_calibration(self, rng):
        # D stays below ~1.5 x the 0.1% Kolmogorov quantile with margin
        x = rng.random(10 ** 4)
        res = ks_one_sample(Ecdf.from_samples(x), lambda v: np.clip(v, 0, 1))
        assert res.statistic < 1.95 / math.sqrt(10 ** 4) * 1.5

    def test_critical_value(self):
        # Kolmogorov 1% point is about 1.6276
        assert ks_critical_value(10 ** 4, 0.01) == \
            pytest.approx(1.6276 / 100.0, rel=1e-3)

    def test_one_sample_against_exact_cdf(self, rng):
        x = rng.normal(size=2000)
        from scipy.special import ndtr
        res = ks_one_sample(Ecdf.from_samples(x), ndtr)
        assert res.p_value > 0.01
        assert res.kind == "one_sample_analytic"

    def test_side_and_location(self):
        # shifted sample: ECDF exceeds the CDF on the left tail
        x = np.linspace(-3.0, 1.0, 1000)
        from scipy.special import ndtr
        res = ks_one_sample(Ecdf.from_samples(x), ndtr)
        assert res.side in ("left", "right")
        assert math.isfinite(res.location)


class TestModelSerialization:
    @pytest.mark.parametrize("model", [
        LinearDrift(1.0),
        CompoundPoisson(1.0, ParetoSteps(2.5)),
        CompoundPoisson(0.5, ConstantSteps(2.0)),
        CompoundPoisson(2.0, ExponentialSteps(3.0)),
    ])
    def test_round_trip(self, model):
        assert parse_subordinator(subordinator_to_dict(model)) == model

    def test_documented_spellings(self):
        cpp = parse_subordinator(json.loads(
            '{"kind":"cpp","lambda":1.0,"step":{"kind":"pareto","alpha":2.5}}'))
        assert cpp == CompoundPoisson(1.0, ParetoSteps(2.5))
        drift = parse_subordinator(json.loads('{"kind":"drift","c":1.0}'))
        assert drift == LinearDrift(1.0)

    def test_unknown_kinds_rejected(self):
        with pytest.raises(ValueError):
            parse_subordinator({"kind": "brownian"})
        with pytest.raises(ValueError):
            parse_subordinator({"kind": "cpp", "lambda": 1.0,
                                "step": {"kind": "lognormal"}})


class TestConfig:
    def test_dict_round_trip(self):
        config = ExperimentConfig(
            subordinator=CompoundPoisson(1.0, ParetoSteps(4.0)),
            log10_n=(2.0, 4.0),
            samples_per_n=500,
            seed=7,
            m_offset=2,
            samples_csv="samples.csv",
        )
        again = ExperimentConfig.from_dict(config.to_dict())
        assert again == config

    def test_validation(self):
        base = dict(subordinator=LinearDrift(1.0), log10_n=(2.0, 4.0),
                    samples_per_n=500, seed=0)
        with pytest.raises(ValueError):
            ExperimentConfig(**{**base, "samples_per_n": 99})
        with pytest.raises(ValueError):
            ExperimentConfig(**{**base, "log10_n": (4.0, 2.0)})
        with pytest.raises(ValueError):
            ExperimentConfig(**{**base, "log10_n": ()})
        with pytest.raises(ValueError):
            ExperimentConfig(**{**base, "m_offset": -1})

    def test_canned_study(self):
        config = convergence_study_config(4.0, samples_per_n=200, seed=5)
        assert config.log10_n == (10.0, 40.0, 90.0, 160.0)
        assert config.subordinator == CompoundPoisson(1.0, ParetoSteps(4.0))


class TestRunExperiment:
    CONFIG = ExperimentConfig(
        subordinator=CompoundPoisson(1.0, ParetoSteps(2.5)),
        log10_n=(2.0, 3.0),
        samples_per_n=600,
        seed=31,
        batch_size=250,
    )

    def test_sample_count_conservation(self):
        result = run_experiment(self.CONFIG, workers=1)
        assert all(cell.ecdf.count == 600 for cell in result.cells)
        assert all(cell.raw.size == 600 for cell in result.cells)

    def test_bit_identical_reruns_and_worker_counts(self):
        a = run_experiment(self.CONFIG, workers=1)
        b = run_experiment(self.CONFIG, workers=1)
        c = run_experiment(self.CONFIG, workers=2)
        assert a.samples_csv_text() == b.samples_csv_text()
        assert a.samples_csv_text() == c.samples_csv_text()
        assert a.summary_csv_text() == c.summary_csv_text()

    def test_zero_variance_control_is_gumbel_not_normal(self):
        config = ExperimentConfig(subordinator=LinearDrift(1.0),
                                  log10_n=(5.0,), samples_per_n=5000, seed=2)
        result = run_experiment(config, workers=1)
        cell = result.cells[0]
        assert cell.limit_kind == "gumbel"
        assert cell.ks.p_value > 0.01
        # not normal: the standardized Gumbel sits ~0.066 away from the
        # normal CDF in sup distance, far beyond the 1% acceptance band
        from scipy.special import ndtr
        z = cell.normalized
        against_normal = ks_one_sample(
            Ecdf.from_samples((z - z.mean()) / z.std()), ndtr)
        assert against_normal.statistic > 2 * ks_critical_value(5000, 0.01)
        assert against_normal.p_value < 1e-6

    def test_part2_uses_two_sample_reference(self):
        config = ExperimentConfig(
            subordinator=CompoundPoisson(1.0, ParetoSteps(0.5)),
            log10_n=(2.0,), samples_per_n=400, seed=9, reference_factor=5)
        result = run_experiment(config, workers=1)
        assert result.cells[0].ks.kind == "two_sample"

    def test_csv_texts(self, tmp_path):
        config = ExperimentConfig(
            subordinator=CompoundPoisson(1.0, ParetoSteps(2.5)),
            log10_n=(2.0,), samples_per_n=150, seed=4,
            samples_csv=str(tmp_path / "samples.csv"),
            summary_csv=str(tmp_path / "summary.csv"),
            svg_path=str(tmp_path / "plot.svg"),
        )
        result = run_experiment(config, workers=1)
        samples = (tmp_path / "samples.csv").read_text()
        lines = samples.splitlines()
        assert lines[0] == "log10_n,sample_index,raw_value,normalized_value"
        assert len(lines) == 1 + 150
        summary = (tmp_path / "summary.csv").read_text()
        assert summary.splitlines()[0] == \
            "log10_n,ks_statistic,ks_side,n_samples,limit_kind,sigma,alpha"
        svg = (tmp_path / "plot.svg").read_text()
        assert svg.startswith("<svg")
        assert svg.count("<polyline") == len(result.cells) + 1


class TestGumbelSwitchBound:
    def test_million_value(self):
        bound = gumbel_switch_error_bound(10 ** 6)
        # leading-order envelope max_y y^2 e^-y / (2n) = 2 e^-2 / n; the
        # exact distance exceeds it only by the O(1/n^2) correction
        assert bound <= 2.0 * math.exp(-2.0) / 10 ** 6 * (1.0 + 1e-5)
        assert bound > 2.6e-7

    def test_hundred_value(self):
        bound = gumbel_switch_error_bound(100)
        assert 0.0 < bound < 0.003

    def test_monotone_decreasing(self):
        values = [gumbel_switch_error_bound(10 ** k) for k in range(2, 7)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_domain(self):
        with pytest.raises(ValueError):
            gumbel_switch_error_bound(1)


class TestVerificationHelpers:
    def test_decomposition_check_small(self, rng):
        model = CompoundPoisson(1.0, ParetoSteps(4.0))
        result = decomposition_check(model, 10 ** 3, 0.0, rng,
                                     path_count=4000, direct_count=20_000)
        assert result.passed
        assert 0.0 < result.kernel_estimate < 1.0

    def test_mo_equivalence_small(self, rng):
        model = CompoundPoisson(1.0, ParetoSteps(2.5))
        result = mo_equivalence_check(model, rng, count=40_000)
        assert result.passed

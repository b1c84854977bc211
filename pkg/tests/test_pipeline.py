import json

import numpy as np
import pytest

from bergband.symbols import IllConditionedError
from bergband.disc_spectrum import compute_disc_spectrum
from bergband.pipeline import RunConfig, run_prescribed_spectrum, choose_gap_index


@pytest.fixture(scope="module")
def fast_config():
    """Coarse-but-honest configuration for pipeline plumbing tests."""
    return RunConfig(
        targets=(0.3, 0.2, 0.1),
        epsilon=0.02,
        eta_points=5,
        K_modes=10,
        N_keep=8,
        n_r=24,
        n_t=48,
        n_strip=16,
    )


class TestRunConfig:
    def test_json_round_trip(self, fast_config):
        back = RunConfig.from_json(fast_config.to_json())
        assert back == fast_config

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="unknown config"):
            RunConfig.from_json('{"targets": [0.1], "bogus": 1}')

    def test_even_eta_points_rejected(self):
        with pytest.raises(ValueError):
            RunConfig(targets=(0.1,), eta_points=8)

    def test_large_h_initial_rejected(self):
        with pytest.raises(ValueError):
            RunConfig(targets=(0.1,), h_initial=0.2)


class TestChooseGapIndex:
    def test_covers_all_targets(self, k3_profile):
        spec = compute_disc_spectrum(k3_profile)
        # targets sit at modulus-order positions 2..4 (after the
        # uncontrolled leading eigenvalue), so N = 4.
        assert choose_gap_index(spec, (0.3, 0.2, 0.1)) == 4

    def test_single_target(self, k3_profile):
        spec = compute_disc_spectrum(k3_profile)
        assert choose_gap_index(spec, (0.3,)) == 2


class TestRunPrescribedSpectrum:
    def test_empty_targets_trivial_pass(self):
        result = run_prescribed_spectrum(RunConfig(targets=()))
        assert result.verdict
        assert result.spectrum_report.components == ((0.0, 0.0),)

    def test_ill_conditioned_targets_raise(self):
        with pytest.raises(IllConditionedError):
            run_prescribed_spectrum(RunConfig(targets=tuple(np.linspace(1, 0.1, 9))))

    def test_three_targets_pass(self, fast_config):
        result = run_prescribed_spectrum(fast_config)
        assert result.verdict
        assert result.chosen_h >= 1e-3
        for hit in result.spectrum_report.target_hits:
            assert hit["hit"]
            assert hit["distance"] <= 0.02

    def test_diagnostics_trace(self, fast_config):
        result = run_prescribed_spectrum(fast_config)
        diag = result.diagnostics
        assert diag["gap_index_N"] == 4
        assert diag["spectral_gap"] == pytest.approx(0.1 - 0.03885, abs=1e-3)
        assert diag["delta"] == pytest.approx(diag["spectral_gap"] / 4)
        assert len(diag["h_trace"]) >= 1
        assert diag["h_trace"][-1]["verdict"]
        # diagnostics must be JSON-serializable as emitted
        json.dumps(diag, default=float)

    def test_determinism(self, fast_config):
        r1 = run_prescribed_spectrum(fast_config)
        r2 = run_prescribed_spectrum(fast_config)
        assert np.array_equal(r1.band_structure.lambdas, r2.band_structure.lambdas)
        assert r1.spectrum_report == r2.spectrum_report

    def test_monotone_improvement_in_final_iterations(self, fast_config):
        result = run_prescribed_spectrum(fast_config)
        trace = result.diagnostics["h_trace"]
        if len(trace) >= 2:
            prev = max(trace[-2]["target_distances"])
            last = max(trace[-1]["target_distances"])
            assert last <= prev

    def test_near_degenerate_targets_fail_verdict(self):
        config = RunConfig(
            targets=(0.3, 0.2999),
            epsilon=0.0001,
            eta_points=3,
            h_min=0.06,  # only h = 0.1 runs; its error far exceeds epsilon
            n_r=16,
            n_t=32,
            n_strip=10,
        )
        result = run_prescribed_spectrum(config)
        assert not result.verdict
        assert "failure" in result.diagnostics

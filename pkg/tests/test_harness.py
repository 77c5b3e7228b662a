import json

import numpy as np
import pytest

from phonodiff.errors import ConfigError
from phonodiff.harness import (ExperimentConfig, error_metric, fit_rate,
                               incoming_data, metric_window, reflection_spec,
                               run_experiment, run_point)
from phonodiff.material import multi_bin, reflection_tanh


class TestErrorMetric:
    def test_identical_profiles(self):
        x = np.linspace(0, 1, 100)
        assert error_metric(x, x) == 0.0

    def test_constant_offset_counts_window_points(self):
        n = 256
        rho = np.zeros(n)
        T = np.full(n, 2.0)
        window = metric_window(n)
        m = window.stop - window.start
        assert error_metric(rho, T) == pytest.approx(2.0 * np.sqrt(m))

    def test_window_is_quarter_to_three_quarters_inclusive(self):
        assert metric_window(512) == slice(128, 385)
        assert metric_window(513) == slice(128, 385)

    def test_layer_values_excluded(self):
        n = 128
        rho = np.zeros(n)
        T = np.zeros(n)
        T[: n // 4] = 100.0
        T[3 * n // 4 + 1:] = 100.0
        assert error_metric(rho, T) == 0.0

    def test_grid_mismatch_rejected(self):
        with pytest.raises(ValueError):
            error_metric(np.zeros(10), np.zeros(11))


class TestFitRate:
    def test_exact_square_law(self):
        kn = np.array([0.25, 0.125, 0.0625, 0.03125])
        slope, residual = fit_rate(kn, 3.7 * kn**2)
        assert slope == pytest.approx(2.0, abs=1e-12)
        assert residual < 1e-20

    def test_exact_linear_law(self):
        kn = np.array([0.5, 0.25, 0.125])
        slope, _ = fit_rate(kn, 0.2 * kn)
        assert slope == pytest.approx(1.0, abs=1e-12)

    def test_requires_three_points(self):
        with pytest.raises(ValueError):
            fit_rate([0.5, 0.25], [1.0, 0.5])

    def test_rejects_nonpositive_errors(self):
        with pytest.raises(ValueError):
            fit_rate([0.5, 0.25, 0.125], [1.0, 0.0, 0.1])


class TestConfig:
    def test_defaults_and_roundtrip(self):
        cfg = ExperimentConfig.from_dict({"material": {"preset": "single-bin"}})
        assert cfg.mode == "robin"
        again = ExperimentConfig.from_dict(cfg.to_dict())
        assert again == cfg

    def test_validation(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"kn": []})
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"kn": [0.1, 0.2]})
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"mode": "mixed"})
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"unknown_key": 1})

    def test_selectors(self):
        material = multi_bin(length=16.0)
        v = incoming_data("v")(np.array([[0.5]]), np.array([[1.0]]))
        assert v[0, 0] == 0.5
        v2 = incoming_data("v2")(np.array([[0.5]]), np.array([[1.0]]))
        assert v2[0, 0] == 0.25
        poly = incoming_data({"poly": [1.0, 0.0, 2.0]})(
            np.array([[0.5]]), np.array([[1.0]]))
        assert poly[0, 0] == pytest.approx(1.5)
        with pytest.raises(ConfigError):
            incoming_data("v3")
        eta = reflection_spec({"preset": "tanh"}, material)
        np.testing.assert_allclose(eta, reflection_tanh(material.omega))
        with pytest.raises(ConfigError):
            reflection_spec(1.5, material)


@pytest.fixture(scope="module")
def small_config(tmp_path_factory):
    out = tmp_path_factory.mktemp("runs")
    return ExperimentConfig.from_dict({
        "example": "smoke",
        "material": {"preset": "single-bin"},
        "phi": "v",
        "eta": 0.5,
        "kn": [0.5, 0.25, 0.125],
        "mode": "robin",
        "n_poly": 8,
        "n_quad": 16,
        "reference": {"spacing_exponent": 6, "tol": 1e-9},
        "diffusion": {"nx": 64},
        "output_dir": str(out / "smoke"),
    })


class TestRunExperiment:
    def test_smoke_run_produces_outputs(self, small_config):
        record = run_experiment(small_config)
        assert len(record.points) == 3
        assert all(p.error is not None for p in record.points)
        assert record.slope is not None
        out = small_config.output_dir
        import pathlib
        base = pathlib.Path(out)
        assert (base / "summary.csv").exists()
        assert (base / "summary.json").exists()
        profiles = sorted((base / "profiles").iterdir())
        assert len(profiles) == 6  # diffusion + reference per Kn

        csv = (base / "summary.csv").read_text().strip().split("\n")
        assert csv[0] == "kn,error,mode,phi,example"
        assert len(csv) == 4
        payload = json.loads((base / "summary.json").read_text())
        assert payload["points"][0]["coefficients"]["b1"] == pytest.approx(
            1.0, abs=1e-10)

    def test_determinism_bit_identical(self, small_config, tmp_path):
        import dataclasses
        import pathlib
        a = dataclasses.replace(small_config, output_dir=str(tmp_path / "a"))
        b = dataclasses.replace(small_config, output_dir=str(tmp_path / "b"))
        run_experiment(a)
        run_experiment(b)
        for name in ("summary.csv", "summary.json"):
            fa = (pathlib.Path(a.output_dir) / name).read_bytes()
            fb = (pathlib.Path(b.output_dir) / name).read_bytes()
            ja = fa.replace(b"/a", b"/x")
            jb = fb.replace(b"/b", b"/x")
            assert ja == jb
        pa = sorted((pathlib.Path(a.output_dir) / "profiles").iterdir())
        pb = sorted((pathlib.Path(b.output_dir) / "profiles").iterdir())
        assert [p.name for p in pa] == [p.name for p in pb]
        for fa_path, fb_path in zip(pa, pb):
            assert fa_path.read_bytes() == fb_path.read_bytes()

    def test_parallel_matches_serial(self, small_config, tmp_path):
        import dataclasses
        import pathlib
        a = dataclasses.replace(small_config, output_dir=str(tmp_path / "s"),
                                workers=1)
        b = dataclasses.replace(small_config, output_dir=str(tmp_path / "p"),
                                workers=3)
        ra = run_experiment(a)
        rb = run_experiment(b)
        assert [p.error for p in ra.points] == [p.error for p in rb.points]

    def test_failed_point_recorded_not_raised(self, small_config):
        import dataclasses
        bad = dataclasses.replace(small_config, output_dir=None,
                                  reference_max_iter=3)
        record = run_experiment(bad)
        assert all(p.failure is not None for p in record.points)
        assert record.slope is None

    def test_dirichlet_mode_wins_margin(self, small_config):
        import dataclasses
        robin = run_experiment(dataclasses.replace(small_config,
                                                   output_dir=None))
        diri = run_experiment(dataclasses.replace(small_config, mode="dirichlet",
                                                  output_dir=None))
        # robin-mode error beats dirichlet-mode error at the smallest Kn
        assert robin.points[-1].error < diri.points[-1].error

import numpy as np
import pytest

from common.errors import ConfigError
from common.io import read_json
from common.rng import generator
from pipeline import NO_WAVELET, BenchmarkConfig, arms, load_config, run_synthetic_benchmark, run_trial, train_test_split
from wavelets import KernelFamily, KernelSpec

SMALL = {
    "nodes": 20,
    "samples": 30,
    "trials": 2,
    "edge_prob": 0.3,
    "k_best": 10,
    "seed": 11,
    "kernels": ["warped_translate", "cubic_spline"],
}


@pytest.fixture
def small_config(tmp_path):
    return BenchmarkConfig.from_dict(dict(SMALL, output_dir=str(tmp_path / "out")))


class TestBenchmark:

    def test_rows(self, small_config):
        '''Dos kernels → tres filas, la última sin wavelets'''
        report = run_synthetic_benchmark(small_config)
        assert [row["representation"] for row in report.rows] == ["Warped Translate", "Cubic Spline", NO_WAVELET]
        assert len(report.trials) == 2 and not report.excluded
        for row in report.rows:
            assert row["n_trials"] == 2
            assert row["rmse_mean"] ** 2 == pytest.approx(row["mse_mean"])
        assert report.row(NO_WAVELET)["delta_r2_mean"] is None
        warped = report.row("Warped Translate")
        assert warped["delta_r2_ci_low"] <= warped["delta_r2_mean"] <= warped["delta_r2_ci_high"]

    def test_delta_is_paired(self, small_config):
        report = run_synthetic_benchmark(small_config)
        deltas = [t["scores"]["Cubic Spline"]["r2"] - t["scores"][NO_WAVELET]["r2"] for t in report.trials]
        assert report.row("Cubic Spline")["delta_r2_mean"] == pytest.approx(np.mean(deltas))

    def test_deterministic_across_jobs(self, small_config, tmp_path):
        '''El reporte es idéntico byte a byte con 1 y 2 procesos'''
        serial = run_synthetic_benchmark(small_config, jobs=1).to_json(tmp_path / "serial.json")
        parallel = run_synthetic_benchmark(small_config, jobs=2).to_json(tmp_path / "parallel.json")
        assert serial.read_bytes() == parallel.read_bytes()

    def test_trials_use_distinct_seeds(self, small_config):
        first, second = run_trial(small_config, 0), run_trial(small_config, 1)
        assert first["seed"] != second["seed"]
        again = run_trial(small_config, 0)
        assert again["seed"] == first["seed"]
        assert again["scores"][NO_WAVELET]["mse"] == first["scores"][NO_WAVELET]["mse"]

    def test_failed_trials_are_excluded(self, tmp_path):
        '''Con p=0 ningún grafo es conexo: todos los ensayos quedan excluidos'''
        config = BenchmarkConfig.from_dict(dict(SMALL, edge_prob=0, output_dir=str(tmp_path)))
        report = run_synthetic_benchmark(config)
        assert not report.trials and len(report.excluded) == 2
        assert report.excluded[0]["error"].startswith("ConnectivityFailure")
        path = report.to_csv(tmp_path / "report.csv")
        lines = path.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 4
        assert lines[1].split(",")[4] == ""

    def test_fewest_samples(self, tmp_path):
        '''Con la menor cantidad de muestras aceptada los ensayos no se excluyen'''
        config = BenchmarkConfig.from_dict(dict(SMALL, samples=5, output_dir=str(tmp_path)))
        report = run_synthetic_benchmark(config)
        assert not report.excluded and len(report.trials) == 2

    def test_report_files(self, small_config, tmp_path):
        report = run_synthetic_benchmark(small_config)
        payload = read_json(report.to_json(tmp_path / "report.json"))
        assert payload["n_trials"] == 2 and payload["n_excluded"] == 0
        assert payload["config"]["nodes"] == 20
        assert "Warped Translate" in report.to_table()


class TestArms:

    def test_labels(self):
        config = BenchmarkConfig(kernels=(KernelSpec(KernelFamily.MEYER), KernelSpec(KernelFamily.MEYER, 6)))
        assert arms(config) == [("Meyer (J=4, #0)", "meyer"), ("Meyer (J=6, #1)", "meyer"), (NO_WAVELET, "none")]

    def test_default_arms(self):
        labels = [label for label, _ in arms(BenchmarkConfig())]
        assert labels == ["Warped Translate", "Cubic Spline", "Meyer", "Iterated Sine", NO_WAVELET]

    def test_split(self):
        train, test = train_test_split(10, 0.7, generator(0))
        assert train.size == 7 and test.size == 3
        np.testing.assert_array_equal(np.sort(np.concatenate([train, test])), np.arange(10))
        assert np.all(np.diff(train) > 0)

    def test_split_keeps_two_per_side(self):
        train, test = train_test_split(10, 0.99, generator(0))
        assert train.size == 8 and test.size == 2

    def test_split_keeps_three_for_training(self):
        train, test = train_test_split(5, 0.1, generator(0))
        assert train.size == 3 and test.size == 2


class TestConfig:

    def test_defaults(self):
        config = BenchmarkConfig()
        assert (config.nodes, config.samples, config.trials, config.k_best) == (500, 200, 500, 100)
        assert config.split_ratio == 0.7 and config.edge_prob == 0.1

    def test_round_trip(self, small_config):
        assert BenchmarkConfig.from_dict(small_config.to_dict()) == small_config

    def test_overrides(self, small_config):
        changed = small_config.with_overrides(trials=5, seed=None)
        assert changed.trials == 5 and changed.seed == 11

    @pytest.mark.parametrize("override, key", [
        ({"samples": 3}, "samples"),
        ({"samples": 4}, "samples"),
        ({"nodes": "20"}, "nodes"),
        ({"split_ratio": 1.0}, "split_ratio"),
        ({"edge_prob": 1.5}, "edge_prob"),
        ({"augment": 1}, "augment"),
        ({"laplacian": "random_walk"}, "laplacian"),
        ({"kernels": []}, "kernels"),
        ({"kernels": ["meyer", "haar"]}, "kernels[1].family"),
        ({"kernels": [{"family": "meyer", "n_bands": -1}]}, "kernels[0].n_bands"),
        ({"colour": "red"}, "colour"),
    ])
    def test_invalid(self, override, key):
        with pytest.raises(ConfigError) as info:
            BenchmarkConfig.from_dict(dict(SMALL, **override))
        assert info.value.key == key

    def test_load(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "missing.json")
        broken = tmp_path / "broken.json"
        broken.write_text("{nodes: 3", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config(broken)


@pytest.mark.slow
class TestFullScale:

    def test_wavelets_beat_raw_signals(self):
        '''500 nodos, 60 ensayos: el IC de ΔR² del warped queda sobre 0 y ningún banco pierde contra las señales'''
        report = run_synthetic_benchmark(BenchmarkConfig(trials=60), jobs=4)
        assert report.row("Warped Translate")["delta_r2_ci_low"] > 0
        baseline = report.row(NO_WAVELET)["r2_mean"]
        for row in report.rows:
            assert row["r2_mean"] >= baseline, row["representation"]

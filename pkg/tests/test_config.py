import pytest

from triwell.config import load_config, load_preset, preset_names, resolve
from triwell.errors import ConfigError


class TestResolve:
    def test_minimal(self):
        cfg = resolve({"scenario": "stirap"})
        assert cfg.scenario == "stirap"
        assert cfg.trap().V0 == 100.0
        assert cfg.grid().n == 1024
        traj = cfg.trajectory()
        assert traj.lm.d_max == 9.0
        assert traj.ramp == "cosine"

    def test_unknown_top_level_key_rejected(self):
        with pytest.raises(ConfigError):
            resolve({"scenario": "stirap", "danger": 1})

    def test_unknown_nested_key_rejected(self):
        with pytest.raises(ConfigError):
            resolve({"scenario": "stirap", "trajectory": {"speed": 3}})

    def test_missing_scenario_rejected(self):
        with pytest.raises(ConfigError):
            resolve({"trap": {"V0": 50.0}})

    def test_bad_enum_rejected(self):
        with pytest.raises(ConfigError):
            resolve({"scenario": "levitate"})

    def test_inconsistent_distances_rejected(self):
        with pytest.raises(ConfigError):
            resolve({"scenario": "stirap",
                     "trajectory": {"d_max": 2.0, "d_min": 3.0}})

    def test_tilt_range_bounded(self):
        with pytest.raises(ConfigError):
            resolve({"scenario": "stirap", "perturbation": {"gamma": 0.2}})

    def test_delay_fraction(self):
        cfg = resolve({"scenario": "stirap",
                       "trajectory": {"t_r": 200.0, "t_delay_frac": 0.4}})
        assert cfg.trajectory().t_delay == pytest.approx(80.0)

    def test_shake_fraction(self):
        cfg = resolve({"scenario": "stirap",
                       "trajectory": {"d_min": 2.0},
                       "perturbation": {"a_shake_frac": 0.05,
                                        "omega_shake": 0.01}})
        assert cfg.perturbation().a_shake == pytest.approx(0.1)

    def test_per_pair_overrides(self):
        cfg = resolve({"scenario": "stirap",
                       "trajectory": {"mr": {"t_i": 25.0}}})
        traj = cfg.trajectory()
        assert traj.mr.t_i == 25.0
        assert traj.lm.t_i == 0.0

    def test_overrides_roundtrip(self):
        cfg = resolve({"scenario": "stirap"})
        cfg2 = cfg.with_overrides({"trap": {"V0": 60.0}})
        assert cfg2.trap().V0 == 60.0
        assert cfg.trap().V0 == 100.0

    def test_canonical_json_stable(self):
        a = resolve({"scenario": "stirap"}).canonical_json()
        b = resolve({"scenario": "stirap"}).canonical_json()
        assert a == b


class TestPresets:
    def test_expected_presets_ship(self):
        names = preset_names()
        for required in ("fig1", "fig2a", "fig2b", "fig3b", "fig3c",
                         "fig4", "fig5"):
            assert required in names

    @pytest.mark.parametrize("name", preset_names())
    def test_every_preset_validates(self, name):
        cfg = load_preset(name)
        assert cfg.scenario

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            load_preset("fig99")

    def test_fig1_parameters(self):
        cfg = load_preset("fig1")
        traj = cfg.trajectory()
        assert traj.lm.d_max == 9.0
        assert traj.lm.d_min == 1.5
        assert traj.lm.t_r == 300.0
        assert traj.t_delay == 120.0
        assert cfg.perturbation().gamma == 0.0

    def test_fig4_parameters(self):
        cfg = load_preset("fig4")
        traj = cfg.trajectory()
        assert traj.lm.t_r == 350.0
        assert traj.lm.t_i == 100.0
        assert traj.t_delay == 180.0


class TestLoadConfig:
    def test_yaml_file_roundtrip(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("scenario: rabi\nrabi: {t_r: 32.0, t_i: 28.0}\n")
        cfg = load_config(path)
        assert cfg.rabi_schedule().t_i == 28.0

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_broken_yaml_rejected(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("scenario: [unclosed\n")
        with pytest.raises(ConfigError):
            load_config(path)

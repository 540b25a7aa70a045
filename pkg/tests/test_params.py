import json

import pytest

from chartfield.errors import InvalidParameterError
from chartfield.params import Params, load_params, read_config


class TestDefaults:
    def test_pure_defaults(self):
        p = load_params()
        assert p.tau_cp == 0.6
        assert p.sigma_d == 4.0
        assert p.delta == 0.16
        assert p.rho == 1.0
        assert p.eps == 5.0
        assert p.min_pts == 3
        assert p.descriptor == "tensor-voting"

    @pytest.mark.parametrize(
        "chart_type,expected", [("bar", 0.005), ("scatter", 0.01), ("histogram", 0.003)]
    )
    def test_tau_wd_per_chart_type(self, chart_type, expected):
        assert load_params(chart_type=chart_type).resolved_tau_wd() == expected

    def test_explicit_tau_wd_wins_over_chart_type(self):
        p = load_params(overrides={"tau_wd": 0.02}, chart_type="histogram")
        assert p.resolved_tau_wd() == 0.02


class TestConfigFile:
    def test_empty_config_gives_defaults(self, tmp_path):
        cfg = tmp_path / "empty.cfg"
        cfg.write_text("\n# only a comment\n")
        p = load_params(config_path=cfg)
        assert (p.eps, p.min_pts, p.tau_cp) == (5.0, 3, 0.6)

    def test_round_trip(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("# comment\neps = 7.5\nmin_pts = 4\ndescriptor = structure-tensor\n")
        p = load_params(config_path=cfg)
        assert (p.eps, p.min_pts, p.descriptor) == (7.5, 4, "structure-tensor")

    def test_unknown_key_named(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("bogus_knob = 3\n")
        with pytest.raises(InvalidParameterError, match="bogus_knob"):
            load_params(config_path=cfg)

    def test_bad_value_named(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("eps = banana\n")
        with pytest.raises(InvalidParameterError, match="eps"):
            read_config(cfg)

    def test_missing_equals_sign(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("eps 5\n")
        with pytest.raises(InvalidParameterError, match="key = value"):
            read_config(cfg)


class TestPrecedence:
    def test_tuner_overrides_config(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("eps = 5\n")
        tuner = tmp_path / "t.json"
        tuner.write_text(json.dumps({"eps": 7.0, "min_pts": 2}))
        p = load_params(config_path=cfg, tuner_path=tuner)
        assert p.eps == 7.0
        assert p.min_pts == 2

    @pytest.mark.parametrize(
        "use_config,use_tuner,use_cli,expected",
        [
            (False, False, False, 5.0),
            (True, False, False, 6.0),
            (True, True, False, 7.0),
            (True, True, True, 8.0),
            (False, True, True, 8.0),
            (False, False, True, 8.0),
            (False, True, False, 7.0),
        ],
    )
    def test_full_precedence_chain(self, tmp_path, use_config, use_tuner, use_cli, expected):
        cfg = tuner = overrides = None
        if use_config:
            cfg = tmp_path / "c.cfg"
            cfg.write_text("eps = 6\n")
        if use_tuner:
            tuner = tmp_path / "t.json"
            tuner.write_text(json.dumps({"eps": 7.0}))
        if use_cli:
            overrides = {"eps": 8.0}
        assert load_params(config_path=cfg, tuner_path=tuner, overrides=overrides).eps == expected

    def test_none_overrides_ignored(self):
        p = load_params(overrides={"eps": None, "min_pts": None})
        assert p.eps == 5.0

    def test_malformed_tuner_file(self, tmp_path):
        t = tmp_path / "t.json"
        t.write_text("{not json")
        with pytest.raises(InvalidParameterError, match="JSON"):
            load_params(tuner_path=t)
        t.write_text(json.dumps({"eps": -1}))
        with pytest.raises(InvalidParameterError, match="eps"):
            load_params(tuner_path=t)


class TestValidation:
    @pytest.mark.parametrize(
        "field,value",
        [
            ("tau_cp", 0.0),
            ("tau_cp", 1.0),
            ("tau_wd", 1.0),
            ("sigma_d", 0.0),
            ("delta", -0.1),
            ("rho", 0.0),
            ("eps", 0.0),
            ("min_pts", 0),
            ("chart_type", "pie"),
            ("descriptor", "hough"),
            ("orientation", "diagonal"),
            ("channel", "alpha"),
        ],
    )
    def test_out_of_range_rejected(self, field, value):
        with pytest.raises(InvalidParameterError):
            Params(**{field: value}).validate()

    def test_manifest_dict_resolves_tau_wd(self):
        d = load_params(chart_type="scatter").as_manifest_dict()
        assert d["tau_wd"] == 0.01
        assert d["chart_type"] == "scatter"

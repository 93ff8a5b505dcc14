"""Config parsing: strict keys, angle strings, defaults, observables."""
import math

import pytest

from floqsim.config import ConfigError, parse_angle, parse_config


def test_angle_strings():
    assert parse_angle("0.95pi", "t") == pytest.approx(0.95 * math.pi)
    assert parse_angle("pi", "t") == pytest.approx(math.pi)
    assert parse_angle("-0.5pi", "t") == pytest.approx(-0.5 * math.pi)
    assert parse_angle(1.25, "t") == 1.25


def test_angle_errors_name_the_field():
    with pytest.raises(ConfigError) as err:
        parse_angle("abc", "theta_x")
    assert "theta_x" in str(err.value)


def test_defaults_applied():
    cfg = parse_config(
        {"lattice": "Kagome19", "theta_x": "0.95pi", "n_steps": 50}
    )
    assert cfg.theta_x == pytest.approx(0.95 * math.pi)
    assert cfg.theta_J == pytest.approx(-math.pi / 2)
    assert cfg.p == 0.0
    assert cfg.n_traj == 200
    assert cfg.seed == 0


def test_unknown_keys_fatal():
    with pytest.raises(ConfigError) as err:
        parse_config({"lattice": "Kagome19", "theta_x": 1.0, "thetaJ": 0.5})
    assert "thetaJ" in str(err.value)


def test_missing_required():
    with pytest.raises(ConfigError):
        parse_config({"theta_x": 1.0})
    with pytest.raises(ConfigError):
        parse_config({"lattice": "Kagome19"})


def test_invalid_values():
    base = {"lattice": "Kagome19", "theta_x": 1.0}
    with pytest.raises(ConfigError):
        parse_config({**base, "p": 1.5})
    with pytest.raises(ConfigError):
        parse_config({**base, "n_steps": 0})
    with pytest.raises(ConfigError):
        parse_config({**base, "model": "XY"})
    with pytest.raises(ConfigError):
        parse_config({**base, "theta_x": "abc"})


def test_observable_validation():
    base = {"lattice": "Kagome19", "theta_x": 1.0}
    with pytest.raises(ConfigError):
        parse_config({**base, "observables": [{"kind": "bogus"}]})
    with pytest.raises(ConfigError):
        parse_config({**base, "observables": [{"kind": "otoc", "j": 1}]})
    cfg = parse_config(
        {**base, "observables": [{"kind": "otoc", "j": 1, "k": 2}]}
    )
    assert cfg.observable_objects()[0].j == 1


def test_manifest_unwrapping():
    cfg = parse_config(
        {
            "tool": "floqsim",
            "version": "x",
            "outputs": [],
            "seed": 3,
            "config": {"lattice": "Kagome19", "theta_x": 1.0, "seed": 3},
        }
    )
    assert cfg.seed == 3


def test_round_trip_through_dict():
    cfg = parse_config({"lattice": "Kagome19", "theta_x": "0.9pi",
                        "n_steps": 7, "p": 0.25})
    again = parse_config(cfg.to_dict())
    assert again == cfg

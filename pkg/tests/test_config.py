import pytest

from kgnc.config import DEFAULTS, KEYS, RunConfig, parse_config
from kgnc.errors import ConfigError
from kgnc.numeric_oracle import GridSpec, default_grid
from kgnc.spectrum_core import QuantumNumbers


def test_empty_source_gives_defaults():
    cfg = parse_config("")
    assert cfg == RunConfig()
    assert cfg.params.M == 1.0 and cfg.params.mode == "rederived" and cfg.params.theta == 1e-4
    assert cfg.n_max == 4 and cfg.routes == ("paper", "matrix") and cfg.format == "csv"
    assert cfg.ell is None and cfg.out is None


def test_every_key_has_a_default():
    assert set(DEFAULTS) == set(KEYS)


def test_full_file():
    src = """
    # comment line
    mass = 2.0
    z_alpha = 0.3   # trailing comment
    theta = 1e-5
    mode = paper
    n_max = 3
    ell = 1
    routes = oracle, paper
    grid_rmax = 250
    grid_points = 2000
    tol = 1e-12
    format = json
    out = result.json
    """
    cfg = parse_config(src)
    assert cfg.params.M == 2.0 and cfg.params.z_alpha == 0.3 and cfg.params.theta == 1e-5
    assert cfg.params.mode == "paper"
    assert cfg.n_max == 3 and cfg.ell == 1
    assert cfg.routes == ("paper", "oracle")
    assert cfg.oracle_grid(QuantumNumbers(2, 1)) == GridSpec(250.0, 2000)
    assert cfg.tol == 1e-12 and cfg.format == "json" and cfg.out == "result.json"


def test_kebab_keys_accepted():
    assert parse_config("n-max = 2\ngrid-points = 500").n_max == 2


def test_automatic_oracle_grid():
    cfg = parse_config("grid_points = 1500")
    qn = QuantumNumbers(3, 1)
    assert cfg.oracle_grid(qn) == default_grid(cfg.params, qn, 1500)


def test_flag_overrides_file():
    cfg = parse_config("n_max = 3", {"n_max": "5"})
    assert cfg.n_max == 5


def test_none_override_is_ignored():
    assert parse_config("n_max = 3", {"n_max": None}).n_max == 3


def test_last_value_wins_inside_file():
    assert parse_config("n_max = 2\nn_max = 3").n_max == 3


@pytest.mark.parametrize(
    "src,key,line",
    [
        ("theta = -1", "theta", 1),
        ("\n\nmass = 0", "mass", 3),
        ("z_alpha = abc", "z_alpha", 1),
        ("n_max = 0", "n_max", 1),
        ("n_max = 2.5", "n_max", 1),
        ("ell = 4", "ell", 1),
        ("mode = exotic", "mode", 1),
        ("routes = matrix, magic", "routes", 1),
        ("routes = ,", "routes", 1),
        ("grid_points = 10", "grid_points", 1),
        ("grid_rmax = -3", "grid_rmax", 1),
        ("tol = 0", "tol", 1),
        ("format = xml", "format", 1),
        ("theta = nan", "theta", 1),
        ("colour = red", "colour", 1),
    ],
)
def test_errors_name_key_and_line(src, key, line):
    with pytest.raises(ConfigError) as info:
        parse_config(src)
    assert info.value.key == key
    assert info.value.line == line
    assert f"'{key}'" in str(info.value) and f"line {line}" in str(info.value)


def test_missing_equals():
    with pytest.raises(ConfigError) as info:
        parse_config("mass 1")
    assert info.value.line == 1


def test_bad_override_has_no_line():
    with pytest.raises(ConfigError) as info:
        parse_config("theta = 1e-4", {"theta": "-2"})
    assert info.value.key == "theta" and info.value.line is None


def test_unknown_override():
    with pytest.raises(ConfigError):
        parse_config("", {"speed": "1"})

import math

import pytest
from hypothesis import given, settings, strategies as st

from eitswap.config import (DEFAULTS, apply_overrides, dump_config, load_config,
                            parse_config)
from eitswap.errors import ConfigError, RegimeError
from eitswap.scenario import fig2_scenario
from eitswap.numeric import SolverSpec


def test_empty_config_is_fig2():
    cfg = parse_config("")
    assert cfg.scenario == fig2_scenario()
    assert cfg.solver == SolverSpec()
    assert cfg.diagnostics == []


def test_explicit_preset_passthrough():
    assert parse_config('[scenario]\npreset = "fig2"\n').scenario == fig2_scenario()


def test_single_override():
    cfg = parse_config("[solver]\nnx = 256\n")
    assert cfg.solver.nx == 256
    assert cfg.solver == SolverSpec(nx=256)
    assert cfg.scenario == fig2_scenario()


def test_regime_violation():
    text = "[scenario]\ntau1 = 10.0\nretrieving_edge = 8.0\n"
    with pytest.raises(RegimeError) as err:
        parse_config(text)
    assert "retrieval-early" in {d.code for d in err.value.diagnostics}
    cfg = parse_config(text, check_regime=False)
    assert cfg.diagnostics


def test_syntax_error_has_line_number():
    with pytest.raises(ConfigError, match="line 3"):
        parse_config("[solver]\nnx = 256\ncfl = = 0.5\n")


def test_unknown_key_strict_and_lenient():
    with pytest.raises(ConfigError, match="solver.foo"):
        parse_config("[solver]\nfoo = 1\n")
    with pytest.warns(UserWarning, match="solver.foo"):
        cfg = parse_config("[solver]\nfoo = 1\n", strict=False)
    assert cfg.solver == SolverSpec()
    with pytest.raises(ConfigError, match="section"):
        parse_config("[plots]\nx = 1\n")


def test_missing_keys_without_preset():
    with pytest.raises(ConfigError, match="scenario.probe"):
        parse_config('[scenario]\npreset = "none"\ntau1 = 11.5\n')


def test_full_custom_scenario():
    text = """
[scenario]
preset = "none"
tau1 = 11.5
probe = [[0.5, 3.0, 1.0]]
profile = [[1.0, 200.0, 30.0]]
storing_plateau = 10.0
storing_edge = 8.0
storing_width = 1.0
retrieving_plateau = 8.0
retrieving_edge = 15.0
retrieving_width = 1.0
"""
    cfg = parse_config(text)
    assert cfg.scenario.probe.params == ((0.5, 3.0, 1.0),)
    assert cfg.scenario.retrieving.plateau == 8.0


@pytest.mark.parametrize("text,match", [
    ('[medium]\nunits = "furlongs"\n', "inconsistent units"),
    ('[medium]\nT_seconds = 1e-6\n', "inconsistent units"),
    ('[medium]\nunits = "physical"\n', "inconsistent units"),
    ('[medium]\nunits = "physical"\natom = "rb85_d1"\nT_seconds = 1e-6\nq = 2.0\n',
     "inconsistent units"),
])
def test_inconsistent_units(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(text)


def test_physical_units_give_header_scale():
    cfg = parse_config('[medium]\nunits = "physical"\natom = "rb85_d1"\nT_seconds = 1e-6\n')
    assert cfg.units.t_seconds == 1e-6
    assert cfg.units.x0_cm == pytest.approx(3.669e-7, rel=1e-3)


@pytest.mark.parametrize("text", ['[solver]\nnx = "big"\n', "[solver]\ncfl = true\n",
                                  "[solver]\ncfl = 1.5\n", '[scenario]\nprobe = [[1, 2]]\n',
                                  "[solver]\nsnapshot_times = [25.0]\n",
                                  "[solver]\nsnapshot_times = [4.0, 4.0]\n",
                                  '[scenario]\npreset = "fig3"\n'])
def test_bad_values(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_round_trip_identity():
    cfg = parse_config("[solver]\nnx = 300\nworkers = 2\n[oracle]\ncoupling = 12.0\n")
    text = dump_config(cfg)
    again = parse_config(text)
    assert again.resolved == cfg.resolved
    assert dump_config(again) == text
    assert again.scenario == cfg.scenario and again.solver == cfg.solver
    assert math.isinf(again.scenario.medium.c)


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 2048), st.floats(0.05, 1.0), st.sampled_from(["upwind", "lax-wendroff"]),
       st.floats(10.5, 11.55), st.booleans())
def test_round_trip_property(nx, cfl, scheme, tau1, binary):
    cfg = parse_config("", check_regime=False)
    cfg = apply_overrides(cfg, check_regime=False, **{"solver.nx": nx, "solver.cfl": cfl,
                                                      "solver.scheme": scheme,
                                                      "scenario.tau1": tau1,
                                                      "output.binary": binary})
    again = parse_config(dump_config(cfg), check_regime=False)
    assert again.resolved == cfg.resolved
    assert again.solver == cfg.solver and again.scenario == cfg.scenario


def test_documented_keys_all_dumped():
    resolved = parse_config("").resolved
    for section, keys in DEFAULTS.items():
        assert set(keys) <= set(resolved[section])


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.toml")

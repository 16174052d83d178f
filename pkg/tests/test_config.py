import json
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from blochfsm.config import (
    LogicThresholds,
    OutputSpec,
    SimulationConfig,
    SweepSpec,
    parse_config,
    serialize_config,
)
from blochfsm.errors import ConfigError
from blochfsm.pulses import Constant, Detuning, DynamicallyDecoupled, Gaussian, Zero

STANDARD_DOC = {
    "pulse": {"kind": "gaussian", "omega0": 1.0, "tau": 5.0, "sigma": 1.0},
    "delta": 0.0,
    "window": [0.0, 10.0],
    "initial_state": "ground",
}


def test_parse_standard_document():
    cfg = parse_config(json.dumps(STANDARD_DOC).encode())
    assert cfg == SimulationConfig()
    assert cfg.pulse == Gaussian(1.0, 5.0, 1.0)


def test_empty_document_gives_defaults():
    assert parse_config(b"{}") == SimulationConfig()


def test_negative_dt():
    with pytest.raises(ConfigError, match="dt must be positive"):
        parse_config(json.dumps({"dt": -1}))


@pytest.mark.parametrize("delta", [{"kind": "linear", "rate": 1.0}, [0.0, 1.0], "0.5*t"])
def test_time_dependent_delta_rejected(delta):
    with pytest.raises(ConfigError, match="time-dependent"):
        parse_config(json.dumps({"delta": delta}))


def test_unknown_keys_strict():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config(json.dumps({"detuning": 0.1}))
    assert parse_config(json.dumps({"detuning": 0.1}), strict=False) == SimulationConfig()


def test_problems_aggregated():
    doc = {"dt": 0, "window": [5, 1], "dimension": 1, "pulse": {"kind": "gaussian", "omega0": 1, "tau": 0, "sigma": -1}}
    with pytest.raises(ConfigError) as info:
        parse_config(json.dumps(doc))
    msgs = " | ".join(info.value.problems)
    for part in ("dt must be positive", "window is inverted", "dimension", "sigma"):
        assert part in msgs
    assert len(info.value.problems) >= 4


@pytest.mark.parametrize(
    "doc",
    [
        b"not json",
        b"[1, 2]",
        b"\xff\xfe",
        json.dumps({"pulse": {"kind": "square"}}).encode(),
        json.dumps({"pulse": {"kind": "constant"}}).encode(),
        json.dumps({"initial_state": "thermal"}).encode(),
        json.dumps({"initial_state": [0, 0]}).encode(),
        json.dumps({"initial_state": [0, 0, 2]}).encode(),
        json.dumps({"output": {"format": "hdf5"}}).encode(),
        json.dumps({"thresholds": {"population": 1.5}}).encode(),
        json.dumps({"decimation": 0}).encode(),
        json.dumps({"unchecked": "yes"}).encode(),
    ],
)
def test_invalid_documents(doc):
    with pytest.raises(ConfigError):
        parse_config(doc)


def test_unchecked_allows_any_vector():
    cfg = parse_config(json.dumps({"initial_state": [0, 0, 2], "unchecked": True}))
    assert cfg.initial_state == (0.0, 0.0, 2.0)


@pytest.mark.parametrize(
    "cfg",
    [
        SimulationConfig(),
        SimulationConfig(pulse=Constant(0.5), delta=Detuning(-0.2), initial_state="excited"),
        SimulationConfig(pulse=DynamicallyDecoupled(Gaussian(2.0, 4.0, 0.5), 0.3), dt=5e-4),
        SimulationConfig(dimension=3, pulse=Zero(), initial_state="mixed", output=OutputSpec("x.json", "json")),
        SimulationConfig(initial_state=(0.6, 0.0, 0.8), thresholds=LogicThresholds(0.55, 0.4, 0.0, "rho01")),
    ],
)
def test_roundtrip(cfg):
    assert parse_config(serialize_config(cfg)) == cfg


@settings(max_examples=100, deadline=None)
@given(
    st.floats(-5, 5), st.floats(-10, 10), st.floats(0.05, 5), st.floats(-3, 3),
    st.floats(-10, 10), st.floats(0.01, 20), st.floats(1e-5, 1e-1), st.floats(0.1, 10),
)
def test_roundtrip_property(omega0, tau, sigma, delta, t0, span, dt, scale):
    cfg = SimulationConfig(
        pulse=Gaussian(omega0, tau, sigma), delta=Detuning(delta), window=(t0, t0 + span), dt=dt, time_scale=scale
    )
    assert parse_config(serialize_config(cfg)) == cfg


def test_sweep_spec_validation(standard):
    with pytest.raises(ConfigError, match="nonempty"):
        SweepSpec(standard, "omega0", ())
    with pytest.raises(ConfigError, match="axis"):
        SweepSpec(standard, "dt", (1.0,))
    with pytest.raises(ConfigError, match="gaussian"):
        SweepSpec(replace(standard, pulse=Constant(1.0)), "sigma", (1.0,))


def test_sweep_spec_config_for(standard):
    spec = SweepSpec(standard, "omega0", (0.5, 1.0))
    assert spec.config_for(0.5).pulse == Gaussian(0.5, 5.0, 1.0)
    assert SweepSpec(standard, "delta", (0.2,)).config_for(0.2).delta == Detuning(0.2)

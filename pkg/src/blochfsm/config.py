"""Simulation configuration: dataclasses plus strict JSON (de)serialization.

Config document layout::

    {
      "dimension": 2,
      "pulse": {"kind": "gaussian", "omega0": 1.0, "tau": 5.0, "sigma": 1.0},
      "delta": 0.0,
      "window": [0.0, 10.0],
      "dt": 0.001,
      "initial_state": "ground",
      "unchecked": false,
      "decimation": 1,
      "time_scale": 1.0,
      "output": {"path": null, "format": "csv"},
      "thresholds": {"population": 0.6, "coherence": 0.5, "tolerance": 1e-9,
                     "coherence_measure": "bloch"}
    }

Every key is optional; omitted keys take the defaults above (the standard
resonant Gaussian run). Pulse kinds are ``gaussian``, ``constant``, ``zero`` and
``dd`` (``{"kind": "dd", "period": T, "inner": {...}}``).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace
from typing import Any, Union

from .errors import ConfigError, DomainError
from .pulses import Constant, Detuning, DynamicallyDecoupled, Gaussian, PulseProfile, Zero

__all__ = [
    "LogicThresholds",
    "OutputSpec",
    "SimulationConfig",
    "SweepSpec",
    "SWEEP_AXES",
    "parse_config",
    "serialize_config",
    "config_to_dict",
    "pulse_from_dict",
    "pulse_to_dict",
]

NAMED_STATES = ("ground", "excited", "mixed")
COHERENCE_MEASURES = ("bloch", "rho01")
FORMATS = ("csv", "json")
SWEEP_AXES = ("omega0", "sigma", "tau", "delta")


@dataclass(frozen=True)
class LogicThresholds:
    """Cut-offs that turn final observables into logic bits.

    ``coherence_measure`` selects the coherence observable: ``"bloch"`` is the
    transverse Bloch-vector length sqrt(S1**2 + S2**2) = 2|rho01|, ``"rho01"``
    is |rho01| itself. Comparisons are ``value >= threshold - tolerance``.
    """

    population: float = 0.6
    coherence: float = 0.5
    tolerance: float = 1e-9
    coherence_measure: str = "bloch"

    def __post_init__(self):
        probs = self.problems()
        if probs:
            raise ConfigError(probs)

    def problems(self) -> list[str]:
        out = []
        if not 0 < self.population < 1:
            out.append("thresholds.population must lie in (0, 1)")
        if not 0 < self.coherence < 1:
            out.append("thresholds.coherence must lie in (0, 1)")
        if not self.tolerance >= 0:
            out.append("thresholds.tolerance must be non-negative")
        if self.coherence_measure not in COHERENCE_MEASURES:
            out.append(f"thresholds.coherence_measure must be one of {COHERENCE_MEASURES}")
        return out


@dataclass(frozen=True)
class OutputSpec:
    path: str | None = None
    format: str = "csv"


InitialState = Union[str, tuple]


@dataclass(frozen=True)
class SimulationConfig:
    """Everything needed to integrate one trajectory.

    ``time_scale`` is the factor between the integration variable and
    physical time: the integrator steps in ``t'`` and evaluates the drive at
    ``t = time_scale * t'`` with the coefficient matrix multiplied by
    ``time_scale``. It is 1 for ordinary runs; see
    :func:`blochfsm.dynamics.to_reduced_time`.
    """

    dimension: int = 2
    pulse: PulseProfile = field(default_factory=lambda: Gaussian(1.0, 5.0, 1.0))
    delta: Detuning = field(default_factory=Detuning)
    window: tuple = (0.0, 10.0)
    dt: float = 1e-3
    initial_state: InitialState = "ground"
    unchecked: bool = False
    decimation: int = 1
    time_scale: float = 1.0
    output: OutputSpec = field(default_factory=OutputSpec)
    thresholds: LogicThresholds = field(default_factory=LogicThresholds)

    def __post_init__(self):
        object.__setattr__(self, "window", tuple(float(x) for x in self.window))
        if not isinstance(self.initial_state, str):
            object.__setattr__(self, "initial_state", tuple(float(x) for x in self.initial_state))
        probs = _field_problems(
            self.dimension, self.window, self.dt, self.decimation, self.time_scale,
            self.initial_state, self.unchecked,
        )
        if self.output.format not in FORMATS:
            probs.append(f"output.format must be one of {FORMATS}")
        if probs:
            raise ConfigError(probs)

    def with_initial_state(self, state: InitialState) -> "SimulationConfig":
        return replace(self, initial_state=state)


@dataclass(frozen=True)
class SweepSpec:
    """A one-parameter sweep over a base configuration."""

    base: SimulationConfig
    axis: str
    values: tuple
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        probs = []
        if self.axis not in SWEEP_AXES:
            probs.append(f"sweep axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if not self.values:
            probs.append("sweep values must be nonempty")
        if self.workers < 1:
            probs.append("workers must be >= 1")
        if self.axis in ("omega0", "sigma", "tau") and not isinstance(self.base.pulse, Gaussian):
            probs.append(f"sweep axis {self.axis!r} needs a gaussian base pulse")
        if probs:
            raise ConfigError(probs)

    def config_for(self, value: float) -> SimulationConfig:
        if self.axis == "delta":
            return replace(self.base, delta=Detuning(value))
        return replace(self.base, pulse=replace(self.base.pulse, **{self.axis: value}))


def _field_problems(dimension, window, dt, decimation, time_scale, initial_state, unchecked) -> list[str]:
    probs = []
    if not isinstance(dimension, int) or isinstance(dimension, bool) or dimension < 2:
        probs.append("dimension must be an integer >= 2")
    if len(window) != 2 or not all(math.isfinite(x) for x in window):
        probs.append("window must be two finite times [t0, t1]")
    elif window[0] > window[1]:
        probs.append("window is inverted (t0 > t1)")
    if not (isinstance(dt, (int, float)) and math.isfinite(dt) and dt > 0):
        probs.append("dt must be positive")
    if not isinstance(decimation, int) or decimation < 1:
        probs.append("decimation must be an integer >= 1")
    if not (math.isfinite(time_scale) and time_scale > 0):
        probs.append("time_scale must be positive")
    if isinstance(initial_state, str):
        if initial_state not in NAMED_STATES:
            probs.append(f"initial_state must be one of {NAMED_STATES} or a coherence vector")
    elif isinstance(dimension, int) and dimension >= 2:
        K = dimension * dimension - 1
        if len(initial_state) != K:
            probs.append(f"initial_state vector must have {K} components for dimension {dimension}")
        elif not all(math.isfinite(x) for x in initial_state):
            probs.append("initial_state components must be finite")
        elif not unchecked:
            from .dynamics import is_physical_vector
            from .generators import make_basis

            if not is_physical_vector(initial_state, make_basis(dimension)):
                probs.append("initial_state vector is not a valid density matrix (set unchecked to allow)")
    return probs


# -- JSON ---------------------------------------------------------------------

_PULSE_KEYS = {
    "gaussian": ("omega0", "tau", "sigma"),
    "constant": ("omega0",),
    "zero": (),
    "dd": ("period", "inner"),
}


def pulse_from_dict(d: Any, where: str = "pulse") -> PulseProfile:
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be an object")
    kind = d.get("kind")
    if kind not in _PULSE_KEYS:
        raise ConfigError(f"{where}.kind must be one of {tuple(_PULSE_KEYS)}, got {kind!r}")
    allowed = set(_PULSE_KEYS[kind]) | {"kind"}
    probs = [f"unknown key {where}.{k}" for k in d if k not in allowed]
    probs += [f"missing key {where}.{k}" for k in _PULSE_KEYS[kind] if k not in d]
    for k in _PULSE_KEYS[kind]:
        if k != "inner" and k in d and not _is_number(d[k]):
            probs.append(f"{where}.{k} must be a number")
    if probs:
        raise ConfigError(probs)
    try:
        if kind == "gaussian":
            return Gaussian(float(d["omega0"]), float(d["tau"]), float(d["sigma"]))
        if kind == "constant":
            return Constant(float(d["omega0"]))
        if kind == "zero":
            return Zero()
        return DynamicallyDecoupled(pulse_from_dict(d["inner"], f"{where}.inner"), float(d["period"]))
    except DomainError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def pulse_to_dict(p: PulseProfile) -> dict:
    if isinstance(p, Gaussian):
        return {"kind": "gaussian", "omega0": p.omega0, "tau": p.tau, "sigma": p.sigma}
    if isinstance(p, Constant):
        return {"kind": "constant", "omega0": p.omega0}
    if isinstance(p, Zero):
        return {"kind": "zero"}
    if isinstance(p, DynamicallyDecoupled):
        return {"kind": "dd", "period": p.period, "inner": pulse_to_dict(p.inner)}
    raise TypeError(f"cannot serialize pulse {p!r}")


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


_TOP_KEYS = {
    "dimension", "pulse", "delta", "window", "dt", "initial_state", "unchecked",
    "decimation", "time_scale", "output", "thresholds",
}


def parse_config(text: bytes | str, strict: bool = True) -> SimulationConfig:
    """Parse and validate a JSON config document.

    Raises :class:`ConfigError` listing every problem found. With ``strict``
    unknown keys are errors; otherwise they are ignored.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigError(f"config is not UTF-8: {exc}") from None
    try:
        doc = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    return config_from_dict(doc, strict=strict)


def config_from_dict(doc: dict, strict: bool = True) -> SimulationConfig:
    probs: list[str] = []
    if strict:
        probs += [f"unknown key {k!r}" for k in doc if k not in _TOP_KEYS]
    kw: dict[str, Any] = {}

    def take(key, conv, check, message):
        if key not in doc:
            return
        val = doc[key]
        if not check(val):
            probs.append(message)
            return
        kw[key] = conv(val)

    take("dimension", int, lambda v: isinstance(v, int) and not isinstance(v, bool), "dimension must be an integer >= 2")
    take("dt", float, _is_number, "dt must be positive")
    take("time_scale", float, _is_number, "time_scale must be positive")
    take("decimation", int, lambda v: isinstance(v, int) and not isinstance(v, bool), "decimation must be an integer >= 1")
    take("unchecked", bool, lambda v: isinstance(v, bool), "unchecked must be a boolean")
    take("window", tuple, lambda v: isinstance(v, list) and len(v) == 2 and all(map(_is_number, v)),
         "window must be two finite times [t0, t1]")
    if "delta" in doc:
        d = doc["delta"]
        if _is_number(d):
            kw["delta"] = Detuning(float(d)) if math.isfinite(d) else None
            if kw["delta"] is None:
                del kw["delta"]
                probs.append("delta must be finite")
        elif isinstance(d, (dict, list, str)):
            probs.append("time-dependent delta is not supported; delta must be a constant number")
        else:
            probs.append("delta must be a number")
    if "pulse" in doc:
        try:
            kw["pulse"] = pulse_from_dict(doc["pulse"])
        except ConfigError as exc:
            probs += exc.problems
    if "initial_state" in doc:
        s = doc["initial_state"]
        if isinstance(s, str) or (isinstance(s, list) and all(map(_is_number, s))):
            kw["initial_state"] = s if isinstance(s, str) else tuple(float(x) for x in s)
        else:
            probs.append("initial_state must be a name or a list of numbers")
    if "output" in doc:
        o = doc["output"]
        if not isinstance(o, dict):
            probs.append("output must be an object")
        else:
            probs += [f"unknown key output.{k}" for k in o if k not in ("path", "format") and strict]
            path, fmt = o.get("path"), o.get("format", "csv")
            if path is not None and not isinstance(path, str):
                probs.append("output.path must be a string or null")
            elif fmt not in FORMATS:
                probs.append(f"output.format must be one of {FORMATS}")
            else:
                kw["output"] = OutputSpec(path, fmt)
    if "thresholds" in doc:
        t = doc["thresholds"]
        names = {"population", "coherence", "tolerance", "coherence_measure"}
        if not isinstance(t, dict):
            probs.append("thresholds must be an object")
        else:
            probs += [f"unknown key thresholds.{k}" for k in t if k not in names and strict]
            try:
                kw["thresholds"] = LogicThresholds(**{k: v for k, v in t.items() if k in names})
            except (ConfigError, TypeError) as exc:
                probs += getattr(exc, "problems", [str(exc)])

    defaults = SimulationConfig.__dataclass_fields__
    merged = {f: kw.get(f, defaults[f].default) for f in ("dimension", "window", "dt", "decimation", "time_scale", "initial_state", "unchecked")}
    probs += [p for p in _field_problems(**merged) if p not in probs]
    if probs:
        raise ConfigError(probs)
    return SimulationConfig(**kw)


def config_to_dict(cfg: SimulationConfig) -> dict:
    return {
        "dimension": cfg.dimension,
        "pulse": pulse_to_dict(cfg.pulse),
        "delta": cfg.delta.delta,
        "window": list(cfg.window),
        "dt": cfg.dt,
        "initial_state": cfg.initial_state if isinstance(cfg.initial_state, str) else list(cfg.initial_state),
        "unchecked": cfg.unchecked,
        "decimation": cfg.decimation,
        "time_scale": cfg.time_scale,
        "output": {"path": cfg.output.path, "format": cfg.output.format},
        "thresholds": {f.name: getattr(cfg.thresholds, f.name) for f in fields(LogicThresholds)},
    }


def serialize_config(cfg: SimulationConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True)

"""Logic layer: threshold readout, the two-state parity checker, and linear sequential machines.

Physical encoding of the parity checker (two-level atom):

* present state s(t): the pulse line, OFF = 0 (Even), ON = 1 (Odd)
* present input x(t): the prepared atomic state, |0> = 0, |1> = 1
* next state s(t+1): 1 iff the final population of |1> clears the threshold
* present output z(t): 1 iff the final coherence clears its threshold

In this encoding the coherence bit is set exactly when the pulse fires, so
the truth-table output column z(t) equals the present state. The running
parity (Even/Odd after the bit) is the next state and is what
``run_parity`` reports as its output string.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import LogicThresholds, SimulationConfig
from .dynamics import integrate
from .errors import DomainError, EncodingMismatch, ParseError
from .pulses import Gaussian

__all__ = [
    "LogicThresholds",
    "Readout",
    "readout",
    "TransitionRecord",
    "ParityMachine",
    "PARITY_TABLE",
    "parity_step",
    "run_parity",
    "parse_bits",
    "state_table",
    "state_table_csv",
    "LsmSpec",
    "MachineKind",
    "lsm_step",
    "lsm_run",
    "classify_machine",
    "short_time_step",
]

EVEN, ODD = 0, 1

# (PS, PI) -> (NS, PO)
PARITY_TABLE = {
    (0, 0): (0, 0),
    (0, 1): (1, 0),
    (1, 0): (1, 1),
    (1, 1): (0, 1),
}


@dataclass(frozen=True)
class Readout:
    state_bit: int
    coherence_bit: int
    rho00: float
    rho11: float
    coherence: float

    def __iter__(self):
        # unpacks as (state_bit, coherence_bit)
        return iter((self.state_bit, self.coherence_bit))


def readout(S_final, th: LogicThresholds = LogicThresholds()) -> Readout:
    """Threshold a final two-level coherence vector into (state bit, coherence bit)."""
    S = np.asarray(S_final, dtype=float)
    if S.shape != (3,):
        raise DomainError(f"readout needs a two-level coherence vector, got shape {S.shape}")
    rho11 = (1.0 - S[2]) / 2.0
    rho00 = (1.0 + S[2]) / 2.0
    transverse = float(np.hypot(S[0], S[1]))
    coherence = transverse if th.coherence_measure == "bloch" else transverse / 2.0
    return Readout(
        state_bit=int(rho11 >= th.population - th.tolerance),
        coherence_bit=int(coherence >= th.coherence - th.tolerance),
        rho00=float(rho00),
        rho11=float(rho11),
        coherence=coherence,
    )


@dataclass(frozen=True)
class TransitionRecord:
    present_state: int
    present_input: int
    next_state: int
    present_output: int
    output: int
    observables: dict | None = None

    def as_dict(self) -> dict:
        d = {
            "present_state": self.present_state,
            "present_input": self.present_input,
            "next_state": self.next_state,
            "present_output": self.present_output,
            "output": self.output,
        }
        if self.observables is not None:
            d["observables"] = dict(self.observables)
        return d


def _physical_default() -> SimulationConfig:
    return SimulationConfig(pulse=Gaussian(1.0, 5.0, 1.0))


@dataclass
class ParityMachine:
    """Serial parity checker.

    In ``"logical"`` mode transitions come from XOR. In ``"physical"`` mode
    each step also runs the atom: pulse ON iff the machine is Odd, atom
    prepared in |input>. The thresholded result must agree with the truth
    table or :class:`EncodingMismatch` is raised. ``config`` supplies the
    pulse, window and thresholds for physical mode.
    """

    state: int = EVEN
    mode: str = "logical"
    config: SimulationConfig = field(default_factory=_physical_default)
    transcript: list = field(default_factory=list)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.state not in (0, 1):
            raise DomainError(f"state must be 0 or 1, got {self.state!r}")
        if self.mode not in ("logical", "physical"):
            raise DomainError(f"mode must be 'logical' or 'physical', got {self.mode!r}")
        if self.mode == "physical" and self.config.dimension != 2:
            raise DomainError("physical parity mode needs a two-level config")

    @property
    def thresholds(self) -> LogicThresholds:
        return self.config.thresholds

    def _witness(self, pulse_on: int, x: int) -> Readout:
        key = (pulse_on, x)
        if key not in self._cache:
            S0 = np.array([0.0, 0.0, 1.0 if x == 0 else -1.0])
            if pulse_on:
                S = integrate(self.config.with_initial_state(tuple(S0))).final
            else:
                S = S0
            self._cache[key] = readout(S, self.thresholds)
        return self._cache[key]

    def step(self, x: int) -> int:
        """Consume one input bit and return the running parity."""
        if x not in (0, 1):
            raise DomainError(f"input bit must be 0 or 1, got {x!r}")
        s = self.state
        ns = s ^ x
        po = s
        obs = None
        if self.mode == "physical":
            r = self._witness(s, x)
            obs = {"rho00": r.rho00, "rho11": r.rho11, "coherence": r.coherence,
                   "state_bit": r.state_bit, "coherence_bit": r.coherence_bit}
            if (r.state_bit, r.coherence_bit) != PARITY_TABLE[(s, x)]:
                raise EncodingMismatch(
                    f"physical readout (NS={r.state_bit}, PO={r.coherence_bit}) for "
                    f"(PS={s}, PI={x}) disagrees with the truth table {PARITY_TABLE[(s, x)]}",
                    obs,
                )
        self.transcript.append(TransitionRecord(s, x, ns, po, ns, obs))
        self.state = ns
        return ns


def parity_step(m: ParityMachine, input_bit: int) -> tuple[ParityMachine, int]:
    out = m.step(input_bit)
    return m, out


def parse_bits(bits: str | Iterable[int]) -> list[int]:
    if isinstance(bits, str):
        bad = sorted(set(bits) - {"0", "1"})
        if bad:
            raise ParseError(f"non-binary symbol(s) in bit string: {''.join(bad)!r}")
        return [int(c) for c in bits]
    out = []
    for b in bits:
        if b not in (0, 1):
            raise ParseError(f"non-binary symbol {b!r}")
        out.append(int(b))
    return out


def run_parity(
    bits: str | Iterable[int],
    start: int = EVEN,
    mode: str = "logical",
    config: SimulationConfig | None = None,
) -> tuple[int, str, list[TransitionRecord]]:
    """Feed a bit string through a parity machine.

    Returns the final state, the running-parity output string and the
    transcript.
    """
    seq = parse_bits(bits)
    m = ParityMachine(state=start, mode=mode, **({"config": config} if config is not None else {}))
    outs = [m.step(b) for b in seq]
    return m.state, "".join(map(str, outs)), m.transcript


def state_table(mode: str = "logical", config: SimulationConfig | None = None) -> list[TransitionRecord]:
    """One transition record per (PS, PI) pair, in truth-table row order."""
    rows = []
    for s, x in PARITY_TABLE:
        m = ParityMachine(state=s, mode=mode, **({"config": config} if config is not None else {}))
        m.step(x)
        rows.append(m.transcript[0])
    return rows


def state_table_csv(mode: str = "logical", config: SimulationConfig | None = None) -> str:
    lines = ["PS,PI,NS,PO"]
    for r in state_table(mode, config):
        lines.append(f"{r.present_state},{r.present_input},{r.next_state},{r.present_output}")
    return "\n".join(lines) + "\n"


# -- linear sequential machines ------------------------------------------------


class MachineKind(str, enum.Enum):
    MEALY = "mealy"
    MOORE = "moore"


@dataclass(frozen=True)
class LsmSpec:
    """``s(t+1) = A s + B u``, ``y = C s + D u``.

    With ``modulus`` set, both updates are reduced modulo that integer
    (e.g. 2 for machines over GF(2)).
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    modulus: int | None = None

    def __post_init__(self):
        A, B, C, D = (np.atleast_2d(np.asarray(m, dtype=float)) for m in (self.A, self.B, self.C, self.D))
        for name, val in zip("ABCD", (A, B, C, D)):
            object.__setattr__(self, name, val)
        ns, nu, ny = A.shape[0], B.shape[1], C.shape[0]
        problems = []
        if A.shape != (ns, ns):
            problems.append(f"A must be square, got {A.shape}")
        if B.shape[0] != ns:
            problems.append(f"B must have {ns} rows, got {B.shape}")
        if C.shape[1] != ns:
            problems.append(f"C must have {ns} columns, got {C.shape}")
        if D.shape != (ny, nu):
            problems.append(f"D must be {ny}x{nu}, got {D.shape}")
        if problems:
            raise DomainError("; ".join(problems))

    @property
    def n_states(self) -> int:
        return self.A.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.B.shape[1]


def lsm_step(spec: LsmSpec, s, u) -> tuple[np.ndarray, np.ndarray]:
    s = np.atleast_1d(np.asarray(s, dtype=float))
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if s.shape != (spec.n_states,):
        raise DomainError(f"state has shape {s.shape}, expected ({spec.n_states},)")
    if u.shape != (spec.n_inputs,):
        raise DomainError(f"input has shape {u.shape}, expected ({spec.n_inputs},)")
    s_next = spec.A @ s + spec.B @ u
    y = spec.C @ s + spec.D @ u
    if spec.modulus is not None:
        s_next = np.mod(s_next, spec.modulus)
        y = np.mod(y, spec.modulus)
    return s_next, y


def lsm_run(spec: LsmSpec, s0, inputs: Sequence) -> tuple[np.ndarray, np.ndarray]:
    """Iterate :func:`lsm_step`; returns the final state and the stacked outputs."""
    s = np.atleast_1d(np.asarray(s0, dtype=float))
    ys = []
    for u in inputs:
        s, y = lsm_step(spec, s, u)
        ys.append(y)
    return s, np.array(ys).reshape(len(ys), -1)


def classify_machine(spec: LsmSpec) -> MachineKind:
    """Mealy if any stored feedthrough entry is nonzero, Moore otherwise."""
    return MachineKind.MEALY if np.any(spec.D != 0) else MachineKind.MOORE


def short_time_step(S, g, dt: float) -> np.ndarray:
    """First-order Taylor step ``S + g S dt``; local error O(dt**2)."""
    if not dt > 0:
        raise DomainError(f"step must be positive, got {dt}")
    S = np.asarray(S, dtype=float)
    return S + (np.asarray(g, dtype=float) @ S) * dt

"""Coherence-vector equation of motion ``dS/dt = g(t) S`` and its RK4 integration.

The state of an N-level system is carried by the real coherence vector
``S_j = Tr(rho s_j)`` over the su(N) generators ``s_j``; the density matrix
is recovered as ``rho = I/N + 1/2 sum_j S_j s_j``. For a Hamiltonian
``H = 1/2 [c I + sum_j h_j s_j]`` the Liouville equation becomes linear in S
with the antisymmetric coefficient matrix ``g_kl = sum_j f_jlk h_j``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable

import numpy as np

from .config import SimulationConfig
from .errors import ConfigError, DensityMatrixWarning, DomainError, NumericalError
from .generators import GeneratorBasis, StructureConstants, make_basis, projector, structure_constants
from .pulses import Detuning, Gaussian, PulseProfile

__all__ = [
    "HamiltonianCoeffs",
    "Trajectory",
    "density_to_coherence",
    "coherence_to_density",
    "is_physical_vector",
    "hamiltonian_coeffs",
    "hamiltonian_from_operator",
    "adjoint_matrix",
    "two_level_g",
    "coefficient_function",
    "rk4_step",
    "integrate",
    "initial_vector",
    "to_reduced_time",
    "system_for",
]

POSITIVITY_TOL = 1e-12


@lru_cache(maxsize=None)
def system_for(N: int) -> tuple[GeneratorBasis, StructureConstants]:
    """Cached generator basis and structure constants for dimension N."""
    b = make_basis(N)
    return b, structure_constants(b)


def _check_dim(b: GeneratorBasis, n: int, what: str) -> None:
    if n != b.N:
        raise DomainError(f"{what} has dimension {n}, basis has N={b.N}")


def density_to_coherence(rho: np.ndarray, b: GeneratorBasis) -> np.ndarray:
    """``S_j = Tr(rho s_j)``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DomainError(f"density matrix must be square, got shape {rho.shape}")
    _check_dim(b, rho.shape[0], "density matrix")
    S = np.einsum("ab,jba->j", rho, b.generators)
    return S.real.copy()


def coherence_to_density(S, b: GeneratorBasis, warn: bool = True) -> np.ndarray:
    """Rebuild ``rho = I/N + 1/2 sum_j S_j s_j``.

    The trace is 1 by construction. If the result is not positive
    semidefinite a :class:`DensityMatrixWarning` is issued and the matrix is
    returned as is.
    """
    S = np.asarray(S, dtype=float)
    if S.shape[-1] != b.size:
        raise DomainError(f"coherence vector has {S.shape[-1]} components, expected {b.size} for N={b.N}")
    rho = np.eye(b.N, dtype=complex) / b.N + 0.5 * np.tensordot(S, b.generators, axes=(-1, 0))
    if warn and S.ndim == 1:
        lo = np.linalg.eigvalsh(rho)[0]
        if lo < -POSITIVITY_TOL:
            warnings.warn(
                f"coherence vector of norm {np.linalg.norm(S):.6g} gives a density matrix "
                f"with eigenvalue {lo:.3e} < 0",
                DensityMatrixWarning,
                stacklevel=2,
            )
    return rho


def is_physical_vector(S, b: GeneratorBasis) -> bool:
    rho = coherence_to_density(S, b, warn=False)
    return bool(np.linalg.eigvalsh(rho)[0] >= -POSITIVITY_TOL)


@dataclass(frozen=True)
class HamiltonianCoeffs:
    """Expansion coefficients ``h_j(t) = Tr(H(t) s_j)`` (hbar = 1).

    ``func`` maps a time array of shape (M,) to coefficients of shape (M, K).
    ``identity_offset`` is the sum of level frequencies multiplying the
    identity; it only adds a global phase and is never used in ``g``.
    """

    basis: GeneratorBasis
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    identity_offset: float = 0.0

    def __call__(self, t):
        scalar = np.ndim(t) == 0
        out = self.func(np.atleast_1d(np.asarray(t, dtype=float)))
        return out[0] if scalar else out


def _rwa_vectors(b: GeneratorBasis) -> tuple[np.ndarray, np.ndarray, float, float]:
    """Trace coefficients of the two pieces of the RWA Hamiltonian.

    H = Omega * X + Delta * Y with X = 1/2 (|0><1| + |1><0|), Y = |1><1|,
    embedded in the lowest two levels. Returns ``Tr(X s_j)``, ``Tr(Y s_j)``
    and the identity weights ``2 Tr(X)/N``, ``2 Tr(Y)/N``.
    """
    N = b.N
    X = 0.5 * (projector(0, 1, N) + projector(1, 0, N))
    Y = projector(1, 1, N)
    tx = np.einsum("ab,jba->j", X, b.generators).real
    ty = np.einsum("ab,jba->j", Y, b.generators).real
    return tx, ty, 2 * np.trace(X).real / N, 2 * np.trace(Y).real / N


def hamiltonian_coeffs(p: PulseProfile, d: Detuning, b: GeneratorBasis) -> HamiltonianCoeffs:
    """Coefficients of ``H(t) = Omega(t)/2 (|0><1| + |1><0|) + Delta |1><1|``.

    For N = 2 this yields ``h = (Omega, 0, -Delta)``. For N > 2 the same
    drive acts on levels 0 and 1 and the remaining levels are spectators.
    """
    tx, ty, _, cy = _rwa_vectors(b)
    delta = d.delta

    def func(t):
        return np.outer(p(t), tx) + delta * ty

    return HamiltonianCoeffs(b, func, identity_offset=cy * delta)


def hamiltonian_from_operator(H: Callable[[float], np.ndarray], b: GeneratorBasis, atol: float = 1e-12) -> HamiltonianCoeffs:
    """Coefficients of a caller-supplied Hamiltonian ``H(t)`` (an N x N matrix).

    Hermiticity is checked at every evaluation.
    """

    def one(t):
        Ht = np.asarray(H(float(t)), dtype=complex)
        _check_dim(b, Ht.shape[0], "Hamiltonian")
        if np.max(np.abs(Ht - Ht.conj().T)) > atol:
            raise DomainError(f"Hamiltonian is not Hermitian at t={t}")
        return np.einsum("ab,jba->j", Ht, b.generators).real

    def func(t):
        return np.array([one(x) for x in t])

    H0 = np.asarray(H(0.0), dtype=complex)
    return HamiltonianCoeffs(b, func, identity_offset=2 * np.trace(H0).real / b.N)


def adjoint_matrix(h: HamiltonianCoeffs | np.ndarray, f: StructureConstants, t=None) -> np.ndarray:
    """Coefficient matrix ``g_kl(t) = sum_j f_jlk h_j(t)``.

    ``h`` is either a :class:`HamiltonianCoeffs` evaluated at ``t`` or a raw
    coefficient vector (or batch of them).
    """
    vec = h(t) if isinstance(h, HamiltonianCoeffs) else np.asarray(h, dtype=float)
    if vec.shape[-1] != f.size:
        raise DomainError(f"coefficients have length {vec.shape[-1]}, structure constants expect {f.size}")
    return f.adjoint(vec)


def two_level_g(omega: float, delta: float) -> np.ndarray:
    """The 3x3 two-level coefficient matrix written out by hand."""
    return np.array(
        [
            [0.0, delta, 0.0],
            [-delta, 0.0, -omega],
            [0.0, omega, 0.0],
        ]
    )


def coefficient_function(cfg: SimulationConfig) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized ``g`` for a config, in the config's integration variable.

    Returns a function mapping times of shape (M,) to matrices (M, K, K).
    With ``time_scale = s`` it returns ``s * g(s * t')``.
    """
    b, f = system_for(cfg.dimension)
    # g is linear in h, so precompute the two fixed matrices once
    tx, ty, _, _ = _rwa_vectors(b)
    gx, gy = f.adjoint(tx), f.adjoint(ty)
    s = cfg.time_scale
    pulse, delta = cfg.pulse, cfg.delta.delta

    def gfun(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        om = pulse(s * t)
        return s * (om[:, None, None] * gx + delta * gy)

    return gfun


def _rk4_update(S, g0, gh, g1, dt):
    k1 = g0 @ S
    k2 = gh @ (S + 0.5 * dt * k1)
    k3 = gh @ (S + 0.5 * dt * k2)
    k4 = g1 @ (S + dt * k3)
    return S + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_step(S, gfun: Callable, t: float, dt: float) -> np.ndarray:
    """One classical RK4 step of ``dS/dt = g(t) S``.

    ``gfun(t)`` returns the coefficient matrix at a scalar time.
    """
    if not dt > 0:
        raise DomainError(f"step must be positive, got {dt}")
    S = np.asarray(S, dtype=float)
    mats = [np.asarray(gfun(x)) for x in (t, t + 0.5 * dt, t + dt)]
    mats = [m[0] if m.ndim == 3 else m for m in mats]
    with np.errstate(all="ignore"):
        out = _rk4_update(S, *mats, dt)
    if not np.all(np.isfinite(out)):
        raise NumericalError(f"non-finite state after RK4 step at t={t} (dt={dt}): {out}")
    return out


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of one integration.

    ``t`` is in the integration variable; ``physical_t`` multiplies by the
    config's time scale.
    """

    t: np.ndarray
    S: np.ndarray
    N: int
    time_scale: float = 1.0
    norm_drift: float = 0.0

    @property
    def physical_t(self) -> np.ndarray:
        return self.t * self.time_scale

    @property
    def final(self) -> np.ndarray:
        return self.S[-1]

    def rho(self) -> np.ndarray:
        """Density matrices for every sample, shape (M, N, N)."""
        b, _ = system_for(self.N)
        return coherence_to_density(self.S, b, warn=False)

    def columns(self) -> tuple[list[str], np.ndarray]:
        """Column names and values for tabular output.

        Order: t, S1..SK, populations rho_mm, then re/im of rho_mn for m < n.
        """
        rho = self.rho()
        N = self.N
        names = ["t"] + [f"S{j + 1}" for j in range(self.S.shape[1])]
        cols = [self.t[:, None], self.S]
        names += [f"rho{m}{m}" for m in range(N)]
        cols.append(rho[:, range(N), range(N)].real)
        for m in range(N):
            for n in range(m + 1, N):
                names += [f"re_rho{m}{n}", f"im_rho{m}{n}"]
                cols.append(np.stack([rho[:, m, n].real, rho[:, m, n].imag], axis=1))
        return names, np.hstack(cols)


def initial_vector(cfg: SimulationConfig) -> np.ndarray:
    """Coherence vector for the config's initial state.

    ``ground`` is |0>, ``excited`` is |1>, ``mixed`` is I/N.
    """
    b, _ = system_for(cfg.dimension)
    st = cfg.initial_state
    if isinstance(st, str):
        if st == "mixed":
            return np.zeros(b.size)
        k = {"ground": 0, "excited": 1}[st]
        return density_to_coherence(projector(k, k, b.N), b)
    return np.array(st, dtype=float)


def _grid(t0: float, t1: float, dt: float) -> tuple[int, float]:
    n = max(1, math.ceil((t1 - t0) / dt - 1e-9))
    return n, (t1 - t0) / n


def integrate(cfg: SimulationConfig, S0=None) -> Trajectory:
    """Integrate ``dS/dt = g(t) S`` over the config window with fixed-step RK4.

    The step is shrunk if needed so that the grid lands exactly on the end of
    the window. ``S0`` overrides the config's initial state and is not
    checked for physicality.
    """
    t0, t1 = cfg.window
    if not cfg.dt > 0:
        raise ConfigError("dt must be positive")
    if t0 > t1:
        raise ConfigError("window is inverted (t0 > t1)")
    S = initial_vector(cfg) if S0 is None else np.asarray(S0, dtype=float).copy()
    if t0 == t1:
        return Trajectory(np.array([t0]), S[None, :].copy(), cfg.dimension, cfg.time_scale, 0.0)

    n, dt = _grid(t0, t1, cfg.dt)
    # all stage times sit on a half-step grid; evaluate g there in one call
    half = t0 + 0.5 * dt * np.arange(2 * n + 1)
    half[-1] = t1
    G = coefficient_function(cfg)(half)

    keep = cfg.decimation
    out_idx = list(range(0, n + 1, keep))
    if out_idx[-1] != n:
        out_idx.append(n)
    samples = np.empty((len(out_idx), S.size))
    samples[0] = S
    norm0 = np.linalg.norm(S)
    drift = 0.0
    row = 1
    for i in range(n):
        S = _rk4_update(S, G[2 * i], G[2 * i + 1], G[2 * i + 2], dt)
        drift = max(drift, abs(np.linalg.norm(S) - norm0))
        if row < len(out_idx) and out_idx[row] == i + 1:
            samples[row] = S
            row += 1
    if not np.all(np.isfinite(samples)):
        raise NumericalError("integration produced non-finite values")
    times = t0 + dt * np.asarray(out_idx, dtype=float)
    times[-1] = t1
    return Trajectory(times, samples, cfg.dimension, cfg.time_scale, float(drift))


def to_reduced_time(cfg: SimulationConfig, sigma: float | None = None) -> SimulationConfig:
    """Re-express ``cfg`` in the reduced time ``t' = t / sigma``.

    The window and step are divided by ``sigma`` and the coefficient matrix is
    multiplied by it, so ``dS/dt' = sigma g(sigma t') S`` reproduces the
    original solution at corresponding times. ``sigma`` defaults to the width
    of a Gaussian pulse.
    """
    if sigma is None:
        if not isinstance(cfg.pulse, Gaussian):
            raise DomainError("sigma must be given for non-Gaussian pulses")
        sigma = cfg.pulse.sigma
    if not sigma > 0:
        raise DomainError(f"time scale sigma must be positive, got {sigma}")
    t0, t1 = cfg.window
    return replace(
        cfg,
        window=(t0 / sigma, t1 / sigma),
        dt=cfg.dt / sigma,
        time_scale=cfg.time_scale * sigma,
    )

"""Analytic propagators for commuting coefficient matrices.

When ``[g(t_a), g(t_b)] = 0`` for all times the solution of ``dS/dt = g S``
is ``S(t) = exp(G) S(t0)`` with ``G = int g dt``. The exponential is
evaluated with Sylvester's formula over the eigenvalues of G.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

import numpy as np
from scipy import integrate as _quad

from .config import SimulationConfig
from .dynamics import _rwa_vectors, coefficient_function, system_for
from .errors import DegenerateSpectrumWarning, DomainError, NonCommutingError
from .pulses import detuning_integral, pulse_area

__all__ = [
    "IntegratedCoefficient",
    "Propagator",
    "integrate_coefficient",
    "commutativity_residual",
    "eigenvalues_two_level",
    "expm_series",
    "sylvester_expm",
    "closed_form_two_level",
    "superevolution",
    "GROUND",
    "EXCITED",
]

DEGENERACY_TOL = 1e-9
COMMUTE_TOL = 1e-8
GROUND = np.array([0.0, 0.0, 1.0])
EXCITED = np.array([0.0, 0.0, -1.0])


@dataclass(frozen=True)
class IntegratedCoefficient:
    """``G = int_{t0}^{t1} g(t) dt`` plus how far g is from commuting with itself."""

    G: np.ndarray
    t0: float
    t1: float
    residual: float = 0.0


@dataclass(frozen=True)
class Propagator:
    """Superevolution matrix ``exp(G)`` and the spectrum it was built from.

    ``zeta`` is only set for the 3x3 two-level case. ``diagnostics`` names
    any fallback taken, e.g. ``"sylvester-degenerate"``.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    zeta: float | None = None
    diagnostics: tuple = field(default=())

    def __matmul__(self, S):
        return self.matrix @ np.asarray(S, dtype=float)

    def orthogonality_residual(self) -> float:
        R = self.matrix
        return float(np.max(np.abs(R.T @ R - np.eye(len(R)))))


def commutativity_residual(gfun: Callable, t0: float, t1: float, points: int = 16) -> float:
    """Largest ``|[g(t_a), g(t_b)]|`` entry over pairs of an evenly spaced grid."""
    ts = np.linspace(t0, t1, points)
    gs = np.asarray(gfun(ts))
    if gs.ndim == 2:
        gs = gs[None]
    worst = 0.0
    for a, b in combinations(range(len(gs)), 2):
        c = gs[a] @ gs[b] - gs[b] @ gs[a]
        worst = max(worst, float(np.max(np.abs(c))))
    return worst


def integrate_coefficient(gfun: Callable, t0: float, t1: float, tol: float = 1e-12) -> IntegratedCoefficient:
    """Integrate a matrix-valued function entry by entry with adaptive quadrature.

    ``gfun`` may be vectorized (times (M,) -> (M, K, K)) or scalar.
    """
    if t0 > t1:
        raise DomainError(f"inverted interval [{t0}, {t1}]")

    def single(t):
        g = np.asarray(gfun(t), dtype=float)
        return g[0] if g.ndim == 3 else g

    probe = single(t0)
    if t0 == t1:
        return IntegratedCoefficient(np.zeros_like(probe), t0, t1, 0.0)
    G, _ = _quad.quad_vec(single, t0, t1, epsabs=tol, epsrel=0.0, limit=500)
    resid = commutativity_residual(lambda ts: np.array([single(t) for t in ts]), t0, t1)
    return IntegratedCoefficient(np.asarray(G), t0, t1, resid)


def eigenvalues_two_level(delta_area: float, omega_area: float) -> tuple[complex, complex, complex]:
    """Eigenvalues ``(0, -i zeta, i zeta)`` of the 3x3 two-level G.

    Warns with :class:`DegenerateSpectrumWarning` when ``zeta`` is below the
    degeneracy threshold.
    """
    zeta = math.hypot(delta_area, omega_area)
    if zeta < DEGENERACY_TOL:
        warnings.warn(f"two-level spectrum is degenerate (zeta={zeta:.3e})", DegenerateSpectrumWarning, stacklevel=2)
    return (0j, -1j * zeta, 1j * zeta)


def expm_series(G: np.ndarray, terms: int = 40) -> np.ndarray:
    """Matrix exponential by scaled Taylor series and repeated squaring."""
    G = np.asarray(G)
    norm = np.max(np.sum(np.abs(G), axis=1)) if G.size else 0.0
    s = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    A = G / 2.0**s
    out = np.eye(len(G), dtype=G.dtype)
    term = np.eye(len(G), dtype=G.dtype)
    for k in range(1, terms + 1):
        term = term @ A / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def _spectrum(G: np.ndarray) -> np.ndarray:
    if np.allclose(G, -G.T, atol=1e-14, rtol=0):
        # iG is Hermitian for real antisymmetric G
        return -1j * np.linalg.eigvalsh(1j * G)
    return np.linalg.eigvals(G)


def sylvester_expm(G, eigenvalues=None) -> Propagator:
    """``exp(G) = sum_j e^{lambda_j} prod_{k != j} (G - lambda_k I) / (lambda_j - lambda_k)``.

    Needs pairwise distinct eigenvalues. If two lie within the degeneracy
    threshold the result is the identity when G vanishes and otherwise comes
    from :func:`expm_series`, with ``"sylvester-degenerate"`` recorded in the
    diagnostics.
    """
    if isinstance(G, IntegratedCoefficient):
        G = G.G
    G = np.asarray(G, dtype=float)
    n = len(G)
    lam = _spectrum(G) if eigenvalues is None else np.asarray(eigenvalues, dtype=complex)
    zeta = None
    if n == 3 and np.allclose(G, -G.T):
        zeta = math.sqrt(G[0, 1] ** 2 + G[0, 2] ** 2 + G[1, 2] ** 2)

    gaps = [abs(lam[i] - lam[j]) for i, j in combinations(range(n), 2)]
    if gaps and min(gaps) <= DEGENERACY_TOL:
        if np.max(np.abs(G)) <= DEGENERACY_TOL:
            return Propagator(np.eye(n), lam, zeta, ("zero-generator",))
        warnings.warn("eigenvalues are degenerate, using the series exponential", DegenerateSpectrumWarning, stacklevel=2)
        return Propagator(expm_series(G), lam, zeta, ("sylvester-degenerate",))

    I = np.eye(n, dtype=complex)
    Gc = G.astype(complex)
    total = np.zeros((n, n), dtype=complex)
    for j in range(n):
        P = I.copy()
        for k in range(n):
            if k != j:
                P = P @ (Gc - lam[k] * I) / (lam[j] - lam[k])
        total += np.exp(lam[j]) * P
    return Propagator(total.real.copy(), lam, zeta)


def closed_form_two_level(delta_area: float, omega_area: float, S0=GROUND, convention: str = "ode") -> np.ndarray:
    """Closed-form two-level coherence vector after areas ``(Delta', Omega')``.

    With ``v = (D O (1 - cos z) / z^2, (O / z) sin z, -D^2 / z^2 - (O^2 / z^2) cos z)``
    and ``z = sqrt(D^2 + O^2)``:

    - ``convention="flipped"`` returns ``v`` for a ground-state start and
      ``-v`` for an excited start. This equals ``exp(G) (0, 0, -1)`` and
      only covers those two starts.
    - ``convention="ode"`` (default) returns ``exp(G) S0``, which is ``-v``
      for a ground start and ``v`` for an excited start, and accepts any S0.

    A vanishing ``z`` returns ``S0`` unchanged.
    """
    if convention not in ("ode", "flipped"):
        raise DomainError(f"convention must be 'ode' or 'flipped', got {convention!r}")
    S0 = np.asarray(S0, dtype=float)
    zeta = math.hypot(delta_area, omega_area)
    if zeta == 0.0:
        return S0.copy()
    if np.array_equal(S0, GROUND):
        sign = 1.0
    elif np.array_equal(S0, EXCITED):
        sign = -1.0
    elif convention == "flipped":
        raise DomainError("the flipped-convention closed form covers only the ground and excited starts")
    else:
        G = delta_area * _unit_delta() + omega_area * _unit_omega()
        return sylvester_expm(G) @ S0
    D, O = delta_area, omega_area
    c, s = math.cos(zeta), math.sin(zeta)
    v = np.array([D * O * (1 - c) / zeta**2, O / zeta * s, -(D**2) / zeta**2 - O**2 / zeta**2 * c])
    if convention == "ode":
        sign = -sign
    return sign * v


def _unit_delta() -> np.ndarray:
    return np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])


def _unit_omega() -> np.ndarray:
    return np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])


def integrated_coefficient(cfg: SimulationConfig, t0: float | None = None, t1: float | None = None) -> IntegratedCoefficient:
    """``G`` for a config's built-in Hamiltonian, from closed-form pulse areas.

    ``g`` is linear in ``Omega(t)`` and ``Delta`` so ``G`` only needs the two
    areas. Bounds are in the config's integration variable.
    """
    a, b = cfg.window
    t0 = a if t0 is None else t0
    t1 = b if t1 is None else t1
    if t0 > t1:
        raise DomainError(f"inverted interval [{t0}, {t1}]")
    s = cfg.time_scale
    omega_area = pulse_area(cfg.pulse, s * t0, s * t1)
    delta_area = detuning_integral(cfg.delta, s * t0, s * t1)
    basis, f = system_for(cfg.dimension)
    tx, ty, _, _ = _rwa_vectors(basis)
    G = omega_area * f.adjoint(tx) + delta_area * f.adjoint(ty)
    resid = commutativity_residual(coefficient_function(cfg), t0, t1) if t1 > t0 else 0.0
    return IntegratedCoefficient(G, t0, t1, resid)


def superevolution(system: SimulationConfig, t0: float | None = None, t1: float | None = None, tol: float = COMMUTE_TOL) -> Propagator:
    """Propagator ``exp(G)`` from ``t0`` to ``t1`` for a commuting system.

    Raises :class:`NonCommutingError` when the sampled commutator residual
    exceeds ``tol``; integrate numerically in that case.
    """
    ic = integrated_coefficient(system, t0, t1)
    if ic.residual > tol:
        raise NonCommutingError(
            f"coefficient matrix does not commute with itself over [{ic.t0}, {ic.t1}] "
            f"(residual {ic.residual:.3e} > {tol:.1e}); use RK4 integration"
        )
    if ic.t0 == ic.t1:
        n = len(ic.G)
        return Propagator(np.eye(n), np.zeros(n, dtype=complex), 0.0 if n == 3 else None, ("zero-generator",))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateSpectrumWarning)
        return sylvester_expm(ic)

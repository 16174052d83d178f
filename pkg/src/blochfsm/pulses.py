"""Drive and detuning profiles in reduced units (hbar = 1).

A pulse is any of :class:`Gaussian`, :class:`Constant`, :class:`Zero` or
:class:`DynamicallyDecoupled`. Every pulse is callable on scalars or numpy
arrays and returns the Rabi frequency at those times.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import integrate
from scipy.special import erf

from .errors import DomainError

__all__ = [
    "Gaussian",
    "Constant",
    "Zero",
    "DynamicallyDecoupled",
    "PulseProfile",
    "Detuning",
    "amplitude",
    "pulse_area",
    "detuning_integral",
    "dd_transform",
]

QUAD_ABS_TOL = 1e-12


@dataclass(frozen=True)
class Gaussian:
    """``omega0 * exp(-(t - tau)**2 / sigma**2)``."""

    omega0: float
    tau: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"Gaussian width sigma must be positive, got {self.sigma}")
        _require_finite(omega0=self.omega0, tau=self.tau, sigma=self.sigma)

    def __call__(self, t):
        return self.omega0 * np.exp(-(((np.asarray(t, dtype=float) - self.tau) / self.sigma) ** 2))

    def area(self, t0: float, t1: float) -> float:
        a = (t0 - self.tau) / self.sigma
        b = (t1 - self.tau) / self.sigma
        return float(self.omega0 * self.sigma * math.sqrt(math.pi) / 2 * (erf(b) - erf(a)))


@dataclass(frozen=True)
class Constant:
    omega0: float

    def __post_init__(self):
        _require_finite(omega0=self.omega0)

    def __call__(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.omega0)

    def area(self, t0: float, t1: float) -> float:
        return float(self.omega0 * (t1 - t0))


@dataclass(frozen=True)
class Zero:
    def __call__(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def area(self, t0: float, t1: float) -> float:
        return 0.0


@dataclass(frozen=True)
class DynamicallyDecoupled:
    """``(-1)**n * inner(t)`` with ``n = floor(t / period)``."""

    inner: "PulseProfile"
    period: float

    def __post_init__(self):
        if not self.period > 0:
            raise DomainError(f"decoupling period must be positive, got {self.period}")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        n = np.floor(t / self.period)
        return np.where(n % 2 == 0, 1.0, -1.0) * self.inner(t)

    def area(self, t0: float, t1: float) -> float:
        # integrate the inner pulse segment by segment; each segment has a fixed sign
        T = self.period
        n0, n1 = math.floor(t0 / T), math.floor(t1 / T)
        total = 0.0
        for n in range(n0, n1 + 1):
            a, b = max(t0, n * T), min(t1, (n + 1) * T)
            if b > a:
                total += (-1.0 if n % 2 else 1.0) * _inner_area(self.inner, a, b)
        return total


PulseProfile = Union[Gaussian, Constant, Zero, DynamicallyDecoupled]


@dataclass(frozen=True)
class Detuning:
    """Constant detuning ``delta = omega_laser - omega_transition``."""

    delta: float = 0.0

    def __post_init__(self):
        _require_finite(delta=self.delta)

    def __call__(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.delta)


def _require_finite(**values):
    bad = [k for k, v in values.items() if not math.isfinite(v)]
    if bad:
        raise DomainError(f"non-finite pulse parameter(s): {', '.join(bad)}")


def _inner_area(p, t0, t1):
    area = getattr(p, "area", None)
    if area is not None:
        return area(t0, t1)
    val, _ = integrate.quad(lambda t: float(p(t)), t0, t1, epsabs=QUAD_ABS_TOL, epsrel=0, limit=200)
    return val


def amplitude(p: PulseProfile, t):
    """Rabi frequency of ``p`` at time(s) ``t``."""
    out = p(t)
    return float(out) if np.ndim(out) == 0 else out


def pulse_area(p: PulseProfile, t0: float, t1: float) -> float:
    """Integral of the Rabi frequency over ``[t0, t1]``.

    Gaussian, constant and zero pulses use closed forms. A decoupled pulse is
    summed segment by segment over its sign intervals. Any other callable is
    integrated by adaptive quadrature.
    """
    if t0 > t1:
        raise DomainError(f"inverted interval [{t0}, {t1}]")
    return _inner_area(p, t0, t1)


def detuning_integral(d: Detuning, t0: float, t1: float) -> float:
    if t0 > t1:
        raise DomainError(f"inverted interval [{t0}, {t1}]")
    return float(d.delta * (t1 - t0))


def dd_transform(p: PulseProfile, period: float) -> DynamicallyDecoupled:
    """Wrap ``p`` so that its sign flips every ``period``."""
    return DynamicallyDecoupled(inner=p, period=period)

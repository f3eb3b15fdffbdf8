"""Synthetic multivariate signals: Hénon map orbits and Lorenz trajectories."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from graphpe.config import get_settings
from graphpe.metrics import orbit_divergence_total
from graphpe.services.errors import DivergenceError, InvalidArgumentError
from graphpe.services.signals import MultivariateSignal

logger = logging.getLogger(__name__)

VectorField = Callable[[np.ndarray], np.ndarray]


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise InvalidArgumentError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True, slots=True)
class HenonParams:
    a: float = 1.4
    b: float = 0.3
    x0: float = 0.5
    y0: float = 0.1
    n: int = 100
    transient: int = 0

    def __post_init__(self) -> None:
        _require_finite(a=self.a, b=self.b, x0=self.x0, y0=self.y0)
        if int(self.n) != self.n or self.n < 1:
            raise InvalidArgumentError(f"n must be a positive integer, got {self.n!r}")
        if int(self.transient) != self.transient or self.transient < 0:
            raise InvalidArgumentError(
                f"transient must be a nonnegative integer, got {self.transient!r}"
            )


@dataclass(frozen=True, slots=True)
class LorenzParams:
    sigma: float = 10.0
    rho: float = 28.0
    beta: float = 8.0 / 3.0
    init: tuple[float, float, float] = (1.0, 1.0, 1.0)
    dt: float = 0.01
    steps: int = 15000
    transient: int = 5000

    def __post_init__(self) -> None:
        _require_finite(sigma=self.sigma, rho=self.rho, beta=self.beta, dt=self.dt)
        if len(self.init) != 3:
            raise InvalidArgumentError(f"init must have 3 coordinates, got {len(self.init)}")
        _require_finite(**{f"init[{i}]": float(v) for i, v in enumerate(self.init)})
        if self.dt <= 0:
            raise InvalidArgumentError(f"dt must be positive, got {self.dt}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise InvalidArgumentError(f"steps must be a positive integer, got {self.steps!r}")
        if int(self.transient) != self.transient or self.transient < 0:
            raise InvalidArgumentError(
                f"transient must be a nonnegative integer, got {self.transient!r}"
            )
        if self.steps <= self.transient:
            raise InvalidArgumentError(
                f"steps ({self.steps}) must exceed transient ({self.transient})"
            )


# --------------------------------------------------------------------------- #
# Hénon map
# --------------------------------------------------------------------------- #
def henon(params: HenonParams, *, bound: float | None = None) -> MultivariateSignal:
    """Orbit ``x_{t+1} = 1 - a x_t^2 + y_t``, ``y_{t+1} = b x_t`` as channels (x, y).

    ``transient`` iterates are discarded first; then ``n`` samples are kept,
    the first being the state after the transient (``(x0, y0)`` by default).
    """
    if bound is None:
        bound = get_settings().divergence_bound
    a, b = params.a, params.b
    x, y = params.x0, params.y0
    total = params.transient + params.n
    xs = np.empty(params.n)
    ys = np.empty(params.n)
    for t in range(total):
        if not (math.isfinite(x) and math.isfinite(y)) or abs(x) > bound or abs(y) > bound:
            orbit_divergence_total.inc()
            raise DivergenceError(
                f"Hénon orbit diverged at index {t + 1} (a={a}, b={b})", index=t + 1
            )
        if t >= params.transient:
            xs[t - params.transient] = x
            ys[t - params.transient] = y
        x, y = 1.0 - a * x * x + y, b * x
    return MultivariateSignal(data=np.vstack([xs, ys]), channel_names=("x", "y"))


def henon_fixed_point(a: float, b: float) -> tuple[float, float] | None:
    """Fixed point on the ``x > 0`` branch of ``a x^2 + (1 - b) x - 1 = 0``."""
    _require_finite(a=a, b=b)
    if a == 0:
        if b == 1:
            return None
        x = 1.0 / (1.0 - b)
        return x, b * x
    disc = (1.0 - b) ** 2 + 4.0 * a
    if disc < 0:
        return None
    x = (-(1.0 - b) + math.sqrt(disc)) / (2.0 * a)
    return x, b * x


def henon_orbit_points(params: HenonParams, keep: int) -> np.ndarray:
    """Last ``keep`` x values of the orbit; empty when the orbit diverges."""
    if keep < 1 or keep > params.n:
        raise InvalidArgumentError(f"keep must lie in 1..{params.n}, got {keep}")
    try:
        signal = henon(params)
    except DivergenceError as exc:
        logger.warning("dynamics.henon_orbit diverged a=%s index=%s", params.a, exc.index)
        return np.empty(0)
    return signal.channel(0)[-keep:].copy()


# --------------------------------------------------------------------------- #
# Runge-Kutta
# --------------------------------------------------------------------------- #
def rk4_step(f: VectorField, state: np.ndarray, dt: float) -> np.ndarray:
    k1 = dt * f(state)
    k2 = dt * f(state + k1 / 2)
    k3 = dt * f(state + k2 / 2)
    k4 = dt * f(state + k3)
    return state + (k1 + 2 * k2 + 2 * k3 + k4) / 6


def integrate_rk4(
    f: VectorField,
    init: np.ndarray,
    dt: float,
    steps: int,
) -> np.ndarray:
    """Fixed-step RK4 trajectory; row 0 is ``init``, row ``k`` the state at ``k * dt``."""
    if dt <= 0:
        raise InvalidArgumentError(f"dt must be positive, got {dt}")
    state = np.asarray(init, dtype=np.float64)
    out = np.empty((steps, state.shape[0]))
    out[0] = state
    for k in range(1, steps):
        state = rk4_step(f, state, dt)
        if not np.all(np.isfinite(state)):
            orbit_divergence_total.inc()
            raise DivergenceError(f"integration produced a non-finite state at step {k}", index=k)
        out[k] = state
    return out


def lorenz_field(sigma: float, rho: float, beta: float) -> VectorField:
    def f(s: np.ndarray) -> np.ndarray:
        x, y, z = s
        return np.array([sigma * (y - x), x * (rho - z) - y, x * y - beta * z])

    return f


def lorenz(params: LorenzParams) -> MultivariateSignal:
    """Lorenz trajectory sampled every step, first ``transient`` samples dropped."""
    trajectory = integrate_rk4(
        lorenz_field(params.sigma, params.rho, params.beta),
        np.asarray(params.init, dtype=np.float64),
        params.dt,
        params.steps,
    )
    kept = trajectory[params.transient:]
    logger.debug(
        "dynamics.lorenz rho=%s samples=%s final=%s",
        params.rho,
        kept.shape[0],
        kept[-1].tolist(),
    )
    return MultivariateSignal(data=kept.T, channel_names=("x", "y", "z"))


__all__ = [
    "HenonParams",
    "LorenzParams",
    "henon",
    "henon_fixed_point",
    "henon_orbit_points",
    "rk4_step",
    "integrate_rk4",
    "lorenz_field",
    "lorenz",
]

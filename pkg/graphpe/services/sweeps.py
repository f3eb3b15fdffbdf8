"""Parameter sweeps behind the Hénon and Lorenz experiments.

Grid points are independent; with ``workers > 1`` they are evaluated in a
thread pool through ``asyncio.to_thread`` and gathered back in grid order, so
the emitted tables never depend on scheduling.
"""

from __future__ import annotations

import asyncio
import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Sequence, TypeVar

import numpy as np
import pandas as pd

from graphpe.metrics import sweep_points_total
from graphpe.services.dynamics import (
    HenonParams,
    LorenzParams,
    henon,
    henon_orbit_points,
    lorenz,
)
from graphpe.services.entropy import (
    EntropyParams,
    mmspe,
    mpe_graph,
    permutation_entropy,
    product_graph,
)
from graphpe.services.errors import DivergenceError, InvalidArgumentError
from graphpe.services.graphs import Graph, cartesian_product, complete_graph, directed_path
from graphpe.services.signals import MultivariateSignal

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

HENON_COLUMNS = ["a", "mpeg", "pe_x", "pe_y", "mmspe", "diverged"]
CSV_FLOAT_FORMAT = "%.6f"


@dataclass(frozen=True, slots=True)
class HenonPoint:
    a: float
    mpeg: float = math.nan
    pe_x: float = math.nan
    pe_y: float = math.nan
    mmspe: float = math.nan
    diverged: bool = False


def parameter_grid(start: float, stop: float, step: float) -> np.ndarray:
    """``start, start + step, ...`` up to ``stop`` inclusive (within 1e-9 steps)."""
    if not step > 0:
        raise InvalidArgumentError(f"step must be positive, got {step}")
    if start > stop:
        raise InvalidArgumentError(f"grid start {start} exceeds stop {stop}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    # rounding removes accumulated drift such as 1.0000000000000002
    return np.round(start + step * np.arange(count), 12)


async def _gather_ordered(fn: Callable[[T], R], items: Sequence[T], workers: int) -> list[R]:
    semaphore = asyncio.Semaphore(workers)

    async def _one(item: T) -> R:
        async with semaphore:
            return await asyncio.to_thread(fn, item)

    return list(await asyncio.gather(*(_one(item) for item in items)))


def run_grid(fn: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    """Map ``fn`` over ``items`` preserving order, optionally in parallel."""
    if workers < 1:
        raise InvalidArgumentError(f"workers must be >= 1, got {workers}")
    if workers == 1 or len(items) < 2:
        return [fn(item) for item in items]
    return asyncio.run(_gather_ordered(fn, items, workers))


# --------------------------------------------------------------------------- #
# Hénon
# --------------------------------------------------------------------------- #
def henon_point(
    base: HenonParams,
    a: float,
    params: EntropyParams,
    product: Graph | None = None,
) -> HenonPoint:
    """All four metrics for the orbit at one value of ``a``."""
    sweep_points_total.labels(experiment="henon").inc()
    try:
        signal = henon(replace(base, a=float(a)))
    except DivergenceError as exc:
        logger.warning("sweep.henon diverged a=%.6f index=%s", a, exc.index)
        return HenonPoint(a=float(a), diverged=True)
    return HenonPoint(
        a=float(a),
        mpeg=mpe_graph(signal, complete_graph(signal.channels), params, product=product),
        pe_x=permutation_entropy(signal.channel(0), params),
        pe_y=permutation_entropy(signal.channel(1), params),
        mmspe=mmspe(signal, params),
    )


def henon_sweep(
    a_min: float = 1.0,
    a_max: float = 1.4,
    step: float = 0.0001,
    params: EntropyParams | None = None,
    base: HenonParams | None = None,
    workers: int = 1,
) -> pd.DataFrame:
    """One row per grid value of ``a``: a, mpeg, pe_x, pe_y, mmspe, diverged."""
    params = params or EntropyParams(m=3, L=1)
    base = base or HenonParams()
    grid = parameter_grid(a_min, a_max, step)
    logger.info(
        "sweep.henon start points=%s m=%s L=%s workers=%s",
        grid.size,
        params.m,
        params.L,
        workers,
    )
    # every orbit has the same shape, so one product graph serves the whole grid
    product = cartesian_product(directed_path(base.n), complete_graph(2))
    points = run_grid(lambda a: henon_point(base, a, params, product), list(grid), workers)
    frame = pd.DataFrame(
        [
            {
                "a": pt.a,
                "mpeg": pt.mpeg,
                "pe_x": pt.pe_x,
                "pe_y": pt.pe_y,
                "mmspe": pt.mmspe,
                "diverged": int(pt.diverged),
            }
            for pt in points
        ],
        columns=HENON_COLUMNS,
    )
    logger.info(
        "sweep.henon done points=%s diverged=%s", len(frame), int(frame["diverged"].sum())
    )
    return frame


def henon_orbit_diagram(
    a_min: float = 1.0,
    a_max: float = 1.4,
    step: float = 0.0001,
    keep: int = 50,
    base: HenonParams | None = None,
) -> pd.DataFrame:
    """Point cloud ``(a, x)`` of the last ``keep`` iterates for each ``a``."""
    base = base or HenonParams()
    rows: list[tuple[float, float]] = []
    for a in parameter_grid(a_min, a_max, step):
        sweep_points_total.labels(experiment="henon_orbit").inc()
        for x in henon_orbit_points(replace(base, a=float(a)), keep):
            rows.append((float(a), float(x)))
    return pd.DataFrame(rows, columns=["a", "x"])


# --------------------------------------------------------------------------- #
# Lorenz
# --------------------------------------------------------------------------- #
def frozen_steps(signal: MultivariateSignal) -> int:
    """Sample-to-sample steps where every channel repeats exactly."""
    steps = np.diff(signal.data, axis=1)
    return int(np.count_nonzero(np.all(steps == 0, axis=0)))


def lorenz_row(
    base: LorenzParams, rho: float, ms: Sequence[int], L: int
) -> tuple[list[float], int]:
    """MPE_G for each ``m`` plus the frozen-step count of the kept window."""
    sweep_points_total.labels(experiment="lorenz").inc()
    signal = lorenz(replace(base, rho=float(rho)))
    frozen = frozen_steps(signal)
    if frozen:
        # patterns over a stalled trajectory come from round-off, not dynamics
        logger.warning(
            "sweep.lorenz frozen rho=%s frozen_steps=%s of %s",
            rho,
            frozen,
            signal.length - 1,
        )
    interaction = complete_graph(signal.channels)
    product = product_graph(signal, interaction)
    values = [
        mpe_graph(signal, interaction, EntropyParams(m=m, L=L), product=product) for m in ms
    ]
    return values, frozen


def lorenz_table(
    rhos: Sequence[float] = (0.8, 0.9, 1.2, 1.3),
    ms: Sequence[int] = (3, 4, 5, 6, 7),
    L: int = 1,
    base: LorenzParams | None = None,
    workers: int = 1,
) -> pd.DataFrame:
    """MPE_G with the complete interaction graph; rows rho, columns m.

    The trailing ``frozen_steps`` column counts kept samples identical to
    their predecessor; a nonzero count means the orbit has stalled on an
    equilibrium to float precision.
    """
    if not rhos or not ms:
        raise InvalidArgumentError("lorenz table needs at least one rho and one m")
    for m in ms:
        EntropyParams(m=m, L=L)
    base = base or LorenzParams()
    logger.info("sweep.lorenz start rhos=%s ms=%s L=%s", list(rhos), list(ms), L)
    rows = run_grid(lambda rho: lorenz_row(base, rho, ms, L), list(rhos), workers)
    frame = pd.DataFrame([values for values, _ in rows], columns=[f"m{m}" for m in ms])
    frame.insert(0, "rho", [float(r) for r in rhos])
    frame["frozen_steps"] = [frozen for _, frozen in rows]
    return frame


def write_table(frame: pd.DataFrame, path: str | Path) -> Path:
    """CSV with 6-decimal floats; missing values are empty fields."""
    path = Path(path)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, na_rep="")
    return path


__all__ = [
    "HenonPoint",
    "HENON_COLUMNS",
    "parameter_grid",
    "run_grid",
    "henon_point",
    "henon_sweep",
    "henon_orbit_diagram",
    "frozen_steps",
    "lorenz_row",
    "lorenz_table",
    "write_table",
]

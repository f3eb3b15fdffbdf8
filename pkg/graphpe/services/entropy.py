"""Permutation entropy family: PE, PE_G, MMSPE and MPE_G.

All four metrics share one tie rule (stable ascending sort by value then
position) and one entropy routine (``normalized_shannon``).  PE and MMSPE
slide a window along each channel; PE_G and MPE_G read embedding vectors off
walk-neighborhood averages of a graph signal.
"""

from __future__ import annotations

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from graphpe.config import get_settings
from graphpe.metrics import entropy_compute_seconds, entropy_compute_total
from graphpe.services.errors import InvalidArgumentError, NoValidPatternsError
from graphpe.services.graphs import (
    Graph,
    cartesian_product,
    directed_path,
    neighborhood_embedding,
)
from graphpe.services.ordinal import PatternDistribution, normalized_shannon, ordinal_codes
from graphpe.services.signals import MultivariateSignal

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class EntropyParams:
    """Embedding dimension ``m`` and delay ``L``."""

    m: int
    L: int = 1

    def __post_init__(self) -> None:
        if int(self.m) != self.m or self.m < 2:
            raise InvalidArgumentError(f"embedding dimension m must be >= 2, got {self.m!r}")
        limit = get_settings().max_embedding_dim
        if self.m > limit:
            raise InvalidArgumentError(
                f"embedding dimension m={self.m} exceeds the supported maximum {limit}"
            )
        if int(self.L) != self.L or self.L < 1:
            raise InvalidArgumentError(f"delay L must be >= 1, got {self.L!r}")

    @property
    def span(self) -> int:
        """Samples covered by one embedding vector, ``(m - 1) L + 1``."""
        return (self.m - 1) * self.L + 1


@contextmanager
def observe_computation(metric: str) -> Iterator[None]:
    """Count one evaluation of ``metric`` and record its latency, failures included."""
    start = time.perf_counter()
    try:
        yield
    finally:
        entropy_compute_total.labels(metric=metric).inc()
        entropy_compute_seconds.labels(metric=metric).observe(time.perf_counter() - start)


def _series(x: Sequence[float] | np.ndarray) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidArgumentError(f"expected a univariate series, got shape {arr.shape}")
    return arr


# --------------------------------------------------------------------------- #
# Pattern extraction
# --------------------------------------------------------------------------- #
def embedding_windows(x: Sequence[float] | np.ndarray, params: EntropyParams) -> np.ndarray:
    """Rows ``(x_i, x_{i+L}, ..., x_{i+(m-1)L})`` for ``i = 0..n-(m-1)L-1``."""
    series = _series(x)
    if series.shape[0] < params.span:
        raise InvalidArgumentError(
            f"signal of length {series.shape[0]} is too short for m={params.m}, "
            f"L={params.L}; need at least {params.span} samples"
        )
    count = series.shape[0] - (params.m - 1) * params.L
    index = np.arange(count)[:, None] + np.arange(params.m)[None, :] * params.L
    return series[index]


def pattern_counts(x: Sequence[float] | np.ndarray, params: EntropyParams) -> PatternDistribution:
    """Ordinal pattern distribution of a univariate series."""
    dist = PatternDistribution(m=params.m)
    dist.add_codes(ordinal_codes(embedding_windows(x, params)))
    return dist


def graph_pattern_counts(
    g: Graph,
    x: Sequence[float] | np.ndarray,
    params: EntropyParams,
) -> PatternDistribution:
    """Ordinal pattern distribution of a graph signal over its valid vertices."""
    embedding = neighborhood_embedding(g, x, params.m, params.L)
    rows = embedding.values[embedding.valid]
    if rows.shape[0] == 0:
        raise NoValidPatternsError(
            f"no vertex of the {g.num_vertices}-vertex graph has walks of every "
            f"length kL for m={params.m}, L={params.L}"
        )
    dist = PatternDistribution(m=params.m)
    dist.add_codes(ordinal_codes(rows))
    return dist


def pooled_pattern_counts(u: MultivariateSignal, params: EntropyParams) -> PatternDistribution:
    """Per-channel pattern counts summed over all channels."""
    dist = PatternDistribution(m=params.m)
    for s in range(u.channels):
        dist = dist.merge(pattern_counts(u.channel(s), params))
    return dist


def product_graph(u: MultivariateSignal, interaction: Graph) -> Graph:
    """``directed_path(n) □ interaction``, the graph whose vertices are the samples of ``u``."""
    if interaction.num_vertices != u.channels:
        raise InvalidArgumentError(
            f"interaction graph has {interaction.num_vertices} vertices "
            f"but the signal has {u.channels} channels"
        )
    return cartesian_product(directed_path(u.length), interaction)


def multivariate_graph_pattern_counts(
    u: MultivariateSignal,
    interaction: Graph,
    params: EntropyParams,
    product: Graph | None = None,
) -> PatternDistribution:
    """Pattern counts on the product graph; ``product`` reuses a prebuilt one."""
    if product is None:
        product = product_graph(u, interaction)
    elif product.num_vertices != u.length * u.channels:
        raise InvalidArgumentError(
            f"product graph has {product.num_vertices} vertices but the signal "
            f"has {u.length} x {u.channels} samples"
        )
    return graph_pattern_counts(product, u.vertex_signal(), params)


# --------------------------------------------------------------------------- #
# Metrics
# --------------------------------------------------------------------------- #
def permutation_entropy(x: Sequence[float] | np.ndarray, params: EntropyParams) -> float:
    with observe_computation("pe"):
        value = normalized_shannon(pattern_counts(x, params), params.m)
    logger.debug("entropy.pe m=%s L=%s value=%.6f", params.m, params.L, value)
    return value


def pe_graph(g: Graph, x: Sequence[float] | np.ndarray, params: EntropyParams) -> float:
    with observe_computation("peg"):
        value = normalized_shannon(graph_pattern_counts(g, x, params), params.m)
    logger.debug(
        "entropy.pe_graph vertices=%s m=%s L=%s value=%.6f",
        g.num_vertices,
        params.m,
        params.L,
        value,
    )
    return value


def mmspe(u: MultivariateSignal, params: EntropyParams) -> float:
    """Entropy of pattern frequencies pooled across channels (no cross-channel terms)."""
    with observe_computation("mmspe"):
        value = normalized_shannon(pooled_pattern_counts(u, params), params.m)
    logger.debug(
        "entropy.mmspe channels=%s m=%s L=%s value=%.6f",
        u.channels,
        params.m,
        params.L,
        value,
    )
    return value


def mpe_graph(
    u: MultivariateSignal,
    interaction: Graph,
    params: EntropyParams,
    *,
    product: Graph | None = None,
) -> float:
    """PE_G of ``u`` seen as a signal on ``directed_path(n) □ interaction``.

    Sweeps over signals of one shape pass ``product`` (built once with
    ``product_graph``) to skip rebuilding the same graph per call.
    """
    with observe_computation("mpeg"):
        value = normalized_shannon(
            multivariate_graph_pattern_counts(u, interaction, params, product), params.m
        )
    logger.debug(
        "entropy.mpe_graph channels=%s samples=%s m=%s L=%s value=%.6f",
        u.channels,
        u.length,
        params.m,
        params.L,
        value,
    )
    return value


__all__ = [
    "EntropyParams",
    "observe_computation",
    "embedding_windows",
    "pattern_counts",
    "graph_pattern_counts",
    "pooled_pattern_counts",
    "product_graph",
    "multivariate_graph_pattern_counts",
    "permutation_entropy",
    "pe_graph",
    "mmspe",
    "mpe_graph",
]

"""Multivariate signals and the CSV formats used to exchange them.

Signal CSV: optional header row of channel names, then one row per time
sample, column ``s`` holding channel ``s``.

Adjacency CSV: ``p`` rows of ``p`` nonnegative reals, no header; row ``i``
column ``j`` is the weight of the arc ``i -> j``.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from graphpe.services.errors import InvalidArgumentError, SignalParseError
from graphpe.services.graphs import Graph, complete_graph, graph_from_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MultivariateSignal:
    """``p`` channels by ``n`` samples of finite float64 values."""

    data: np.ndarray
    channel_names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim == 1:
            data = data.reshape(1, -1)
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise InvalidArgumentError(
                f"signal must be a non-empty channels x samples matrix, got shape {data.shape}"
            )
        if not np.all(np.isfinite(data)):
            s, t = (int(v) for v in np.argwhere(~np.isfinite(data))[0])
            raise InvalidArgumentError(f"channel {s + 1} sample {t + 1} is not finite")
        if self.channel_names is not None and len(self.channel_names) != data.shape[0]:
            raise InvalidArgumentError(
                f"{len(self.channel_names)} channel names for {data.shape[0]} channels"
            )
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def channels(self) -> int:
        return int(self.data.shape[0])

    @property
    def length(self) -> int:
        return int(self.data.shape[1])

    def channel(self, index: int) -> np.ndarray:
        """Channel by 0-based index."""
        if not 0 <= index < self.channels:
            raise InvalidArgumentError(
                f"channel {index + 1} out of range 1..{self.channels}"
            )
        return self.data[index]

    def channel_index(self, selector: str | int) -> int:
        """Resolve a 1-based number or a channel name to a 0-based index."""
        if isinstance(selector, int) or str(selector).strip().isdigit():
            index = int(selector) - 1
            self.channel(index)
            return index
        names = self.channel_names or ()
        if selector in names:
            return names.index(selector)
        raise InvalidArgumentError(f"unknown channel {selector!r}")

    def vertex_signal(self) -> np.ndarray:
        """Flatten time-major: entry ``t * p + s`` is channel ``s`` at time ``t``."""
        return np.ascontiguousarray(self.data.T).reshape(-1)

    @classmethod
    def from_channels(
        cls,
        channels: Sequence[Sequence[float]],
        names: Sequence[str] | None = None,
    ) -> MultivariateSignal:
        return cls(
            data=np.asarray(channels, dtype=np.float64),
            channel_names=tuple(names) if names is not None else None,
        )


# --------------------------------------------------------------------------- #
# Parsing helpers
# --------------------------------------------------------------------------- #
def _rows(path: Path) -> Iterator[tuple[int, list[str]]]:
    with path.open("r", encoding="utf-8", newline="") as fp:
        reader = csv.reader(fp)
        for row in reader:
            if not row or all(not cell.strip() for cell in row):
                continue
            yield reader.line_num, [cell.strip() for cell in row]


def _to_float(cell: str, line: int, column: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise SignalParseError(
            f"column {column}: {cell!r} is not a number", line
        ) from None
    if not math.isfinite(value):
        raise SignalParseError(f"column {column}: {cell!r} is not finite", line)
    return value


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


# --------------------------------------------------------------------------- #
# Signals
# --------------------------------------------------------------------------- #
def load_signal(path: str | Path) -> MultivariateSignal:
    """Read a signal CSV into a ``channels x samples`` signal."""
    path = Path(path)
    names: tuple[str, ...] | None = None
    samples: list[list[float]] = []
    width: int | None = None

    for line, cells in _rows(path):
        if width is None:
            width = len(cells)
            if not any(_is_number(cell) for cell in cells):
                if any(not cell for cell in cells):
                    raise SignalParseError("empty channel name in header", line)
                names = tuple(cells)
                continue
        if len(cells) != width:
            raise SignalParseError(
                f"expected {width} columns, found {len(cells)}", line
            )
        samples.append(
            [_to_float(cell, line, col + 1) for col, cell in enumerate(cells)]
        )

    if not samples:
        raise SignalParseError("no samples found", 1)

    signal = MultivariateSignal(
        data=np.asarray(samples, dtype=np.float64).T,
        channel_names=names,
    )
    logger.debug(
        "signals.load path=%s channels=%s samples=%s",
        path,
        signal.channels,
        signal.length,
    )
    return signal


def save_signal(signal: MultivariateSignal, path: str | Path) -> Path:
    """Write a signal CSV; values use ``repr`` so reloading is bit-identical."""
    path = Path(path)
    names = signal.channel_names or tuple(
        f"ch{s + 1}" for s in range(signal.channels)
    )
    with path.open("w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(names)
        for row in signal.data.T:
            writer.writerow([repr(float(v)) for v in row])
    return path


# --------------------------------------------------------------------------- #
# Adjacency matrices
# --------------------------------------------------------------------------- #
def load_adjacency(path: str | Path) -> np.ndarray:
    path = Path(path)
    rows: list[list[float]] = []
    width: int | None = None
    for line, cells in _rows(path):
        if width is None:
            width = len(cells)
        if len(cells) != width:
            raise SignalParseError(
                f"expected {width} columns, found {len(cells)}", line
            )
        rows.append([_to_float(cell, line, col + 1) for col, cell in enumerate(cells)])
    if not rows:
        raise SignalParseError("adjacency file is empty", 1)
    return np.asarray(rows, dtype=np.float64)


def load_interaction_graph(path: str | Path | None, p: int) -> Graph:
    """Interaction graph for ``p`` channels; the complete graph when ``path`` is None."""
    if path is None:
        return complete_graph(p)
    matrix = load_adjacency(path)
    if matrix.shape != (p, p):
        raise InvalidArgumentError(
            f"interaction graph is {matrix.shape[0]}x{matrix.shape[1]} "
            f"but the signal has {p} channels"
        )
    return graph_from_matrix(matrix)


def save_adjacency(graph: Graph, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        for row in graph.to_dense():
            writer.writerow([repr(float(v)) for v in row])
    return path


__all__ = [
    "MultivariateSignal",
    "load_signal",
    "save_signal",
    "load_adjacency",
    "load_interaction_graph",
    "save_adjacency",
]

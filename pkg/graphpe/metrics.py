from prometheus_client import Counter, Histogram
# Prometheus metrics definitions

# Entropy kernel calls, labelled by metric name (pe, peg, mmspe, mpeg)
entropy_compute_total = Counter(
    "entropy_compute_total", "Total entropy evaluations", ["metric"]
)

# Product graphs of long signals dominate; buckets cover ms..tens of seconds
_compute_buckets = (
    0.001,
    0.01,
    0.1,
    0.5,
    1.0,
    5.0,
    30.0,
)

entropy_compute_seconds = Histogram(
    "entropy_compute_seconds",
    "Entropy evaluation latency",
    ["metric"],
    buckets=_compute_buckets,
)

# Grid points processed by repro sweeps
sweep_points_total = Counter(
    "sweep_points_total", "Total sweep grid points evaluated", ["experiment"]
)

# Hénon/Lorenz runs stopped by the divergence guard
orbit_divergence_total = Counter(
    "orbit_divergence_total", "Number of diverged generator runs"
)

__all__ = [
    "entropy_compute_total",
    "entropy_compute_seconds",
    "sweep_points_total",
    "orbit_divergence_total",
]

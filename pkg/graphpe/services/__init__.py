"""Service helpers for graphpe."""

from .entropy import (  # noqa: F401
    EntropyParams,
    mmspe,
    mpe_graph,
    pe_graph,
    permutation_entropy,
)
from .graphs import (  # noqa: F401
    Graph,
    cartesian_product,
    complete_graph,
    directed_path,
    empty_graph,
    graph_from_matrix,
    neighborhood_embedding,
)
from .signals import MultivariateSignal, load_signal  # noqa: F401

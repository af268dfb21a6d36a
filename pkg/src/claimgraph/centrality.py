"""The five node-centrality metrics used as claim confidence scores.

All metrics treat the bipartite graph as undirected and unweighted and report
one value per node. Downstream scoring consumes the claim-partition values;
response values are kept for inspection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceFailure, EmptyGraph
from .graph import BipartiteGraph, PathOracle, all_pairs_bfs


@dataclass(frozen=True)
class CentralityParams:
    damping: float = 0.85
    power_iteration_tolerance: float = 1e-8
    max_iterations: int = 1000
    betweenness_normalized: bool = True

    def __post_init__(self) -> None:
        if not (0.0 < self.damping < 1.0):
            raise ValueError("damping must lie strictly between 0 and 1")
        if self.power_iteration_tolerance <= 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class CentralityReport:
    """Per-node values for one metric, split by partition."""

    metric: str
    response_values: tuple[float, ...]
    claim_values: tuple[float, ...]
    params: CentralityParams
    eigenvalue: float | None = None

    def value(self, node: int) -> float:
        if node < len(self.response_values):
            return self.response_values[node]
        return self.claim_values[node - len(self.response_values)]


def _report(
    metric: str,
    g: BipartiteGraph,
    values: list[float],
    params: CentralityParams,
    eigenvalue: float | None = None,
) -> CentralityReport:
    return CentralityReport(
        metric=metric,
        response_values=tuple(values[: g.response_count]),
        claim_values=tuple(values[g.response_count :]),
        params=params,
        eigenvalue=eigenvalue,
    )


def degree_centrality(
    g: BipartiteGraph, params: CentralityParams | None = None
) -> CentralityReport:
    """Edge count incident to each node."""
    params = params or CentralityParams()
    values = [float(g.degree(v)) for v in range(g.node_count)]
    return _report("degree", g, values, params)


def closeness_centrality(
    g: BipartiteGraph, oracle: PathOracle, params: CentralityParams | None = None
) -> CentralityReport:
    """Wasserman-Faust closeness: ((n_v - 1) / sum d) * ((n_v - 1) / (N - 1)).

    ``n_v`` is the size of v's connected component and ``N`` the total node
    count, so values stay comparable on disconnected graphs. Isolated nodes
    and single-node graphs score 0.
    """
    params = params or CentralityParams()
    n_total = g.node_count
    values = []
    for v in range(n_total):
        n_v = oracle.component_size[v]
        total_dist = sum(oracle.distances[v].values())
        if n_v <= 1 or total_dist == 0 or n_total <= 1:
            values.append(0.0)
        else:
            values.append((n_v - 1) / total_dist * ((n_v - 1) / (n_total - 1)))
    return _report("closeness", g, values, params)


def betweenness_centrality(
    g: BipartiteGraph, params: CentralityParams | None = None
) -> CentralityReport:
    """Brandes' accumulation of shortest-path pass-through fractions."""
    params = params or CentralityParams()
    adjacency = g.adjacency
    n = g.node_count
    betweenness = [0.0] * n
    for source in range(n):
        stack: list[int] = []
        predecessors: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[source] = 1
        dist = [-1] * n
        dist[source] = 0
        queue = [source]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            stack.append(v)
            for w in adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    predecessors[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            for v in predecessors[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != source:
                betweenness[w] += delta[w]

    # Brandes counts ordered (s, t) pairs; rescale to the unordered convention.
    if params.betweenness_normalized:
        scale = 1.0 / ((n - 1) * (n - 2)) if n > 2 else 0.0
    else:
        scale = 0.5
    values = [b * scale for b in betweenness]
    return _report("betweenness", g, values, params)


def eigenvector_centrality(
    g: BipartiteGraph, params: CentralityParams | None = None
) -> CentralityReport:
    """Dominant eigenvector of the adjacency matrix, unit Euclidean norm.

    Power iteration runs on A + I: the shift leaves eigenvectors and their
    ordering untouched while breaking the +/-lambda symmetry of bipartite
    spectra that would otherwise make plain iteration oscillate.
    """
    params = params or CentralityParams()
    if not g.edges:
        raise EmptyGraph("eigenvector centrality requires at least one edge")
    adjacency = g.adjacency
    n = g.node_count
    x = [1.0 / math.sqrt(n)] * n
    for _ in range(params.max_iterations):
        # y = (A + I) x
        y = [x[v] + sum(x[u] for u in adjacency[v]) for v in range(n)]
        norm = math.sqrt(sum(val * val for val in y))
        y = [val / norm for val in y]
        if max(abs(y[v] - x[v]) for v in range(n)) < params.power_iteration_tolerance:
            x = y
            break
        x = y
    else:
        raise ConvergenceFailure(
            f"power iteration did not converge in {params.max_iterations} iterations"
        )
    # Rayleigh quotient of the unshifted A gives the reported eigenvalue.
    ax = [sum(x[u] for u in adjacency[v]) for v in range(n)]
    eigenvalue = sum(ax[v] * x[v] for v in range(n))
    return _report("eigenvector", g, x, params, eigenvalue=eigenvalue)


def pagerank_centrality(
    g: BipartiteGraph, params: CentralityParams | None = None
) -> CentralityReport:
    """Stationary distribution of a damped random walk with uniform restart.

    Dangling (degree-0) nodes spread their mass uniformly over all nodes,
    which keeps the values summing to 1.
    """
    params = params or CentralityParams()
    adjacency = g.adjacency
    n = g.node_count
    if n == 0:
        return _report("pagerank", g, [], params)
    d = params.damping
    rank = [1.0 / n] * n
    dangling = [v for v in range(n) if not adjacency[v]]
    for _ in range(params.max_iterations):
        dangling_mass = sum(rank[v] for v in dangling)
        base = (1.0 - d) / n + d * dangling_mass / n
        new_rank = [
            base + d * sum(rank[u] / len(adjacency[u]) for u in adjacency[v])
            for v in range(n)
        ]
        if sum(abs(new_rank[v] - rank[v]) for v in range(n)) < params.power_iteration_tolerance:
            rank = new_rank
            break
        rank = new_rank
    else:
        raise ConvergenceFailure(
            f"pagerank did not converge in {params.max_iterations} iterations"
        )
    return _report("pagerank", g, rank, params)


_METRICS = {
    "degree": lambda g, params: degree_centrality(g, params),
    "closeness": lambda g, params: closeness_centrality(g, all_pairs_bfs(g), params),
    "betweenness": betweenness_centrality,
    "eigenvector": eigenvector_centrality,
    "pagerank": pagerank_centrality,
}


def compute_centrality(
    g: BipartiteGraph, metric: str, params: CentralityParams | None = None
) -> CentralityReport:
    """Dispatch by metric name; ``metric`` is one of _METRICS' keys."""
    try:
        fn = _METRICS[metric]
    except KeyError:
        raise ValueError(f"unknown centrality metric: {metric!r}") from None
    return fn(g, params or CentralityParams())

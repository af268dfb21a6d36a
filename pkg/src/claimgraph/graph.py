"""Bipartite response-claim graph and unweighted shortest-path machinery.

Nodes are addressed two ways: response nodes by index ``0..response_count-1``
and claim nodes by index ``0..claim_count-1`` within their partition, or by a
single global index where responses come first and claim ``j`` maps to
``response_count + j``. All shortest-path structures use global indices.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path


@dataclass(frozen=True)
class BipartiteGraph:
    """Undirected bipartite graph between sampled responses and claims."""

    response_count: int
    claim_count: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.response_count < 0 or self.claim_count < 0:
            raise ValueError("node counts must be non-negative")
        for r, c in self.edges:
            if not (0 <= r < self.response_count):
                raise ValueError(f"response index {r} out of range")
            if not (0 <= c < self.claim_count):
                raise ValueError(f"claim index {c} out of range")

    @property
    def node_count(self) -> int:
        return self.response_count + self.claim_count

    def claim_node(self, claim_index: int) -> int:
        """Global node index of a claim."""
        return self.response_count + claim_index

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbor lists over global node indices."""
        neighbors: list[list[int]] = [[] for _ in range(self.node_count)]
        for r, c in sorted(self.edges):
            g = self.claim_node(c)
            neighbors[r].append(g)
            neighbors[g].append(r)
        return tuple(tuple(sorted(ns)) for ns in neighbors)

    def degree(self, node: int) -> int:
        return len(self.adjacency[node])

    def to_json(self) -> str:
        """Serialize to the byte-stable on-disk format."""
        payload = {
            "responses": self.response_count,
            "claims": self.claim_count,
            "edges": [[r, c] for r, c in sorted(self.edges)],
        }
        return json.dumps(payload, separators=(", ", ": ")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "BipartiteGraph":
        payload = json.loads(text)
        return cls(
            response_count=int(payload["responses"]),
            claim_count=int(payload["claims"]),
            edges=frozenset((int(r), int(c)) for r, c in payload["edges"]),
        )

    def save(self, path: Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: Path) -> "BipartiteGraph":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class PathOracle:
    """All-pairs shortest-path data for one graph.

    ``distances[v]`` maps each node reachable from ``v`` to its unweighted
    shortest-path distance; unreachable pairs are simply absent. ``sigma[v]``
    counts shortest paths to each reachable node.
    """

    distances: tuple[dict[int, int], ...]
    sigma: tuple[dict[int, int], ...]
    component_id: tuple[int, ...]
    component_size: tuple[int, ...]

    def distance(self, u: int, v: int) -> int | None:
        return self.distances[u].get(v)


def all_pairs_bfs(g: BipartiteGraph) -> PathOracle:
    """BFS from every node: exact distances, path counts, components."""
    adjacency = g.adjacency
    n = g.node_count
    distances: list[dict[int, int]] = []
    sigmas: list[dict[int, int]] = []
    for source in range(n):
        dist = {source: 0}
        sigma = {source: 1}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in adjacency[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] = sigma.get(w, 0) + sigma[v]
        distances.append(dist)
        sigmas.append(sigma)

    component_id = [-1] * n
    next_id = 0
    for v in range(n):
        if component_id[v] < 0:
            for u in distances[v]:
                component_id[u] = next_id
            next_id += 1
    sizes = [0] * next_id
    for cid in component_id:
        sizes[cid] += 1
    component_size = [sizes[cid] for cid in component_id]

    return PathOracle(
        distances=tuple(distances),
        sigma=tuple(sigmas),
        component_id=tuple(component_id),
        component_size=tuple(component_size),
    )


@dataclass(frozen=True)
class DistanceHistogram:
    """Pairwise claim-claim distance counts bucketed by label pair."""

    counts: dict[str, dict[int, int]] = field(default_factory=dict)
    unreachable: dict[str, int] = field(default_factory=dict)

    BUCKETS = ("TT", "TF", "FF")

    def mean(self, bucket: str) -> float | None:
        dist_counts = self.counts.get(bucket, {})
        total = sum(dist_counts.values())
        if total == 0:
            return None
        return sum(d * c for d, c in dist_counts.items()) / total


def claim_distance_histogram(
    g: BipartiteGraph,
    oracle: PathOracle,
    labels: dict[int, bool],
) -> DistanceHistogram:
    """Histogram of finite claim-claim distances by {TT, TF, FF} label pair.

    ``labels`` maps claim indices to True/False ground truth; unlabeled claims
    are ignored. Unreachable pairs are excluded from the counts and tallied
    separately per bucket.
    """
    for c in labels:
        if not (0 <= c < g.claim_count):
            raise ValueError(f"labeled claim index {c} out of range")
    counts: dict[str, dict[int, int]] = {b: {} for b in DistanceHistogram.BUCKETS}
    unreachable = {b: 0 for b in DistanceHistogram.BUCKETS}
    indices = sorted(labels)
    for i, ci in enumerate(indices):
        gi = g.claim_node(ci)
        for cj in indices[i + 1 :]:
            gj = g.claim_node(cj)
            pair = {labels[ci], labels[cj]}
            if pair == {True}:
                bucket = "TT"
            elif pair == {False}:
                bucket = "FF"
            else:
                bucket = "TF"
            d = oracle.distance(gi, gj)
            if d is None:
                unreachable[bucket] += 1
            else:
                counts[bucket][d] = counts[bucket].get(d, 0) + 1
    return DistanceHistogram(counts=counts, unreachable=unreachable)

"""Seeded community detection on one layer or on the two-layer supra-graph.

In multiplex scope each country has one replica per layer.  Replicas are
joined by links of weight ``omega`` and the null model is applied per
layer, so ``omega = 0`` decouples the layers entirely.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

import numpy as np

from ._louvain import WeightedGraph, csr_from_pairs, louvain
from .graph import LAYERS, MULTIPLEX, Layer, MultiplexNetwork

AGGREGATIONS = {
    "median": statistics.median,
    "mean": statistics.fmean,
    "min": min,
    "max": max,
}


@dataclass(frozen=True)
class CommunityParams:
    seed: int = 0
    repetitions: int = 1
    resolution: float = 1.0
    omega: float = 1.0
    aggregation: str = "median"
    weighted: bool = False

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if not self.resolution > 0:
            raise ValueError("resolution must be > 0")
        if not self.omega >= 0:
            raise ValueError("omega must be >= 0")
        if self.aggregation not in AGGREGATIONS:
            raise ValueError(f"aggregation must be one of {sorted(AGGREGATIONS)}")


@dataclass(frozen=True)
class Partition:
    """Community labels per (country id, layer), canonicalised 0..K-1."""

    assignment: dict[tuple[int, Layer], int] = field(compare=True)
    quality: float
    seed: int
    scope: str

    @property
    def count(self) -> int:
        return len(set(self.assignment.values()))

    def rows(self, network: MultiplexNetwork) -> list[tuple[str, str, int]]:
        return [
            (network.countries[i].iso3, str(layer), label)
            for (i, layer), label in self.assignment.items()
        ]


def _scope_layers(scope: "Layer | str") -> tuple[Layer, ...]:
    if scope == MULTIPLEX:
        return LAYERS
    return (Layer.parse(scope),)


def supra_graph(
    network: MultiplexNetwork, scope: "Layer | str", params: CommunityParams
) -> tuple[WeightedGraph, list[tuple[int, Layer]]]:
    """Build the graph the optimizer sees, plus the node -> (country, layer) map."""
    layers = _scope_layers(scope)
    n = network.n
    size = n * len(layers)
    all_pairs, all_w = [], []
    strength = np.zeros((size, len(layers)))
    coef = np.zeros(len(layers))
    for s, layer in enumerate(layers):
        pairs, w = network.edge_array(layer, weighted=params.weighted)
        off = s * n
        all_pairs.append(pairs + off)
        all_w.append(w)
        deg = np.bincount(pairs.ravel(), weights=np.repeat(w, 2), minlength=n) if len(pairs) else np.zeros(n)
        strength[off : off + n, s] = deg
        total = deg.sum()
        if total > 0:
            coef[s] = params.resolution / total
    if len(layers) == 2 and params.omega > 0 and n:
        ids = np.arange(n, dtype=np.int64)
        all_pairs.append(np.column_stack([ids, ids + n]))
        all_w.append(np.full(n, float(params.omega)))
    pairs = np.concatenate(all_pairs) if all_pairs else np.empty((0, 2), dtype=np.int64)
    weights = np.concatenate(all_w) if all_w else np.empty(0)
    indptr, indices, wts = csr_from_pairs(size, pairs, weights)
    graph = WeightedGraph(
        indptr, indices, wts, np.zeros(size), strength, coef, float(2.0 * weights.sum())
    )
    keys = [(i, layer) for layer in layers for i in range(n)]
    return graph, keys


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFF, restart]))


def detect_all(network: MultiplexNetwork, scope: "Layer | str", params: CommunityParams) -> list[Partition]:
    """One partition per seeded restart, in restart order."""
    if network.n == 0:
        raise ValueError("cannot detect communities on an empty node set")
    scope_name = MULTIPLEX if scope == MULTIPLEX else str(Layer.parse(scope))
    graph, keys = supra_graph(network, scope, params)
    out = []
    for r in range(params.repetitions):
        labels, q, _ = louvain(graph, _restart_rng(params.seed, r))
        assignment = dict(zip(keys, labels.tolist()))
        out.append(Partition(assignment, q, params.seed, scope_name))
    return out


def detect(network: MultiplexNetwork, scope: "Layer | str", params: CommunityParams) -> Partition:
    """Best-quality partition over ``params.repetitions`` restarts (earliest wins ties)."""
    parts = detect_all(network, scope, params)
    return max(parts, key=lambda p: p.quality)


def community_count(partition: Partition) -> int:
    return partition.count


def aggregate_count(network: MultiplexNetwork, scope: "Layer | str", params: CommunityParams) -> float:
    """Community count summarised over restarts (median by default)."""
    counts = [p.count for p in detect_all(network, scope, params)]
    return float(AGGREGATIONS[params.aggregation](counts))

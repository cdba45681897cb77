"""Two-layer country multiplex built from treaty memberships.

Every treaty is projected to a clique over its members inside its layer.
Edges are simple (one record per pair and layer) and remember which
treaties or bilateral deals support them, so removing a treaty later is
exact.  Networks are immutable; every removal returns a new value.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numba
import numpy as np


class Layer(str, Enum):
    POLITICAL = "political"
    ECONOMIC = "economic"

    @classmethod
    def parse(cls, value: "str | Layer") -> "Layer":
        if isinstance(value, Layer):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown layer {value!r}") from None

    def __str__(self) -> str:
        return self.value


LAYERS = (Layer.POLITICAL, Layer.ECONOMIC)
MULTIPLEX = "multiplex"
BILATERAL = "<bilateral>"

Pair = tuple[int, int]


class GraphError(ValueError):
    """Bad input to network construction."""


class LookupFailure(KeyError):
    """Unknown country or treaty referenced by a removal."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "lookup failure"


@dataclass(frozen=True)
class Country:
    id: int
    iso3: str
    name: str


@dataclass(frozen=True)
class Treaty:
    """A single-layer treaty; members are iso3 codes."""

    acronym: str
    name: str
    layer: Layer
    members: tuple[str, ...]

    @property
    def key(self) -> tuple[Layer, str]:
        return (self.layer, self.acronym)


@dataclass(frozen=True)
class ComponentsSummary:
    count: int
    giant_size: int
    sizes: tuple[int, ...]


def _pair(a: int, b: int) -> Pair:
    return (a, b) if a < b else (b, a)


class MultiplexNetwork:
    """Countries plus one provenance-labelled simple graph per layer."""

    __slots__ = ("_countries", "_edges", "_treaties", "_cache")

    def __init__(
        self,
        countries: Sequence[Country],
        edges: Mapping[Layer, Mapping[Pair, frozenset[str]]],
        treaties: Mapping[tuple[Layer, str], Treaty] | None = None,
    ):
        self._countries = tuple(countries)
        for idx, c in enumerate(self._countries):
            if c.id != idx:
                raise GraphError(f"country ids must be contiguous from 0, got {c.id} at {idx}")
        self._edges = MappingProxyType(
            {layer: MappingProxyType(dict(edges.get(layer, {}))) for layer in LAYERS}
        )
        self._treaties = MappingProxyType(dict(treaties or {}))
        self._cache: dict = {}

    @property
    def countries(self) -> tuple[Country, ...]:
        return self._countries

    @property
    def n(self) -> int:
        return len(self._countries)

    @property
    def treaties(self) -> Mapping[tuple[Layer, str], Treaty]:
        return self._treaties

    def edges(self, layer: Layer) -> Mapping[Pair, frozenset[str]]:
        return self._edges[Layer.parse(layer)]

    def edge_count(self, layer: Layer) -> int:
        return len(self.edges(layer))

    def country(self, key: "int | str") -> Country:
        if isinstance(key, str):
            idx = self.iso3_index().get(key.upper())
            if idx is None:
                raise LookupFailure(f"unknown country {key!r}")
            return self._countries[idx]
        if not 0 <= key < self.n:
            raise LookupFailure(f"unknown country id {key!r}")
        return self._countries[key]

    def iso3_index(self) -> dict[str, int]:
        if "iso3" not in self._cache:
            self._cache["iso3"] = {c.iso3: c.id for c in self._countries}
        return self._cache["iso3"]

    def edge_array(self, layer: Layer, weighted: bool = False) -> tuple[np.ndarray, np.ndarray]:
        """Return (pairs, weights) with pairs of shape (E, 2), rows sorted.

        Weights are provenance cardinalities when ``weighted`` else ones.
        """
        layer = Layer.parse(layer)
        key = ("arr", layer, weighted)
        if key not in self._cache:
            edges = self._edges[layer]
            pairs = sorted(edges)
            arr = np.array(pairs, dtype=np.int64).reshape(-1, 2)
            if weighted:
                w = np.array([len(edges[p]) for p in pairs], dtype=np.float64)
            else:
                w = np.ones(len(pairs), dtype=np.float64)
            arr.flags.writeable = False
            w.flags.writeable = False
            self._cache[key] = (arr, w)
        return self._cache[key]

    def provenance_index(self) -> dict[tuple[Layer, str], frozenset[Pair]]:
        """Map (layer, acronym) to the edges that acronym currently supports."""
        if "prov" not in self._cache:
            index: dict[tuple[Layer, str], set[Pair]] = {}
            for layer in LAYERS:
                for pair, prov in self._edges[layer].items():
                    for t in prov:
                        index.setdefault((layer, t), set()).add(pair)
            self._cache["prov"] = {k: frozenset(v) for k, v in index.items()}
        return self._cache["prov"]

    def resolve_treaty(self, treaty: "str | tuple[Layer, str]") -> tuple[Layer, str]:
        if isinstance(treaty, tuple):
            key = (Layer.parse(treaty[0]), treaty[1])
            if key not in self._treaties:
                raise LookupFailure(f"unknown treaty {treaty[1]!r} in layer {key[0]}")
            return key
        hits = [k for k in self._treaties if k[1] == treaty]
        if not hits:
            raise LookupFailure(f"unknown treaty {treaty!r}")
        if len(hits) > 1:
            raise LookupFailure(f"treaty {treaty!r} exists in both layers; pass (layer, acronym)")
        return hits[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiplexNetwork):
            return NotImplemented
        return (
            self._countries == other._countries
            and all(dict(self._edges[l]) == dict(other._edges[l]) for l in LAYERS)
            and dict(self._treaties) == dict(other._treaties)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (
            f"MultiplexNetwork(n={self.n}, political={self.edge_count(Layer.POLITICAL)}, "
            f"economic={self.edge_count(Layer.ECONOMIC)}, treaties={len(self._treaties)})"
        )


def build_network(
    countries: Sequence[Country],
    treaties: Iterable[Treaty],
    bilaterals: Iterable[tuple[str, str, Layer]] = (),
) -> MultiplexNetwork:
    index = {c.iso3: c.id for c in countries}
    edges: dict[Layer, dict[Pair, set[str]]] = {layer: {} for layer in LAYERS}
    registry: dict[tuple[Layer, str], Treaty] = {}

    for t in treaties:
        layer = Layer.parse(t.layer)
        if t.key in registry:
            raise GraphError(f"treaty {t.acronym!r} listed twice in layer {layer}")
        members = sorted(set(t.members))
        if len(members) < 2:
            raise GraphError(f"treaty {t.acronym!r} has {len(members)} member(s); need at least 2")
        ids = []
        for token in members:
            if token not in index:
                raise GraphError(f"treaty {t.acronym!r} references unknown country {token!r}")
            ids.append(index[token])
        registry[t.key] = t
        layer_edges = edges[layer]
        for a, b in combinations(sorted(ids), 2):
            layer_edges.setdefault((a, b), set()).add(t.acronym)

    for a, b, layer in bilaterals:
        layer = Layer.parse(layer)
        for token in (a, b):
            if token not in index:
                raise GraphError(f"bilateral {a}-{b} references unknown country {token!r}")
        if a == b:
            raise GraphError(f"bilateral {a}-{b} is a self-loop")
        edges[layer].setdefault(_pair(index[a], index[b]), set()).add(BILATERAL)

    frozen = {layer: {p: frozenset(s) for p, s in e.items()} for layer, e in edges.items()}
    return MultiplexNetwork(countries, frozen, registry)


def from_edges(
    n: int,
    political: Iterable[tuple[int, int]] = (),
    economic: Iterable[tuple[int, int]] = (),
    iso3: Sequence[str] | None = None,
) -> MultiplexNetwork:
    """Small networks from explicit edge lists; every edge is a bilateral deal."""
    if iso3 is None:
        iso3 = [f"N{i:02d}" for i in range(n)]
    countries = [Country(i, code, code) for i, code in enumerate(iso3)]
    bil = [(iso3[a], iso3[b], Layer.POLITICAL) for a, b in political]
    bil += [(iso3[a], iso3[b], Layer.ECONOMIC) for a, b in economic]
    return build_network(countries, [], bil)


def _edge_arrays(network: MultiplexNetwork, scope: "Layer | str") -> np.ndarray:
    if scope == MULTIPLEX:
        parts = [network.edge_array(l)[0] for l in LAYERS]
        return np.concatenate(parts) if parts else np.empty((0, 2), dtype=np.int64)
    return network.edge_array(Layer.parse(scope))[0]


@numba.njit(cache=True, nogil=True)
def _component_sizes(n, pairs):
    parent = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    for e in range(pairs.shape[0]):
        a, b = pairs[e, 0], pairs[e, 1]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a == b:
            continue
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
    out = np.empty(n, dtype=np.int64)
    k = 0
    for v in range(n):
        if parent[v] == v:
            out[k] = size[v]
            k += 1
    return np.sort(out[:k])[::-1]


def components(network: MultiplexNetwork, scope: "Layer | str") -> ComponentsSummary:
    """Connected components of one layer, or of both layers' union for ``MULTIPLEX``."""
    n = network.n
    if n == 0:
        return ComponentsSummary(0, 0, ())
    sizes = _component_sizes(n, _edge_arrays(network, scope)).tolist()
    return ComponentsSummary(len(sizes), sizes[0], tuple(sizes))


def remove_block(network: MultiplexNetwork, block: Iterable[int], layer: Layer) -> MultiplexNetwork:
    layer = Layer.parse(layer)
    block = frozenset(block)
    for i in block:
        network.country(i)
    if not block:
        return network
    edges = dict(network._edges)
    edges[layer] = {p: s for p, s in network.edges(layer).items() if p[0] not in block and p[1] not in block}
    return MultiplexNetwork(network.countries, edges, network.treaties)


def remove_country(network: MultiplexNetwork, country: int, layer: Layer) -> MultiplexNetwork:
    return remove_block(network, (country,), layer)


def remove_treaty(network: MultiplexNetwork, treaty: "str | tuple[Layer, str]") -> MultiplexNetwork:
    layer, acronym = network.resolve_treaty(treaty)
    current = network.edges(layer)
    kept = dict(current)
    for pair in network.provenance_index().get((layer, acronym), ()):
        rest = current[pair] - {acronym}
        if rest:
            kept[pair] = rest
        else:
            del kept[pair]
    edges = dict(network._edges)
    edges[layer] = kept
    treaties = {k: v for k, v in network.treaties.items() if k != (layer, acronym)}
    return MultiplexNetwork(network.countries, edges, treaties)

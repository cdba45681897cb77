"""Removal scenarios, the damage index and exhaustive sweeps.

For a scenario applied to layer l the index is

    delta = (c * q) / g

with c, q, g the after/before ratios of community count, connected
component count and giant-component size.  ``delta == 1`` means no change.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .community import CommunityParams, aggregate_count
from .graph import (
    LAYERS,
    MULTIPLEX,
    Layer,
    MultiplexNetwork,
    components,
    remove_block,
    remove_country,
    remove_treaty,
)


@dataclass(frozen=True)
class CountryRemoval:
    country: int
    layer: Layer
    kind = "country"

    def apply(self, network: MultiplexNetwork) -> MultiplexNetwork:
        return remove_country(network, self.country, self.layer)

    def entity(self, network: MultiplexNetwork) -> str:
        return network.country(self.country).iso3


@dataclass(frozen=True)
class BlockRemoval:
    countries: frozenset[int]
    layer: Layer
    kind = "block"

    def apply(self, network: MultiplexNetwork) -> MultiplexNetwork:
        return remove_block(network, self.countries, self.layer)

    def entity(self, network: MultiplexNetwork) -> str:
        return ";".join(sorted(network.country(i).iso3 for i in self.countries))


@dataclass(frozen=True)
class TreatyRemoval:
    acronym: str
    layer: Layer
    kind = "treaty"

    def apply(self, network: MultiplexNetwork) -> MultiplexNetwork:
        return remove_treaty(network, (self.layer, self.acronym))

    def entity(self, network: MultiplexNetwork) -> str:
        return self.acronym


Scenario = Union[CountryRemoval, BlockRemoval, TreatyRemoval]


@dataclass(frozen=True)
class Scope:
    """Where communities and components are measured: ``"layer"`` or ``"multiplex"``."""

    communities: str = MULTIPLEX
    components: str = "layer"

    def __post_init__(self):
        for v in (self.communities, self.components):
            if v not in ("layer", MULTIPLEX):
                raise ValueError(f"scope must be 'layer' or 'multiplex', got {v!r}")

    @classmethod
    def uniform(cls, value: str) -> "Scope":
        return cls(value, value)

    def resolve(self, which: str, layer: Layer) -> "Layer | str":
        value = getattr(self, which)
        return MULTIPLEX if value == MULTIPLEX else layer

    def __str__(self) -> str:
        if self.communities == self.components:
            return self.communities
        return f"C:{self.communities}/QG:{self.components}"


DEFAULT_SCOPE = Scope()


@dataclass(frozen=True)
class Structure:
    communities: float
    components: int
    giant: int


@dataclass(frozen=True)
class DamageMetrics:
    C0: float
    C1: float
    Q0: int
    Q1: int
    G0: int
    G1: int
    scope: str

    def __post_init__(self):
        if not (self.C0 > 0 and self.Q0 > 0 and self.G0 > 0):
            raise ValueError("baseline structure must be positive")

    @property
    def c(self) -> float:
        return self.C1 / self.C0

    @property
    def q(self) -> float:
        return self.Q1 / self.Q0

    @property
    def g(self) -> float:
        return self.G1 / self.G0

    @property
    def delta(self) -> float:
        return (self.c * self.q) / self.g


@dataclass(frozen=True)
class DamageReport:
    scenario: Scenario
    entity: str
    metrics: DamageMetrics
    delta_norm: float
    params: CommunityParams


def structure(
    network: MultiplexNetwork,
    layer: Layer,
    params: CommunityParams,
    scope: Scope = DEFAULT_SCOPE,
) -> Structure:
    comp = components(network, scope.resolve("components", layer))
    count = aggregate_count(network, scope.resolve("communities", layer), params)
    return Structure(count, comp.count, comp.giant_size)


def evaluate(
    network: MultiplexNetwork,
    scenario: Scenario,
    params: CommunityParams,
    scope: Scope = DEFAULT_SCOPE,
    baseline: Structure | None = None,
) -> DamageMetrics:
    if network.n == 0:
        raise ValueError("baseline network is empty")
    layer = Layer.parse(scenario.layer)
    if baseline is None:
        baseline = structure(network, layer, params, scope)
    after = structure(scenario.apply(network), layer, params, scope)
    return DamageMetrics(
        baseline.communities,
        after.communities,
        baseline.components,
        after.components,
        baseline.giant,
        after.giant,
        str(scope),
    )


def normalize(deltas: Sequence[float]) -> list[float]:
    if len(deltas) == 0:
        raise ValueError("cannot normalize an empty sequence")
    if any(not (d > 0 and math.isfinite(d)) for d in deltas):
        raise ValueError("damage values must be positive and finite")
    top = max(deltas)
    return [d / top for d in deltas]


def _run(
    network: MultiplexNetwork,
    scenarios: Sequence[Scenario],
    params: CommunityParams,
    scope: Scope,
    threads: int,
) -> list[DamageMetrics]:
    baselines = {
        layer: structure(network, layer, params, scope)
        for layer in LAYERS
        if any(s.layer == layer for s in scenarios)
    }
    job: Callable[[Scenario], DamageMetrics] = lambda s: evaluate(
        network, s, params, scope, baselines[s.layer]
    )
    if threads <= 1:
        return [job(s) for s in scenarios]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(job, scenarios))  # map keeps input order


def _reports(network, scenarios, metrics, params) -> list[DamageReport]:
    norm = normalize([m.delta for m in metrics])
    return [
        DamageReport(s, s.entity(network), m, d, params)
        for s, m, d in zip(scenarios, metrics, norm)
    ]


def sweep_countries(
    network: MultiplexNetwork,
    layer: Layer,
    params: CommunityParams,
    scope: Scope = DEFAULT_SCOPE,
    threads: int = 1,
) -> list[DamageReport]:
    """Remove each country from ``layer`` in turn; ranked by normalised damage."""
    layer = Layer.parse(layer)
    scenarios = [CountryRemoval(c.id, layer) for c in network.countries]
    reports = _reports(network, scenarios, _run(network, scenarios, params, scope, threads), params)
    return sorted(reports, key=lambda r: (-r.delta_norm, r.entity))


def sweep_treaties(
    network: MultiplexNetwork,
    params: CommunityParams,
    scope: Scope = DEFAULT_SCOPE,
    threads: int = 1,
) -> list[DamageReport]:
    """Remove each treaty in turn, normalised within the treaty's layer.

    Output is grouped by layer (political first), each group ranked.
    """
    out = []
    for layer in LAYERS:
        scenarios = [TreatyRemoval(a, l) for (l, a) in sorted(network.treaties) if l == layer]
        if not scenarios:
            continue
        metrics = _run(network, scenarios, params, scope, threads)
        out.extend(sorted(_reports(network, scenarios, metrics, params), key=lambda r: (-r.delta_norm, r.entity)))
    return out

"""Damage-index analysis of two-layer country/treaty networks."""

__version__ = "0.1.0"

from .community import CommunityParams, Partition, aggregate_count, community_count, detect
from .damage import (
    DEFAULT_SCOPE,
    BlockRemoval,
    CountryRemoval,
    DamageMetrics,
    DamageReport,
    Scope,
    TreatyRemoval,
    evaluate,
    normalize,
    sweep_countries,
    sweep_treaties,
)
from .graph import (
    BILATERAL,
    LAYERS,
    MULTIPLEX,
    ComponentsSummary,
    Country,
    Layer,
    MultiplexNetwork,
    Treaty,
    build_network,
    components,
    from_edges,
    remove_block,
    remove_country,
    remove_treaty,
)
from .ingest import DatasetAudit, IngestError, load_dataset, load_index
from .stats import CorrelationResult, IndexedSeries, spearman

__all__ = [
    "BILATERAL",
    "DEFAULT_SCOPE",
    "LAYERS",
    "MULTIPLEX",
    "BlockRemoval",
    "CommunityParams",
    "ComponentsSummary",
    "CorrelationResult",
    "Country",
    "CountryRemoval",
    "DamageMetrics",
    "DamageReport",
    "DatasetAudit",
    "IndexedSeries",
    "IngestError",
    "Layer",
    "MultiplexNetwork",
    "Partition",
    "Scope",
    "Treaty",
    "TreatyRemoval",
    "aggregate_count",
    "build_network",
    "community_count",
    "components",
    "detect",
    "evaluate",
    "from_edges",
    "load_dataset",
    "load_index",
    "normalize",
    "remove_block",
    "remove_country",
    "remove_treaty",
    "spearman",
    "sweep_countries",
    "sweep_treaties",
]

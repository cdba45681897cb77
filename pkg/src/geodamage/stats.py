"""Spearman rank correlation with t-approximation or permutation p-values."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy import stats as _st


@dataclass(frozen=True)
class IndexedSeries:
    name: str
    values: Mapping[str, float]

    def __post_init__(self):
        for k, v in self.values.items():
            if not math.isfinite(v):
                raise ValueError(f"{self.name}: non-finite value for {k!r}")


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    p: float
    n: int
    method: str


def _centered_ranks(x: np.ndarray) -> np.ndarray:
    ranks = _st.rankdata(x, method="average")
    return ranks - ranks.mean()


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    num = np.sum(x * y)
    den = math.sqrt(float(np.sum(x * x)) * float(np.sum(y * y)))
    return float(min(1.0, max(-1.0, num / den)))


def _t_pvalue(r: float, n: int) -> float:
    if abs(r) >= 1.0:
        return 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return float(min(1.0, 2.0 * _st.t.sf(abs(t), n - 2)))


def spearman(
    a: IndexedSeries,
    b: IndexedSeries,
    method: str = "t",
    permutations: int = 10_000,
    seed: int = 0,
) -> CorrelationResult:
    """Correlate two series over their shared keys.

    ``method`` is ``"t"`` (Student-t with n-2 dof) or ``"permutation"``
    (two-sided, seeded shuffles of the second series' ranks).
    """
    keys = sorted(set(a.values) & set(b.values))
    n = len(keys)
    if n < 3:
        raise ValueError(f"need at least 3 shared keys, got {n}")
    x = _centered_ranks(np.array([a.values[k] for k in keys], dtype=float))
    y = _centered_ranks(np.array([b.values[k] for k in keys], dtype=float))
    if not np.any(x) or not np.any(y):
        raise ValueError("a series has zero rank variance; correlation undefined")
    r = _pearson(x, y)

    if method == "t":
        return CorrelationResult(r, _t_pvalue(r, n), n, "t-approximation")
    if method != "permutation":
        raise ValueError(f"unknown method {method!r}")
    if permutations < 1000:
        raise ValueError("permutation method needs at least 1000 permutations")
    rng = np.random.default_rng(seed)
    shuffled = rng.permuted(np.broadcast_to(y, (permutations, n)), axis=1)
    den = math.sqrt(float(np.sum(x * x)) * float(np.sum(y * y)))
    null = shuffled @ x / den
    hits = int(np.count_nonzero(np.abs(null) >= abs(r) - 1e-12))
    p = (hits + 1) / (permutations + 1)
    return CorrelationResult(r, p, n, "permutation")

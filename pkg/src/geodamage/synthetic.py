"""Seeded synthetic datasets at roughly the scale of the 2015 treaty data.

One near-universal trade treaty dominates the economic layer, as a
world trade body would; the rest are regional blocs drawn mostly from
one region with a few outside members.
"""

from __future__ import annotations

import string

import numpy as np

from .graph import Country
from .ingest import Dataset, TreatyRecord


def _codes(n: int) -> list[str]:
    letters = string.ascii_uppercase
    out = []
    for a in letters:
        for b in letters:
            for c in letters:
                out.append(a + b + c)
                if len(out) == n:
                    return out
    raise ValueError("too many countries")


def make_dataset(
    n_countries: int = 200,
    n_treaties: int = 100,
    seed: int = 0,
    regions: int = 10,
    global_members: int = 160,
    political_share: float = 0.45,
) -> Dataset:
    rng = np.random.default_rng(seed)
    codes = _codes(n_countries)
    countries = tuple(Country(i, c, f"Country {c}") for i, c in enumerate(codes))
    region = rng.integers(0, regions, size=n_countries)

    def pick(size: int, home: int) -> tuple[str, ...]:
        local = np.flatnonzero(region == home)
        k_local = min(len(local), max(2, int(round(size * 0.8))))
        chosen = set(rng.choice(local, size=k_local, replace=False).tolist())
        while len(chosen) < size:
            chosen.add(int(rng.integers(0, n_countries)))
        return tuple(sorted(codes[i] for i in chosen))

    treaties = [
        TreatyRecord("GTO", "Global Trade Organisation", "economic",
                     tuple(sorted(codes[i] for i in rng.choice(n_countries, global_members, replace=False)))),
        TreatyRecord("GPF", "Global Political Forum", "political",
                     tuple(sorted(codes[i] for i in rng.choice(n_countries, 70, replace=False)))),
    ]
    for t in range(n_treaties - len(treaties)):
        layer = "political" if rng.random() < political_share else "economic"
        if rng.random() < 0.1:
            layer = "both"
        size = int(rng.integers(3, 15))
        treaties.append(TreatyRecord(f"R{t:03d}", f"Regional bloc {t}", layer, pick(size, int(rng.integers(0, regions)))))
    return Dataset(countries, tuple(treaties))

"""CSV loaders for country registries, treaty memberships and index series.

Formats (UTF-8, header row required, exact header names):

    countries.csv       iso3,name
    treaties.csv        acronym,name,layer,members      members = "AAA;BBB;CCC"
    bilaterals.csv      iso3_a,iso3_b,layer
    classification.csv  acronym,layer                    extra columns ignored
    index.csv           iso3,value

``layer`` is political, economic or both (case-insensitive).  A treaty
tagged ``both`` becomes one political and one economic treaty.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations
from pathlib import Path

from .graph import LAYERS, Country, Layer, MultiplexNetwork, Treaty, build_network
from .stats import IndexedSeries

COUNTRY_HEADER = ("iso3", "name")
TREATY_HEADER = ("acronym", "name", "layer", "members")
BILATERAL_HEADER = ("iso3_a", "iso3_b", "layer")
CLASSIFICATION_HEADER = ("acronym", "layer")
INDEX_HEADER = ("iso3", "value")

BOTH = "both"
BUILTIN_CLASSIFICATION = "builtin"
_ISO3 = re.compile(r"^[A-Z]{3}$")


class IngestError(ValueError):
    def __init__(self, path, line: int | None, message: str):
        self.path = str(path)
        self.line = line
        self.message = message
        where = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class TreatyRecord:
    """A treaty as written in the input: its tag may be ``both``."""

    acronym: str
    name: str
    layer: str
    members: tuple[str, ...]

    def split(self) -> list[Treaty]:
        layers = LAYERS if self.layer == BOTH else (Layer.parse(self.layer),)
        return [Treaty(self.acronym, self.name, l, self.members) for l in layers]


@dataclass(frozen=True)
class DatasetAudit:
    countries: int
    deal_pairs: dict[str, int]
    edges: dict[str, int]
    political_only: int

    def rows(self) -> list[tuple[str, int]]:
        out = [("countries", self.countries)]
        out += [(f"deal_pairs_{l}", self.deal_pairs[l]) for l in self.deal_pairs]
        out += [(f"edges_{l}", self.edges[l]) for l in self.edges]
        out.append(("political_only", self.political_only))
        return out


@dataclass(frozen=True)
class Dataset:
    countries: tuple[Country, ...]
    treaties: tuple[TreatyRecord, ...]
    bilaterals: tuple[tuple[str, str, Layer], ...] = ()
    sources: dict[str, str] = field(default_factory=dict, compare=False)

    def layer_treaties(self) -> list[Treaty]:
        return [t for rec in self.treaties for t in rec.split()]

    def network(self) -> MultiplexNetwork:
        return build_network(self.countries, self.layer_treaties(), self.bilaterals)


def _read(path) -> tuple[list[tuple[int, dict[str, str]]], tuple[str, ...]]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise IngestError(path, None, f"cannot read file: {exc.strerror}") from None
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError(path, 1, "empty file, header row expected") from None
    header = tuple(h.strip().lower() for h in header)
    rows = []
    for row in reader:
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise IngestError(path, reader.line_num, f"expected {len(header)} fields, got {len(row)}")
        rows.append((reader.line_num, {h: c.strip() for h, c in zip(header, row)}))
    return rows, header


def _need_header(path, header, required) -> None:
    missing = [h for h in required if h not in header]
    if missing:
        raise IngestError(path, 1, f"missing column(s) {', '.join(missing)}; header must be {','.join(required)}")


def _layer_tag(path, line, value: str, allow_both: bool = True) -> str:
    tag = value.strip().lower()
    if not tag:
        raise IngestError(path, line, "missing layer tag")
    allowed = ("political", "economic", BOTH) if allow_both else ("political", "economic")
    if tag not in allowed:
        raise IngestError(path, line, f"invalid layer {value!r}; expected one of {', '.join(allowed)}")
    return tag


def load_countries(path) -> tuple[Country, ...]:
    rows, header = _read(path)
    _need_header(path, header, COUNTRY_HEADER)
    seen: dict[str, int] = {}
    out = []
    for line, row in rows:
        iso = row["iso3"]
        if not _ISO3.match(iso):
            raise IngestError(path, line, f"invalid iso3 code {iso!r} (three uppercase letters)")
        if iso in seen:
            raise IngestError(path, line, f"duplicate iso3 {iso!r} (first on line {seen[iso]})")
        seen[iso] = line
        out.append(Country(len(out), iso, row["name"]))
    if not out:
        raise IngestError(path, None, "no countries")
    return tuple(out)


def load_classification(path) -> dict[str, str]:
    if str(path) == BUILTIN_CLASSIFICATION:
        ref = resources.files("geodamage") / "data" / "table1_classification.csv"
        with resources.as_file(ref) as p:
            return load_classification(p)
    rows, header = _read(path)
    _need_header(path, header, CLASSIFICATION_HEADER)
    out: dict[str, str] = {}
    for line, row in rows:
        acr = row["acronym"]
        if acr in out:
            raise IngestError(path, line, f"duplicate acronym {acr!r}")
        out[acr] = _layer_tag(path, line, row["layer"])
    return out


def load_treaties(path, known: set[str], classification: dict[str, str] | None = None) -> tuple[TreatyRecord, ...]:
    rows, header = _read(path)
    _need_header(path, header, TREATY_HEADER)
    classification = classification or {}
    seen: dict[str, int] = {}
    out = []
    for line, row in rows:
        acr = row["acronym"]
        if not acr:
            raise IngestError(path, line, "empty acronym")
        if acr in seen:
            raise IngestError(path, line, f"duplicate acronym {acr!r} (first on line {seen[acr]})")
        seen[acr] = line
        tag = classification.get(acr) or _layer_tag(path, line, row["layer"])
        members = tuple(sorted({m.strip().upper() for m in row["members"].split(";") if m.strip()}))
        for m in members:
            if m not in known:
                raise IngestError(path, line, f"treaty {acr!r}: unknown country {m!r}")
        if len(members) < 2:
            raise IngestError(path, line, f"treaty {acr!r} has {len(members)} member(s); need at least 2")
        out.append(TreatyRecord(acr, row["name"], tag, members))
    if not out:
        raise IngestError(path, None, "no treaties")
    return tuple(out)


def load_bilaterals(path, known: set[str]) -> tuple[tuple[str, str, Layer], ...]:
    rows, header = _read(path)
    _need_header(path, header, BILATERAL_HEADER)
    out = []
    for line, row in rows:
        a, b = row["iso3_a"].upper(), row["iso3_b"].upper()
        for m in (a, b):
            if m not in known:
                raise IngestError(path, line, f"bilateral: unknown country {m!r}")
        if a == b:
            raise IngestError(path, line, f"bilateral {a}-{b} links a country to itself")
        tag = _layer_tag(path, line, row["layer"])
        layers = LAYERS if tag == BOTH else (Layer.parse(tag),)
        out.extend((a, b, l) for l in layers)
    return tuple(out)


def load_index(path, name: str | None = None) -> IndexedSeries:
    rows, header = _read(path)
    _need_header(path, header, INDEX_HEADER)
    values: dict[str, float] = {}
    for line, row in rows:
        iso = row["iso3"].upper()
        if iso in values:
            raise IngestError(path, line, f"duplicate iso3 {iso!r}")
        try:
            v = float(row["value"])
        except ValueError:
            raise IngestError(path, line, f"value {row['value']!r} is not a number") from None
        if v != v or v in (float("inf"), float("-inf")):
            raise IngestError(path, line, f"value {row['value']!r} is not finite")
        values[iso] = v
    return IndexedSeries(name or Path(path).stem, values)


def audit(dataset: Dataset) -> DatasetAudit:
    """Count deal pairs (before merging) and distinct edges per layer."""
    pairs = {l: 0 for l in LAYERS}
    distinct: dict[Layer, set[frozenset[str]]] = {l: set() for l in LAYERS}
    for t in dataset.layer_treaties():
        for a, b in combinations(t.members, 2):
            pairs[t.layer] += 1
            distinct[t.layer].add(frozenset((a, b)))
    for a, b, l in dataset.bilaterals:
        pairs[l] += 1
        distinct[l].add(frozenset((a, b)))
    pol, eco = distinct[Layer.POLITICAL], distinct[Layer.ECONOMIC]
    return DatasetAudit(
        len(dataset.countries),
        {str(l): pairs[l] for l in LAYERS},
        {str(l): len(distinct[l]) for l in LAYERS},
        len(pol - eco),
    )


def load_dataset(countries, treaties, bilaterals=None, classification=None) -> tuple[Dataset, DatasetAudit]:
    reg = load_countries(countries)
    known = {c.iso3 for c in reg}
    cls = load_classification(classification) if classification else None
    recs = load_treaties(treaties, known, cls)
    bil = load_bilaterals(bilaterals, known) if bilaterals else ()
    sources = {"countries": str(countries), "treaties": str(treaties)}
    if bilaterals:
        sources["bilaterals"] = str(bilaterals)
    if classification:
        sources["classification"] = str(classification)
    ds = Dataset(reg, recs, bil, sources)
    return ds, audit(ds)


def write_dataset(dataset: Dataset, directory) -> dict[str, Path]:
    """Write registries in the load format; returns the paths written."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "countries": directory / "countries.csv",
        "treaties": directory / "treaties.csv",
        "bilaterals": directory / "bilaterals.csv",
    }
    with open(paths["countries"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COUNTRY_HEADER)
        w.writerows((c.iso3, c.name) for c in dataset.countries)
    with open(paths["treaties"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TREATY_HEADER)
        w.writerows((t.acronym, t.name, t.layer, ";".join(t.members)) for t in dataset.treaties)
    with open(paths["bilaterals"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BILATERAL_HEADER)
        w.writerows((a, b, str(l)) for a, b, l in dataset.bilaterals)
    return paths

import json
import shutil

import pytest

from geodamage.graph import LAYERS, Layer
from geodamage.ingest import (
    IngestError,
    audit,
    load_classification,
    load_dataset,
    load_index,
    write_dataset,
)

from conftest import FIXTURES

EXPECTED = json.loads((FIXTURES / "expected_audit.json").read_text())


def _load(d, **kw):
    return load_dataset(d / "countries.csv", d / "treaties.csv", kw.get("bilaterals"), kw.get("classification"))


def test_fixture_audit_matches_counting_script(dataset_dir):
    ds, a = _load(dataset_dir, bilaterals=dataset_dir / "bilaterals.csv")
    assert a.countries == EXPECTED["countries"]
    assert a.deal_pairs == EXPECTED["deal_pairs"]
    assert a.edges == EXPECTED["edges"]
    assert a.political_only == EXPECTED["political_only"]
    assert len(ds.countries) == 12 and len(ds.treaties) == 7 and len(ds.bilaterals) == 2


def test_audit_consistent_with_network(dataset_dir):
    ds, a = _load(dataset_dir, bilaterals=dataset_dir / "bilaterals.csv")
    net = ds.network()
    for layer in LAYERS:
        assert net.edge_count(layer) == a.edges[str(layer)]


def test_both_tag_splits(dataset_dir):
    ds, _ = _load(dataset_dir)
    union = [t for t in ds.layer_treaties() if t.acronym == "UNION"]
    assert {t.layer for t in union} == set(LAYERS)
    assert union[0].members == union[1].members


def test_empty_bilaterals_matches_treaties_only(dataset_dir, tmp_path):
    empty = tmp_path / "bilaterals.csv"
    empty.write_text("iso3_a,iso3_b,layer\n")
    _, with_empty = _load(dataset_dir, bilaterals=empty)
    _, without = _load(dataset_dir)
    assert with_empty == without


def test_round_trip(dataset_dir, tmp_path):
    ds, _ = _load(dataset_dir, bilaterals=dataset_dir / "bilaterals.csv")
    paths = write_dataset(ds, tmp_path)
    again, _ = load_dataset(paths["countries"], paths["treaties"], paths["bilaterals"])
    assert again == ds
    assert again.network() == ds.network()


def test_builtin_classification_covers_table():
    cls = load_classification("builtin")
    assert len(cls) == 100
    assert cls["WTO"] == "economic" and cls["NATO"] == "political" and cls["EU"] == "both"


def test_classification_overrides_layer(dataset_dir, tmp_path):
    cls = tmp_path / "cls.csv"
    cls.write_text("acronym,layer\nLINK,economic\n")
    ds, a = _load(dataset_dir, classification=cls)
    link = [t for t in ds.layer_treaties() if t.acronym == "LINK"]
    assert [t.layer for t in link] == [Layer.ECONOMIC]


def test_index_loader(tmp_path):
    p = tmp_path / "fsi.csv"
    p.write_text("iso3,value\nxar,10.5\nXBO,3\n")
    s = load_index(p)
    assert s.name == "fsi" and dict(s.values) == {"XAR": 10.5, "XBO": 3.0}


COUNTRIES = "iso3,name\nAAA,A\nBBB,B\nCCC,C\n"
TREATIES = "acronym,name,layer,members\nT1,One,political,AAA;BBB\n"

REJECTIONS = {
    "duplicate_acronym": (
        COUNTRIES, TREATIES + "T1,Again,economic,AAA;CCC\n", None, "treaties.csv:3", "duplicate acronym 'T1'",
    ),
    "unknown_iso3": (
        COUNTRIES, "acronym,name,layer,members\nT1,One,political,AAA;ZZZ\n", None, "treaties.csv:2", "unknown country 'ZZZ'",
    ),
    "too_few_members": (
        COUNTRIES, "acronym,name,layer,members\nT1,One,political,AAA\n", None, "treaties.csv:2", "need at least 2",
    ),
    "missing_layer": (
        COUNTRIES, "acronym,name,layer,members\nT1,One,,AAA;BBB\n", None, "treaties.csv:2", "missing layer tag",
    ),
    "bad_layer": (
        COUNTRIES, "acronym,name,layer,members\nT1,One,military,AAA;BBB\n", None, "treaties.csv:2", "invalid layer",
    ),
    "duplicate_country": (
        COUNTRIES + "AAA,Again\n", TREATIES, None, "countries.csv:5", "duplicate iso3 'AAA'",
    ),
    "bad_iso3": (
        "iso3,name\nAAA,A\nB1,B\n", TREATIES, None, "countries.csv:3", "invalid iso3",
    ),
    "bad_header": (
        "code,name\nAAA,A\n", TREATIES, None, "countries.csv:1", "missing column(s) iso3",
    ),
    "empty_treaties": (
        COUNTRIES, "acronym,name,layer,members\n", None, "treaties.csv", "no treaties",
    ),
    "ragged_row": (
        COUNTRIES, "acronym,name,layer,members\nT1,One,political\n", None, "treaties.csv:2", "expected 4 fields",
    ),
    "bilateral_unknown": (
        COUNTRIES, TREATIES, "iso3_a,iso3_b,layer\nAAA,QQQ,economic\n", "bilaterals.csv:2", "unknown country 'QQQ'",
    ),
    "bilateral_self": (
        COUNTRIES, TREATIES, "iso3_a,iso3_b,layer\nAAA,AAA,economic\n", "bilaterals.csv:2", "to itself",
    ),
}


@pytest.mark.parametrize("case", sorted(REJECTIONS))
def test_rejections(case, tmp_path):
    countries, treaties, bilaterals, where, message = REJECTIONS[case]
    (tmp_path / "countries.csv").write_text(countries)
    (tmp_path / "treaties.csv").write_text(treaties)
    bil = None
    if bilaterals is not None:
        bil = tmp_path / "bilaterals.csv"
        bil.write_text(bilaterals)
    with pytest.raises(IngestError) as err:
        _load(tmp_path, bilaterals=bil)
    assert where in str(err.value)
    assert message in err.value.message


def test_missing_file(tmp_path):
    with pytest.raises(IngestError, match="cannot read"):
        load_dataset(tmp_path / "nope.csv", tmp_path / "nope2.csv")


def test_audit_pure_function(dataset_dir, tmp_path):
    shutil.copytree(dataset_dir, tmp_path / "d")
    a1 = _load(tmp_path / "d", bilaterals=tmp_path / "d" / "bilaterals.csv")
    a2 = _load(dataset_dir, bilaterals=dataset_dir / "bilaterals.csv")
    assert audit(a1[0]) == a2[1]

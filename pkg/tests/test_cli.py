import csv
import json
import subprocess
import sys

import pytest

from geodamage.cli import main
from geodamage.report import REPORT_COLUMNS, read_table

from conftest import FIXTURES
from oracles import spearman_definition
from test_stats import TIES_X, TIES_Y

EXPECTED = json.loads((FIXTURES / "expected_audit.json").read_text())


def data_args(d, bilaterals=True):
    args = ["--countries", str(d / "countries.csv"), "--treaties", str(d / "treaties.csv")]
    if bilaterals:
        args += ["--bilaterals", str(d / "bilaterals.csv")]
    return args


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return path


@pytest.fixture
def bridge_dataset(tmp_path):
    """Two 4-member blocs joined only through country BRG."""
    d = tmp_path / "bridge"
    d.mkdir()
    west, east = ["WAA", "WBB", "WCC", "WDD"], ["EAA", "EBB", "ECC", "EDD"]
    write_csv(d / "countries.csv", ["iso3", "name"], [(c, c) for c in west + east + ["BRG"]])
    write_csv(
        d / "treaties.csv",
        ["acronym", "name", "layer", "members"],
        [
            ("WEST", "West", "political", ";".join(west)),
            ("EAST", "East", "political", ";".join(east)),
            ("LINKW", "Link W", "political", "WDD;BRG"),
            ("LINKE", "Link E", "political", "BRG;EAA"),
            ("TRADE", "Trade", "economic", ";".join(west + east + ["BRG"])),
        ],
    )
    return d


def test_audit_prints_counts(dataset_dir, capsys):
    assert main(["audit", *data_args(dataset_dir)]) == 0
    out = capsys.readouterr().out
    assert f"edges_political       {EXPECTED['edges']['political']}" in out
    assert f"deal_pairs_economic   {EXPECTED['deal_pairs']['economic']}" in out
    assert f"political_only        {EXPECTED['political_only']}" in out


def test_audit_malformed_exit_2(dataset_dir, tmp_path, capsys):
    bad = tmp_path / "treaties.csv"
    bad.write_text("acronym,name,layer,members\nX,Y,political,XAR;NOPE\n")
    code = main(["audit", "--countries", str(dataset_dir / "countries.csv"), "--treaties", str(bad)])
    assert code == 2
    assert "unknown country 'NOPE'" in capsys.readouterr().err


def test_audit_empty_treaties_exit_2(dataset_dir, tmp_path):
    empty = tmp_path / "treaties.csv"
    empty.write_text("")
    assert main(["audit", "--countries", str(dataset_dir / "countries.csv"), "--treaties", str(empty)]) == 2


def test_missing_inputs_exit_2():
    assert main(["audit"]) == 2


def test_bad_params_exit_2(dataset_dir):
    assert main(["sweep", "countries", *data_args(dataset_dir), "--repetitions", "0"]) == 2


def test_sweep_bridge_country_first(bridge_dataset, tmp_path, capsys):
    out = tmp_path / "out"
    args = ["sweep", "countries", *data_args(bridge_dataset, False), "--layer", "political", "--out", str(out)]
    assert main(args) == 0
    rows = read_table(out / "sweep_countries_political.csv")
    assert list(rows[0]) == list(REPORT_COLUMNS)
    assert rows[0]["entity"] == "BRG" and float(rows[0]["delta-norm"]) == 1.0
    assert "  1  BRG" in capsys.readouterr().out


def test_sweep_single_treaty(tmp_path):
    d = tmp_path / "single"
    d.mkdir()
    write_csv(d / "countries.csv", ["iso3", "name"], [("AAA", "A"), ("BBB", "B"), ("CCC", "C")])
    write_csv(d / "treaties.csv", ["acronym", "name", "layer", "members"], [("ONLY", "Only", "economic", "AAA;BBB;CCC")])
    assert main(["sweep", "treaties", *data_args(d, False), "--out", str(tmp_path / "o")]) == 0
    rows = read_table(tmp_path / "o" / "sweep_treaties.csv")
    assert [(r["entity"], r["delta-norm"]) for r in rows] == [("ONLY", "1")]


def test_sweep_rerun_byte_identical(dataset_dir, tmp_path):
    out = tmp_path / "o"
    args = ["sweep", "countries", *data_args(dataset_dir), "--repetitions", "3", "--seed", "5",
            "--out", str(out), "--emit-plot-data", "--plot"]
    assert main(args) == 0
    first = {p.name: p.read_bytes() for p in out.iterdir()}
    for p in out.iterdir():
        p.unlink()
    assert main(args) == 0
    second = {p.name: p.read_bytes() for p in out.iterdir()}
    assert first == second
    assert {"sweep_countries_political.png", "plotdata_sweep_countries_economic.csv"} <= set(first)


def test_json_format_equivalent(dataset_dir, tmp_path):
    common = ["sweep", "treaties", *data_args(dataset_dir), "--repetitions", "2"]
    assert main([*common, "--out", str(tmp_path / "c")]) == 0
    assert main([*common, "--out", str(tmp_path / "j"), "--format", "json"]) == 0
    doc = json.loads((tmp_path / "j" / "sweep_treaties.json").read_text())
    assert doc["provenance"]["config"]["format"] == "json"
    assert list(doc["records"][0]) == list(REPORT_COLUMNS)
    as_csv = read_table(tmp_path / "c" / "sweep_treaties.csv")
    as_json = read_table(tmp_path / "j" / "sweep_treaties.json")
    assert len(as_csv) == len(as_json)
    for a, b in zip(as_csv, as_json):
        assert a["entity"] == b["entity"]
        assert float(a["delta"]) == float(b["delta"])


def test_provenance_header(dataset_dir, tmp_path):
    assert main(["audit", *data_args(dataset_dir), "--out", str(tmp_path)]) == 0
    text = (tmp_path / "audit.csv").read_text()
    assert text.startswith("# {")
    header = json.loads("\n".join(l[2:] for l in text.splitlines() if l.startswith("# ")))
    assert header["version"] == "0.1.0"
    assert set(header["inputs"]) == {"countries", "treaties", "bilaterals"}
    assert all(len(v["sha256"]) == 64 for v in header["inputs"].values())


def _sweep_report(dataset_dir, tmp_path):
    out = tmp_path / "s"
    assert main(["sweep", "countries", *data_args(dataset_dir), "--layer", "economic", "--out", str(out)]) == 0
    return out / "sweep_countries_economic.csv"


def test_correlate_with_itself(dataset_dir, tmp_path, capsys):
    report = _sweep_report(dataset_dir, tmp_path)
    rows = read_table(report)
    same = write_csv(tmp_path / "same.csv", ["iso3", "value"], [(r["entity"], r["delta-norm"]) for r in rows])
    capsys.readouterr()
    assert main(["correlate", "--report", str(report), "--index", str(same), "--out", str(tmp_path / "c")]) == 0
    assert capsys.readouterr().out.startswith("r=1.000000")
    res = read_table(tmp_path / "c" / "correlation.csv")[0]
    assert float(res["r"]) == 1.0 and res["n"] == "12"


def test_correlate_negated(dataset_dir, tmp_path, capsys):
    report = _sweep_report(dataset_dir, tmp_path)
    rows = read_table(report)
    neg = write_csv(tmp_path / "neg.csv", ["iso3", "value"], [(r["entity"], -float(r["delta-norm"])) for r in rows])
    capsys.readouterr()
    assert main(["correlate", "--report", str(report), "--index", str(neg)]) == 0
    assert capsys.readouterr().out.startswith("r=-1.000000")


def test_correlate_tie_fixture(tmp_path):
    codes = [f"K{chr(65 + i)}{chr(65 + i)}" for i in range(10)]
    report = tmp_path / "report.csv"
    rows = [dict(zip(REPORT_COLUMNS, ["country", c, "economic"] + ["1"] * 10 + [str(x)] + ["0"] * 5)) for c, x in zip(codes, TIES_X)]
    with open(report, "w", newline="") as fh:
        w = csv.DictWriter(fh, REPORT_COLUMNS)
        w.writeheader()
        w.writerows(rows)
    index = write_csv(tmp_path / "idx.csv", ["iso3", "value"], list(zip(codes, TIES_Y)))
    assert main(["correlate", "--report", str(report), "--index", str(index), "--out", str(tmp_path / "c")]) == 0
    r = float(read_table(tmp_path / "c" / "correlation.csv")[0]["r"])
    assert abs(r - spearman_definition(TIES_X, TIES_Y)) <= 1e-12


def test_correlate_rejects_non_report(dataset_dir, tmp_path):
    index = dataset_dir / "countries.csv"
    assert main(["correlate", "--report", str(index), "--index", str(index)]) == 2


def test_communities_command(dataset_dir, tmp_path, capsys):
    assert main(["communities", *data_args(dataset_dir), "--out", str(tmp_path)]) == 0
    assert "scope=multiplex" in capsys.readouterr().out
    rows = read_table(tmp_path / "communities_multiplex.csv")
    assert len(rows) == 24 and set(rows[0]) == {"node", "layer", "label"}
    assert main(["communities", *data_args(dataset_dir), "--scope", "layer"]) == 2


def test_module_entry_point(dataset_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "geodamage", "audit", *data_args(dataset_dir)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "countries" in proc.stdout

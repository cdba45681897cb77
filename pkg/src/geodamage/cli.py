"""Batch front end: audit, communities, sweep, correlate.

Exit codes: 0 success, 2 validation error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .community import CommunityParams, detect
from .damage import DEFAULT_SCOPE, Scope, sweep_countries, sweep_treaties
from .graph import LAYERS, MULTIPLEX, GraphError, Layer, LookupFailure
from .ingest import IngestError, load_dataset, load_index
from .report import provenance, read_table, write_reports, write_table
from .stats import IndexedSeries, spearman

log = logging.getLogger("geodamage")

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 2, 3


class ValidationError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    countries: str | None = None
    treaties: str | None = None
    bilaterals: str | None = None
    classification: str | None = None
    index: str | None = None
    report: str | None = None
    target: str | None = None
    layer: str | None = None
    scope: str | None = None
    seed: int = 0
    repetitions: int = 1
    resolution: float = 1.0
    omega: float = 1.0
    method: str = "t"
    permutations: int = 10_000
    format: str = "csv"
    out: str | None = None
    threads: int = 1
    emit_plot_data: bool = False
    plot: bool = False

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        fields = cls.__dataclass_fields__
        return cls(**{k: v for k, v in vars(ns).items() if k in fields})

    def params(self) -> CommunityParams:
        return CommunityParams(
            seed=self.seed,
            repetitions=self.repetitions,
            resolution=self.resolution,
            omega=self.omega,
        )

    def sweep_scope(self) -> Scope:
        return Scope.uniform(self.scope) if self.scope else DEFAULT_SCOPE

    def inputs(self) -> dict[str, str]:
        names = ("countries", "treaties", "bilaterals", "index", "report")
        out = {k: getattr(self, k) for k in names if getattr(self, k)}
        if self.classification and self.classification != "builtin":
            out["classification"] = self.classification
        return out

    def out_dir(self) -> Path | None:
        return Path(self.out) if self.out else None


def _prov(cfg: RunConfig) -> dict:
    return provenance(asdict(cfg), cfg.inputs())


def _load(cfg: RunConfig):
    if not cfg.countries or not cfg.treaties:
        raise ValidationError("--countries and --treaties are required")
    return load_dataset(cfg.countries, cfg.treaties, cfg.bilaterals, cfg.classification)


def cmd_audit(cfg: RunConfig) -> int:
    _, audit = _load(cfg)
    rows = [{"metric": k, "value": v} for k, v in audit.rows()]
    width = max(len(r["metric"]) for r in rows)
    for r in rows:
        print(f"{r['metric']:<{width}}  {r['value']}")
    if cfg.out_dir():
        path = cfg.out_dir() / f"audit.{cfg.format}"
        write_table(path, ("metric", "value"), rows, _prov(cfg), cfg.format)
        log.info("wrote %s", path)
    return EXIT_OK


def cmd_communities(cfg: RunConfig) -> int:
    ds, _ = _load(cfg)
    net = ds.network()
    scope = cfg.scope or MULTIPLEX
    if scope == "layer":
        if not cfg.layer:
            raise ValidationError("--scope layer needs --layer")
        target = Layer.parse(cfg.layer)
    else:
        target = MULTIPLEX
    part = detect(net, target, cfg.params())
    print(f"scope={part.scope} communities={part.count} quality={part.quality!r} seed={part.seed}")
    if cfg.out_dir():
        rows = [{"node": n, "layer": l, "label": lab} for n, l, lab in part.rows(net)]
        path = cfg.out_dir() / f"communities_{part.scope}.{cfg.format}"
        write_table(path, ("node", "layer", "label"), rows, _prov(cfg), cfg.format)
    return EXIT_OK


def _print_top(title: str, reports, k: int = 10) -> None:
    print(title)
    for rank, r in enumerate(reports[:k], 1):
        print(f"{rank:>3}  {r.entity:<10} {r.scenario.layer!s:<9} delta={r.metrics.delta:.6g}  norm={r.delta_norm:.4f}")


def _emit(cfg: RunConfig, stem: str, reports, title: str) -> None:
    out = cfg.out_dir()
    if out is None:
        return
    prov = _prov(cfg)
    write_reports(out / f"{stem}.{cfg.format}", reports, prov, cfg.format)
    if cfg.emit_plot_data:
        rows = [{"entity": r.entity, "layer": str(r.scenario.layer), "delta-norm": r.delta_norm} for r in reports]
        write_table(out / f"plotdata_{stem}.csv", ("entity", "layer", "delta-norm"), rows, prov, "csv")
    if cfg.plot:
        from .plotting import plot_ranking

        plot_ranking(reports, out / f"{stem}.png", title=title)


def cmd_sweep(cfg: RunConfig) -> int:
    ds, _ = _load(cfg)
    net = ds.network()
    params, scope = cfg.params(), cfg.sweep_scope()
    if cfg.target == "countries":
        layers = [Layer.parse(cfg.layer)] if cfg.layer else list(LAYERS)
        for layer in layers:
            reports = sweep_countries(net, layer, params, scope, cfg.threads)
            title = f"country removals, {layer} layer"
            _print_top(title, reports)
            _emit(cfg, f"sweep_countries_{layer}", reports, title)
    else:
        if not net.treaties:
            raise ValidationError("no treaties to sweep")
        reports = sweep_treaties(net, params, scope, cfg.threads)
        for layer in LAYERS:
            part = [r for r in reports if r.scenario.layer == layer]
            if part:
                _print_top(f"treaty removals, {layer} layer", part)
        _emit(cfg, "sweep_treaties", reports, "treaty removals")
    return EXIT_OK


def cmd_correlate(cfg: RunConfig) -> int:
    if not cfg.report or not cfg.index:
        raise ValidationError("--report and --index are required")
    try:
        rows = read_table(cfg.report)
        values = {}
        for row in rows:
            if row["scenario-kind"] != "country":
                continue
            if cfg.layer and row["layer"] != Layer.parse(cfg.layer).value:
                continue
            if row["entity"] in values:
                raise ValidationError(f"{cfg.report}: {row['entity']} appears twice; pass --layer")
            values[row["entity"]] = float(row["delta-norm"])
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"{cfg.report}: not a country sweep report ({exc})") from None
    damage = IndexedSeries("damage", values)
    index = load_index(cfg.index)
    res = spearman(damage, index, method=cfg.method, permutations=cfg.permutations, seed=cfg.seed)
    print(f"r={res.r:.6f} p={res.p:.6g} n={res.n} method={res.method}")
    if cfg.out_dir():
        row = {"series_a": damage.name, "series_b": index.name, "r": res.r, "p": res.p, "n": res.n, "method": res.method}
        write_table(cfg.out_dir() / f"correlation.{cfg.format}", tuple(row), [row], _prov(cfg), cfg.format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--countries", help="countries.csv (iso3,name)")
    common.add_argument("--treaties", help="treaties.csv (acronym,name,layer,members)")
    common.add_argument("--bilaterals", help="bilaterals.csv (iso3_a,iso3_b,layer)")
    common.add_argument("--classification", help="acronym,layer overrides; 'builtin' for the bundled table")
    common.add_argument("--layer", choices=[l.value for l in LAYERS])
    common.add_argument("--scope", choices=["layer", MULTIPLEX],
                        help="measure everything on this scope (default: communities multiplex, components layer)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--repetitions", type=int, default=1)
    common.add_argument("--resolution", type=float, default=1.0)
    common.add_argument("--omega", type=float, default=1.0)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", help="output directory")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--emit-plot-data", action="store_true", help="write (entity, delta-norm) tables")
    common.add_argument("--plot", action="store_true", help="render ranked bar charts as PNG")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="geodamage", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"geodamage {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("audit", parents=[common], help="validate inputs and print counts")
    sub.add_parser("communities", parents=[common], help="detect communities and write the partition")
    sw = sub.add_parser("sweep", parents=[common], help="run a removal sweep")
    sw.add_argument("target", choices=["countries", "treaties"])
    co = sub.add_parser("correlate", parents=[common], help="Spearman correlation of a sweep with an index")
    co.add_argument("--report", help="country sweep report file")
    co.add_argument("--index", help="index.csv (iso3,value)")
    co.add_argument("--method", choices=["t", "permutation"], default="t")
    co.add_argument("--permutations", type=int, default=10_000)
    return p


COMMANDS = {
    "audit": cmd_audit,
    "communities": cmd_communities,
    "sweep": cmd_sweep,
    "correlate": cmd_correlate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    cfg = RunConfig.from_args(ns)
    try:
        cfg.params()
        if cfg.threads < 1:
            raise ValidationError("--threads must be >= 1")
        return COMMANDS[cfg.command](cfg)
    except (ValidationError, IngestError, GraphError, LookupFailure, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

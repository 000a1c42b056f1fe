"""Scenario configuration, trace-file I/O, and the command-line entry points.

This is the only module that touches the filesystem.  Reports embed a hash
of the effective configuration, and all float output uses 6 significant
digits with a '.' separator so golden files are reproducible; trace CSVs
use lossless shortest-repr numbers instead, since they must round-trip.

Exit codes: 0 success, 2 config error, 3 parse error, 4 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence, Union

import numpy as np

from . import __version__
from .core import (LinkTrace, Metric, NetType, PltModel, ProbeSpec, Sample,
                   Thresholds, TIMEOUT, is_timeout)
from .errors import ConfigError, ParseError, SchemaError
from .links import AlignedTraces, SyntheticLinkSpec, align, generate_trace
from .reliability import (CurveRow, ReliabilityReport, redundancy_curves,
                          trace_report)
from .switcher import (OraclePolicy, Policy, Schedule, SinglePolicy,
                       SwitchStats, TableRow, WindowedDsmPolicy,
                       apply_schedule, oracle_schedule, reactive_table,
                       single_schedule, switch_stats, windowed_decide)

TRACE_HEADER = ["t_ms", "provider_id", "rtt_ms", "jitter_ms", "loss",
                "dl_kbps", "ul_kbps", "plt_ms", "net_type", "lat", "lon",
                "cell_id"]

DEFAULT_LAMBDA_GRID = tuple(np.round(np.linspace(0.02, 0.21, 20), 6))
DEFAULT_WINDOWS_S = (10.0, 20.0, 30.0, 40.0, 50.0, 60.0)


# ---------------------------------------------------------------------------
# Trace CSV
# ---------------------------------------------------------------------------

def _format_num(x: float) -> str:
    """Lossless, locale-independent number text; integral values drop the '.0'."""
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


def parse_trace_csv(path: str | Path, tick_ms: float = 3000.0) -> list[LinkTrace]:
    """Read a long-format trace CSV into one LinkTrace per provider.

    The header must match the schema exactly; the literal TIMEOUT (case
    sensitive) marks a timed-out RTT and empty strings mark absent optional
    fields.  Errors carry the 1-based row number.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(
                f"{path}: empty file; expected header "
                f"{','.join(TRACE_HEADER)}") from None
        if header != TRACE_HEADER:
            raise SchemaError(
                f"{path}: bad header {','.join(header)!r}; expected "
                f"{','.join(TRACE_HEADER)}")
        by_provider: dict[str, list[Sample]] = {}
        last_t: dict[str, float] = {}
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(TRACE_HEADER):
                raise ParseError(row_no,
                                 f"expected {len(TRACE_HEADER)} fields, "
                                 f"got {len(row)}")
            sample = _parse_row(row, row_no)
            pid = sample.provider_id
            if pid in last_t and sample.t <= last_t[pid]:
                raise ParseError(
                    row_no, f"t_ms {_format_num(sample.t)} not increasing "
                            f"for provider {pid!r}")
            last_t[pid] = sample.t
            by_provider.setdefault(pid, []).append(sample)
    return [LinkTrace(provider_id=pid, samples=tuple(samples), tick_ms=tick_ms)
            for pid, samples in by_provider.items()]


def _parse_row(row: list[str], row_no: int) -> Sample:
    def num(text: str, name: str) -> float | None:
        if text == "":
            return None
        try:
            return float(text)
        except ValueError:
            raise ParseError(row_no, f"bad {name}: {text!r}") from None

    t = num(row[0], "t_ms")
    if t is None:
        raise ParseError(row_no, "t_ms is mandatory")
    pid = row[1]
    if not pid:
        raise ParseError(row_no, "provider_id is mandatory")
    if row[2] == "TIMEOUT":
        rtt = TIMEOUT
    else:
        rtt = num(row[2], "rtt_ms")
        if rtt is None:
            raise ParseError(row_no, "rtt_ms is mandatory")
    net = None
    if row[8]:
        try:
            net = NetType[row[8]]
        except KeyError:
            raise ParseError(row_no, f"bad net_type: {row[8]!r}") from None
    try:
        return Sample(
            t=t, provider_id=pid, rtt=rtt,
            jitter=num(row[3], "jitter_ms"), loss=num(row[4], "loss"),
            dl_throughput=num(row[5], "dl_kbps"),
            ul_throughput=num(row[6], "ul_kbps"),
            plt=num(row[7], "plt_ms"), net_type=net,
            lat=num(row[9], "lat"), lon=num(row[10], "lon"),
            cell_id=row[11] or None)
    except ValueError as e:
        raise ParseError(row_no, str(e)) from None


def write_trace_csv(traces: Sequence[LinkTrace], path: str | Path) -> None:
    """Write traces as one long-format CSV, rows ordered by (t, provider).

    Provider order on timestamp ties follows the order of the traces
    argument.  Output is UTF-8 with LF line endings; parse/write round
    trips are lossless.
    """
    order = {tr.provider_id: i for i, tr in enumerate(traces)}
    rows = sorted(
        (s for tr in traces for s in tr.samples),
        key=lambda s: (s.t, order[s.provider_id]))
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for s in rows:
            writer.writerow(_sample_row(s))


def _sample_row(s: Sample) -> list[str]:
    def opt(v: float | None) -> str:
        return "" if v is None else _format_num(v)

    return [
        _format_num(s.t), s.provider_id,
        "TIMEOUT" if is_timeout(s.rtt) else _format_num(s.rtt),
        opt(s.jitter), opt(s.loss), opt(s.dl_throughput),
        opt(s.ul_throughput), opt(s.plt),
        s.net_type.name if s.net_type is not None else "",
        opt(s.lat), opt(s.lon), s.cell_id or "",
    ]


# ---------------------------------------------------------------------------
# Scenario configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SyntheticProvider:
    """A provider synthesized from a link spec; seed may be derived at run time."""

    spec: SyntheticLinkSpec
    explicit_seed: bool


@dataclass(frozen=True)
class TraceFileProvider:
    """A provider (or all providers) replayed from a trace CSV."""

    path: str
    provider_id: str | None = None


ProviderConfig = Union[SyntheticProvider, TraceFileProvider]


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything a scenario run needs; loaded from versioned JSON."""

    providers: tuple[ProviderConfig, ...]
    duration_ms: float
    seed: int = 0
    tick_ms: float = 3000.0
    thresholds: Thresholds = Thresholds()
    plt_model: PltModel = PltModel()
    probe_specs: tuple[ProbeSpec, ...] = ()
    policies: tuple[Policy, ...] = ()
    switch_delay_ms: float = 0.0
    windows_s: tuple[float, ...] = DEFAULT_WINDOWS_S
    baselines: tuple[str, ...] = ()
    start_provider: str | None = None
    oracle_granularity_s: float = 10.0
    staleness_bound_ms: float | None = None
    lambda_grid: tuple[float, ...] = DEFAULT_LAMBDA_GRID
    n_max: int = 4
    out_dir: str | None = None

    def __post_init__(self):
        if not self.providers:
            raise ConfigError("at least one provider is required")
        if self.duration_ms < 10 * self.tick_ms:
            raise ConfigError("duration_ms must cover at least 10 ticks")


def load_config(path: str | Path, seed_override: int | None = None
                ) -> tuple[ScenarioConfig, str]:
    """Load a scenario config; returns (config, config_hash).

    The hash covers the effective configuration, including any seed
    override, so reports are self-describing.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    if raw.get("schema") != 1:
        raise ConfigError(
            f"unsupported config schema {raw.get('schema')!r}; expected 1")
    if seed_override is not None:
        raw = {**raw, "seed": seed_override}
    digest = hashlib.sha256(
        json.dumps(raw, sort_keys=True, separators=(",", ":")).encode("utf-8")
    ).hexdigest()
    try:
        cfg = _config_from_dict(raw, path.parent)
    except ConfigError:
        raise
    except KeyError as e:
        raise ConfigError(f"missing config key: {e}") from None
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from None
    return cfg, digest


def _config_from_dict(raw: dict, base_dir: Path) -> ScenarioConfig:
    providers = []
    for i, p in enumerate(raw.get("providers", [])):
        if "trace_file" in p:
            providers.append(TraceFileProvider(
                path=str((base_dir / p["trace_file"]).resolve()),
                provider_id=p.get("id")))
        elif "synthetic" in p:
            syn = dict(p["synthetic"])
            if "id" not in p:
                raise ConfigError(f"providers[{i}]: synthetic provider needs an id")
            from .reliability import HazardParams, WeibullParams
            hazard = HazardParams(**syn.pop("hazard"))
            weibull = WeibullParams(**syn.pop("weibull"))
            explicit = "seed" in syn
            seed = syn.pop("seed", 0)
            providers.append(SyntheticProvider(
                spec=SyntheticLinkSpec(provider_id=p["id"], hazard=hazard,
                                       weibull=weibull, seed=seed, **syn),
                explicit_seed=explicit))
        else:
            raise ConfigError(
                f"providers[{i}] needs either 'synthetic' or 'trace_file'")

    policies = tuple(_policy_from_dict(d) for d in raw.get("policies", []))
    kwargs = {}
    if "thresholds" in raw:
        kwargs["thresholds"] = Thresholds(**raw["thresholds"])
    if "plt_model" in raw:
        kwargs["plt_model"] = PltModel(**raw["plt_model"])
    if "probe_specs" in raw:
        kwargs["probe_specs"] = tuple(
            ProbeSpec(transport=_transport(d.pop("transport", "TCP_LIKE")),
                      **d)
            for d in (dict(d) for d in raw["probe_specs"]))
    for key in ("seed", "tick_ms", "switch_delay_ms", "start_provider",
                "oracle_granularity_s", "staleness_bound_ms", "n_max",
                "out_dir"):
        if key in raw:
            kwargs[key] = raw[key]
    for key in ("windows_s", "baselines", "lambda_grid"):
        if key in raw:
            kwargs[key] = tuple(raw[key])
    return ScenarioConfig(providers=tuple(providers),
                          duration_ms=raw["duration_ms"],
                          policies=policies, **kwargs)


def _transport(name: str):
    from .core import Transport
    try:
        return Transport[name]
    except KeyError:
        raise ConfigError(f"bad transport {name!r}") from None


def _policy_from_dict(d: dict) -> Policy:
    kind = d.get("kind")
    if kind == "single":
        return SinglePolicy(provider_id=d["provider"])
    if kind == "windowed_dsm":
        return WindowedDsmPolicy(
            window_s=d.get("window_s", 10.0),
            probe_interval_s=d.get("probe_interval_s", 3.0))
    if kind == "oracle":
        return OraclePolicy(granularity_s=d.get("granularity_s", 10.0))
    raise ConfigError(f"unknown policy kind {kind!r}")


def _derive_seed(master: int, index: int) -> int:
    state = np.random.SeedSequence([master, index]).generate_state(2)
    return int(state.view(np.uint64)[0])


# ---------------------------------------------------------------------------
# Scenario run
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolicyResult:
    label: str
    report: ReliabilityReport
    stats: SwitchStats
    schedule: Schedule


@dataclass(frozen=True)
class ScenarioResult:
    """Everything run_scenario computes, ready for emit_report."""

    config_hash: str
    seed: int
    provider_reports: Mapping[str, ReliabilityReport]
    policy_results: tuple[PolicyResult, ...]
    table: tuple[TableRow, ...]
    curves: tuple[CurveRow, ...]
    aligned: AlignedTraces


def _policy_label(policy: Policy) -> str:
    if isinstance(policy, SinglePolicy):
        return f"single:{policy.provider_id}"
    if isinstance(policy, WindowedDsmPolicy):
        w = policy.window_s
        return f"windowed_dsm:{int(w) if float(w).is_integer() else w}"
    g = policy.granularity_s
    return f"oracle:{int(g) if float(g).is_integer() else g}"


def build_traces(cfg: ScenarioConfig) -> list[LinkTrace]:
    """Materialize every provider: synthesize or ingest, in config order."""
    traces: list[LinkTrace] = []
    for i, p in enumerate(cfg.providers):
        if isinstance(p, SyntheticProvider):
            spec = p.spec
            if not p.explicit_seed:
                spec = replace(spec, seed=_derive_seed(cfg.seed, i))
            traces.append(generate_trace(spec, cfg.duration_ms, cfg.tick_ms,
                                         cfg.plt_model))
        else:
            if not Path(p.path).is_file():
                raise ConfigError(f"trace file not found: {p.path}")
            parsed = parse_trace_csv(p.path, cfg.tick_ms)
            if p.provider_id is not None:
                parsed = [tr for tr in parsed if tr.provider_id == p.provider_id]
                if not parsed:
                    raise ConfigError(
                        f"provider {p.provider_id!r} not present in {p.path}")
            traces.extend(parsed)
    seen = set()
    for tr in traces:
        if tr.provider_id in seen:
            raise ConfigError(f"duplicate provider {tr.provider_id!r}")
        seen.add(tr.provider_id)
    return traces


def run_scenario(cfg: ScenarioConfig, config_hash: str = "") -> ScenarioResult:
    """Full pipeline: traces -> alignment -> policies -> tables and curves."""
    traces = build_traces(cfg)
    at = align(traces, cfg.tick_ms, cfg.staleness_bound_ms)
    th = cfg.thresholds
    timeout_rtt = th.availability_rtt_ms
    baselines = cfg.baselines or at.providers
    start = cfg.start_provider or at.providers[0]

    provider_reports = {tr.provider_id: trace_report(tr, th) for tr in traces}

    base_eff = {
        b: apply_schedule(single_schedule(at, b), at, cfg.switch_delay_ms,
                          composite_id=b, plt_model=cfg.plt_model)
        for b in baselines}

    policy_results = []
    for policy in cfg.policies:
        if isinstance(policy, SinglePolicy):
            sched = single_schedule(at, policy.provider_id)
        elif isinstance(policy, WindowedDsmPolicy):
            sched = windowed_decide(at, policy.window_s, start, timeout_rtt)
        else:
            sched = oracle_schedule(at, policy.granularity_s, timeout_rtt)
        label = _policy_label(policy)
        eff = apply_schedule(sched, at, cfg.switch_delay_ms,
                             composite_id=label, plt_model=cfg.plt_model)
        policy_results.append(PolicyResult(
            label=label,
            report=trace_report(eff, th),
            stats=switch_stats(sched, eff, base_eff, timeout_rtt),
            schedule=sched))

    table = reactive_table(
        at, cfg.windows_s, baselines, cfg.switch_delay_ms, start,
        cfg.oracle_granularity_s, timeout_rtt, cfg.plt_model)
    curves = redundancy_curves(cfg.lambda_grid, cfg.n_max)
    return ScenarioResult(
        config_hash=config_hash, seed=cfg.seed,
        provider_reports=provider_reports,
        policy_results=tuple(policy_results),
        table=tuple(table), curves=tuple(curves), aligned=at)


# ---------------------------------------------------------------------------
# Report emission
# ---------------------------------------------------------------------------

def _round6(x: float) -> float:
    if math.isinf(x) or math.isnan(x):
        raise ValueError(f"non-finite value in report: {x}")
    return float(f"{x:.6g}")


def _fmt6(x: float) -> str:
    return f"{_round6(x):.6g}"


def _report_dict(rep: ReliabilityReport) -> dict:
    return {
        "r_s": _round6(rep.r_s),
        "q_s": {m.value: _round6(v) for m, v in rep.q_s.items()},
        "mttf": None if rep.mttf is None else _round6(rep.mttf),
        "provider_set": list(rep.provider_set),
    }


def _table_rows(result: ScenarioResult) -> list[dict]:
    rows = []
    for row in result.table:
        d: dict = {"window_s": row.key}
        for b, v in row.improvements.items():
            d[f"improvement_vs_{b}"] = _round6(v)
        d["switches"] = row.switches
        rows.append(d)
    return rows


def _curve_rows(result: ScenarioResult) -> list[dict]:
    return [
        {"lambda": _round6(c.lam), "n": c.n,
         "reliability": _round6(c.reliability),
         "mttf_times_lambda": _round6(c.mttf_times_lambda)}
        for c in result.curves]


def report_payload(result: ScenarioResult) -> dict:
    """The full JSON report object (policies key omitted when none ran)."""
    payload = {
        "meta": {
            "config_hash": result.config_hash,
            "seed": result.seed,
            "tool_version": __version__,
        },
        "providers": {
            pid: _report_dict(rep)
            for pid, rep in result.provider_reports.items()},
        "reactive_table": _table_rows(result),
        "curves": _curve_rows(result),
    }
    if result.policy_results:
        payload["policies"] = {
            pr.label: {
                "report": _report_dict(pr.report),
                "switches": pr.stats.switch_count,
                "improvement_vs": {
                    b: _round6(v)
                    for b, v in pr.stats.improvement_vs.items()},
                "mean_effective_rtt": _round6(pr.stats.mean_effective_rtt),
            }
            for pr in result.policy_results}
    return payload


def _write_json(payload: dict, path: Path) -> None:
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def curves_csv_rows(curves: Sequence[CurveRow]) -> tuple[list[str], list[list[str]]]:
    header = ["lambda", "n", "reliability", "mttf_times_lambda"]
    rows = [[_fmt6(c.lam), str(c.n), _fmt6(c.reliability),
             _fmt6(c.mttf_times_lambda)] for c in curves]
    return header, rows


def table_csv_rows(table: Sequence[TableRow]
                   ) -> tuple[list[str], list[list[str]]]:
    baselines = list(table[0].improvements) if table else []
    header = ["window_s"] + [f"improvement_vs_{b}" for b in baselines] + ["switches"]
    rows = [
        [row.key] + [_fmt6(row.improvements[b]) for b in baselines]
        + [str(row.switches)]
        for row in table]
    return header, rows


METRIC_COLUMNS = [m for m in Metric if m is not Metric.AVAILABILITY]


def emit_report(result: ScenarioResult, fmt: str, out_dir: str | Path) -> list[Path]:
    """Write report files; JSON is a single file, CSV one file per table."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt == "json":
        path = out / "report.json"
        _write_json(report_payload(result), path)
        written.append(path)
    elif fmt == "csv":
        meta = out / "meta.json"
        _write_json(report_payload(result)["meta"], meta)
        written.append(meta)

        prov_header = ["provider", "r_s", "mttf"] + [
            f"q_s_{m.value}" for m in METRIC_COLUMNS]
        prov_rows = []
        for pid, rep in result.provider_reports.items():
            row = [pid, _fmt6(rep.r_s),
                   "" if rep.mttf is None else _fmt6(rep.mttf)]
            row += ["" if m not in rep.q_s else _fmt6(rep.q_s[m])
                    for m in METRIC_COLUMNS]
            prov_rows.append(row)
        _write_csv(out / "providers.csv", prov_header, prov_rows)
        written.append(out / "providers.csv")

        if result.policy_results:
            baselines = list(
                result.policy_results[0].stats.improvement_vs)
            header = (["policy", "switches", "mean_effective_rtt", "r_s"]
                      + [f"improvement_vs_{b}" for b in baselines])
            rows = [
                [pr.label, str(pr.stats.switch_count),
                 _fmt6(pr.stats.mean_effective_rtt), _fmt6(pr.report.r_s)]
                + [_fmt6(pr.stats.improvement_vs[b]) for b in baselines]
                for pr in result.policy_results]
            _write_csv(out / "policies.csv", header, rows)
            written.append(out / "policies.csv")

        _write_csv(out / "reactive_table.csv", *table_csv_rows(result.table))
        written.append(out / "reactive_table.csv")
        _write_csv(out / "curves.csv", *curves_csv_rows(result.curves))
        written.append(out / "curves.csv")
    else:
        raise ConfigError(f"unknown format {fmt!r}")
    return written


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser, config_required: bool = True):
    sub.add_argument("--config", required=config_required,
                     help="scenario config JSON")
    sub.add_argument("--seed", type=int, default=None,
                     help="override the config seed")
    sub.add_argument("--out", default=None,
                     help="output directory (default: config out_dir, else ./out)")
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--window", type=float, action="append", default=None,
                     help="window size in seconds; repeatable")
    sub.add_argument("--switch-delay-ms", type=float, default=None,
                     help="override the config switch delay")


def _apply_overrides(cfg: ScenarioConfig, args) -> ScenarioConfig:
    if args.window:
        cfg = replace(cfg, windows_s=tuple(args.window))
    if args.switch_delay_ms is not None:
        cfg = replace(cfg, switch_delay_ms=args.switch_delay_ms)
    return cfg


def _out_dir(args, cfg: ScenarioConfig | None = None) -> str:
    if args.out:
        return args.out
    if cfg is not None and cfg.out_dir:
        return cfg.out_dir
    return "out"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mocsim",
        description="Multi-operator connectivity simulator and analyzer")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a synthetic scenario end to end")
    _add_common(p)
    p = sub.add_parser("replay", help="run a scenario over ingested trace files")
    _add_common(p)
    p = sub.add_parser("curves", help="emit the redundancy reliability/MTTF table")
    _add_common(p, config_required=False)
    p = sub.add_parser("oracle", help="emit the windowed-vs-oracle reactive table")
    _add_common(p)
    p = sub.add_parser("validate", help="check a config and its trace files")
    _add_common(p)
    return parser


def _cmd_run(args, synthetic_only: bool) -> int:
    cfg, digest = load_config(args.config, args.seed)
    cfg = _apply_overrides(cfg, args)
    kinds = {type(p) for p in cfg.providers}
    if synthetic_only and TraceFileProvider in kinds:
        raise ConfigError("simulate requires synthetic providers only; "
                          "use replay for trace files")
    if not synthetic_only and TraceFileProvider not in kinds:
        raise ConfigError("replay requires at least one trace-file provider")
    result = run_scenario(cfg, digest)
    for path in emit_report(result, args.format, _out_dir(args, cfg)):
        print(path)
    return 0


def _cmd_curves(args) -> int:
    if args.config:
        cfg, digest = load_config(args.config, args.seed)
        grid, n_max = cfg.lambda_grid, cfg.n_max
    else:
        cfg, grid, n_max = None, DEFAULT_LAMBDA_GRID, 4
        digest = ""
    curves = redundancy_curves(grid, n_max)
    out = Path(_out_dir(args, cfg))
    out.mkdir(parents=True, exist_ok=True)
    if args.format == "json":
        path = out / "curves.json"
        rows = [
            {"lambda": _round6(c.lam), "n": c.n,
             "reliability": _round6(c.reliability),
             "mttf_times_lambda": _round6(c.mttf_times_lambda)}
            for c in curves]
        _write_json({"meta": {"config_hash": digest,
                              "tool_version": __version__},
                     "curves": rows}, path)
    else:
        _write_json({"config_hash": digest, "tool_version": __version__},
                    out / "meta.json")
        path = out / "curves.csv"
        _write_csv(path, *curves_csv_rows(curves))
    print(path)
    return 0


def _cmd_oracle(args) -> int:
    cfg, digest = load_config(args.config, args.seed)
    cfg = _apply_overrides(cfg, args)
    result = run_scenario(cfg, digest)
    out = Path(_out_dir(args, cfg))
    out.mkdir(parents=True, exist_ok=True)
    if args.format == "json":
        path = out / "reactive_table.json"
        _write_json({"meta": {"config_hash": digest, "seed": cfg.seed,
                              "tool_version": __version__},
                     "reactive_table": _table_rows(result)}, path)
    else:
        _write_json({"config_hash": digest, "seed": cfg.seed,
                     "tool_version": __version__}, out / "meta.json")
        path = out / "reactive_table.csv"
        _write_csv(path, *table_csv_rows(result.table))
    print(path)
    return 0


def _cmd_validate(args) -> int:
    cfg, digest = load_config(args.config, args.seed)
    n_traces = 0
    for p in cfg.providers:
        if isinstance(p, TraceFileProvider):
            if not Path(p.path).is_file():
                raise ConfigError(f"trace file not found: {p.path}")
            n_traces += len(parse_trace_csv(p.path, cfg.tick_ms))
    print(f"OK: {len(cfg.providers)} providers, {n_traces} ingested traces, "
          f"config hash {digest[:12]}")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_run(args, synthetic_only=True)
        if args.command == "replay":
            return _cmd_run(args, synthetic_only=False)
        if args.command == "curves":
            return _cmd_curves(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
        if args.command == "validate":
            return _cmd_validate(args)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (SchemaError, ParseError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 3
    except Exception as e:  # noqa: BLE001 - CLI boundary
        print(f"error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Subcommands cover graph generation, simulation, seed sweeps, coupled runs,
exact analysis, skew detection, and canned experiment presets.  Every
output file is deterministic for a fixed resolved configuration: floats are
written with ``repr`` (shortest round-trip form), row orders are fixed, and
each CSV gets a JSON provenance sidecar at ``<out>.json`` carrying the
resolved config and package version.  JSON reports embed the same
provenance inline.

Exit codes: 0 success, 2 validation, 3 invariant breach, 4 resource cap.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from . import __version__
from .coupling import coupled_simulate, ops_from_json
from .errors import (
    EXIT_INVARIANT,
    EXIT_OK,
    EXIT_RESOURCE,
    EXIT_VALIDATION,
    InvariantBreachError,
    NumericError,
    SizeCapError,
    SkewnetError,
    ValidationError,
)
from .exact import (
    basic_jsq_stationary,
    boundary_convergence_table,
    build_generator,
    check_min_rate_inequality,
    check_zero_mean_drift,
    stationary,
)
from .generators import (
    CdnSpec,
    DandelionSpec,
    cdn_network,
    dandelion,
    er_network,
    pod_expand,
    random_bipartite,
    to_bipartite,
)
from .graph import (
    CompatGraph,
    SkewParams,
    find_skewed_core,
    load_graph,
    save_graph,
    skewed_neighborhood,
)
from .sim import Jsq, OccupancyMetrics, Policy, PowerOfD, SimConfig, simulate, sweep

__all__ = ["ExperimentConfig", "run_preset", "main"]


# --- formatting and provenance ---------------------------------------------

def _fmt(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", newline="\n")


def _json_text(payload: Mapping[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _run_id(resolved: Mapping[str, Any]) -> str:
    digest = hashlib.sha256(json.dumps(resolved, sort_keys=True).encode())
    return digest.hexdigest()[:12]


def _provenance(command: str, resolved: Mapping[str, Any], **extra: Any) -> dict[str, Any]:
    out = {
        "command": command,
        "config": dict(resolved),
        "version": __version__,
    }
    out.update(extra)
    return out


def _write_sidecar(out_path: Path, payload: Mapping[str, Any]) -> None:
    Path(str(out_path) + ".json").write_text(_json_text(payload), newline="\n")


# --- config files -----------------------------------------------------------

def _load_config_file(path: str) -> dict[str, Any]:
    p = Path(path)
    if not p.exists():
        raise ValidationError(f"config file not found: {path}")
    text = p.read_text()
    if p.suffix == ".json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValidationError(f"config {path}: {e}") from None
    else:
        try:
            import tomllib  # py >= 3.11
        except ModuleNotFoundError:
            import tomli as tomllib
        try:
            doc = tomllib.loads(text)
        except tomllib.TOMLDecodeError as e:
            raise ValidationError(f"config {path}: {e}") from None
    if not isinstance(doc, dict):
        raise ValidationError(f"config {path}: top level must be a table")
    return doc


def _apply_config_section(parser: argparse.ArgumentParser, section: Mapping[str, Any],
                          command: str) -> None:
    valid = {a.dest for a in parser._actions}
    for key, value in section.items():
        dest = key.replace("-", "_")
        if dest not in valid:
            raise ValidationError(f"config field {command}.{key} is not a known option")
        parser.set_defaults(**{dest: value})


def _parse_policy(text: str) -> Policy:
    if text == "jsq":
        return Jsq()
    if text.startswith("pod:"):
        try:
            return PowerOfD(int(text.split(":", 1)[1]))
        except ValueError:
            raise ValidationError(f"bad policy {text!r}; want jsq or pod:<d>") from None
    raise ValidationError(f"unknown policy {text!r}; want jsq or pod:<d>")


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok != "")
    except ValueError:
        raise ValidationError(f"bad integer list {text!r}") from None


def _require(args: argparse.Namespace, *dests: str) -> None:
    # Required-through-config: argparse required= would reject runs that
    # supply the value via --config, so presence is checked after parsing.
    for dest in dests:
        if getattr(args, dest, None) is None:
            flag = "--" + dest.replace("_", "-")
            raise ValidationError(f"missing required option {flag}")


# --- generate ---------------------------------------------------------------

def _cmd_generate(args: argparse.Namespace) -> int:
    _require(args, "out")
    fam = args.family
    if fam == "dandelion":
        g = dandelion(DandelionSpec(n=args.n, boundary=int(args.b), central=args.c,
                                    arrival=args.lam, service=args.mu))
    elif fam == "basic":
        g = dandelion(DandelionSpec(n=1, boundary=int(args.b), central=0,
                                    arrival=args.lam, service=args.mu))
    elif fam == "cdn":
        g = cdn_network(CdnSpec(clusters=args.clusters,
                                edge_per_cluster=args.edge_per_cluster,
                                origin_count=args.origin_count,
                                load=args.load,
                                hot_multiplier=args.hot_multiplier,
                                edge_service=args.edge_mu,
                                origin_service=args.origin_mu))
    elif fam == "random-bipartite":
        g = random_bipartite(args.n, args.b, seed=args.seed, arrival=args.lam,
                             service=args.mu, stabilize=args.stabilize)
    elif fam == "er":
        g = to_bipartite(er_network(args.n, seed=args.seed, arrival=args.lam,
                                    service=args.mu))
    elif fam == "pod-expand":
        if args.graph is None:
            raise ValidationError("pod-expand needs -g/--graph with the source graph")
        g = pod_expand(load_graph(args.graph), args.d_sample)
    else:  # argparse choices guard this
        raise ValidationError(f"unknown family {fam!r}")
    save_graph(g, args.out)
    return EXIT_OK


# --- simulate / sweep -------------------------------------------------------

def _sim_config(args: argparse.Namespace, seed: int) -> SimConfig:
    return SimConfig(
        horizon=args.horizon,
        warmup_fraction=args.warmup,
        seed=seed,
        tail_ks=_parse_int_list(args.tail_k) if args.tail_k else (),
        n_batches=args.batches,
        max_events=args.max_events,
        sample_every=args.sample_every,
        min_track_group=args.min_track_group,
        min_track_threshold=args.min_track_threshold,
    )


def _param_columns(g: CompatGraph) -> dict[str, Any]:
    params = g.meta.get("params", {})
    return {k: params[k] for k in sorted(params)} if isinstance(params, dict) else {}


def _metrics_rows(g: CompatGraph, m: OccupancyMetrics, run_id: str,
                  params: Mapping[str, Any], ks: Sequence[int],
                  ) -> tuple[list[str], list[list[Any]]]:
    header = ["run_id", *params.keys(), "server_id", "group", "mean_queue",
              *(f"p_ge_{k}" for k in ks), "sim_time", "events"]
    rows = []
    for u in range(g.n_servers):
        rows.append([
            run_id, *params.values(), u, g.server_groups[u],
            float(m.mean_queue[u]),
            *(float(m.tail_freq[k][u]) for k in ks),
            m.sim_time, m.events,
        ])
    return header, rows


def _cmd_simulate(args: argparse.Namespace) -> int:
    _require(args, "graph", "out")
    g = load_graph(args.graph)
    policy = _parse_policy(args.policy)
    cfg = _sim_config(args, args.seed)
    resolved = {
        "graph": str(args.graph), "policy": args.policy, "horizon": args.horizon,
        "warmup": args.warmup, "seed": args.seed, "tail_k": args.tail_k,
        "batches": args.batches, "max_events": args.max_events,
        "sample_every": args.sample_every, "min_track_group": args.min_track_group,
        "min_track_threshold": args.min_track_threshold,
    }
    m = simulate(g, policy, cfg)
    ks = sorted(cfg.tail_ks)
    header, rows = _metrics_rows(g, m, _run_id(resolved), _param_columns(g), ks)
    out = Path(args.out)
    _write_csv(out, header, rows)
    extra: dict[str, Any] = {"graph_meta": g.meta, "partial": m.partial}
    if m.min_track_fraction is not None:
        extra["min_track_fraction"] = m.min_track_fraction
    _write_sidecar(out, _provenance("simulate", resolved, **extra))
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    _require(args, "graph", "out")
    g = load_graph(args.graph)
    policy = _parse_policy(args.policy)
    cfg = _sim_config(args, args.seed)
    resolved = {
        "graph": str(args.graph), "policy": args.policy, "horizon": args.horizon,
        "warmup": args.warmup, "seed": args.seed, "seeds": args.seeds,
        "tail_k": args.tail_k, "batches": args.batches, "workers": args.workers,
    }
    points = [({"seed_index": i}, g) for i in range(args.seeds)]
    rows_out = sweep(points, policy, cfg, workers=args.workers)
    ks = sorted(cfg.tail_ks)
    params = _param_columns(g)
    # Worker count is an execution detail; the rows must not depend on it.
    run_id = _run_id({k: v for k, v in resolved.items() if k != "workers"})
    header = ["run_id", "seed", *params.keys(), "server_id", "group", "mean_queue",
              *(f"p_ge_{k}" for k in ks), "sim_time", "events"]
    rows = []
    for r in rows_out:
        for u in range(g.n_servers):
            rows.append([
                run_id, r.seed, *params.values(), u, g.server_groups[u],
                float(r.metrics.mean_queue[u]),
                *(float(r.metrics.tail_freq[k][u]) for k in ks),
                r.metrics.sim_time, r.metrics.events,
            ])
    out = Path(args.out)
    _write_csv(out, header, rows)
    _write_sidecar(out, _provenance("sweep", resolved, graph_meta=g.meta))
    return EXIT_OK


# --- couple -----------------------------------------------------------------

def _cmd_couple(args: argparse.Namespace) -> int:
    _require(args, "graph", "ops")
    g = load_graph(args.graph)
    ops = ops_from_json(Path(args.ops).read_text())
    resolved = {
        "graph": str(args.graph), "ops": str(args.ops), "events": args.events,
        "seeds": args.seeds, "seed": args.seed, "horizon": args.horizon,
    }
    per_seed = []
    total_violations = 0
    total_events = 0
    pairs: list[list[int]] = []
    for i in range(args.seeds):
        # Event cap binds first, so average over the whole path.
        cfg = SimConfig(horizon=args.horizon, warmup_fraction=0.0,
                        seed=args.seed + i, max_events=args.events)
        m1, m2, rep = coupled_simulate(g, ops, cfg)
        pairs = [list(p) for p in rep.pairs]
        total_violations += rep.violations
        total_events += rep.events
        entry: dict[str, Any] = {
            "seed": args.seed + i,
            "events": rep.events,
            "violations": rep.violations,
            "arrivals": [m1.arrivals, m2.arrivals],
            "departures": [m1.departures, m2.departures],
            "mean_queue_total": [float(m1.mean_queue.sum()), float(m2.mean_queue.sum())],
        }
        if rep.first_violation is not None:
            entry["first_violation"] = rep.first_violation
        per_seed.append(entry)
    report = _provenance(
        "couple", resolved,
        violations=total_violations,
        events=total_events,
        tracked_pairs=pairs,
        per_seed=per_seed,
    )
    text = _json_text(report)
    if args.out:
        Path(args.out).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)
    if total_violations > 0:
        raise InvariantBreachError(
            f"{total_violations} dominance violations across {args.seeds} seeds")
    return EXIT_OK


# --- exact ------------------------------------------------------------------

_CHECK_TOKENS = {"drift": "drift", "minrate": "minrate",
                 "convergence": "convergence", "thm2": "convergence"}


def _cmd_exact(args: argparse.Namespace) -> int:
    _require(args, "graph", "cap")
    g = load_graph(args.graph)
    tokens = [t for t in (args.checks.split(",") if args.checks else []) if t]
    checks = []
    for t in tokens:
        if t not in _CHECK_TOKENS:
            raise ValidationError(
                f"unknown check {t!r}; want drift, minrate, or convergence")
        name = _CHECK_TOKENS[t]
        if name not in checks:
            checks.append(name)
    resolved = {
        "graph": str(args.graph), "cap": args.cap, "checks": args.checks,
        "seed": args.seed, "drift_functions": args.drift_functions,
    }
    chain = build_generator(g, args.cap)
    dist = stationary(chain)
    report: dict[str, Any] = {
        "states": chain.n_states,
        "residual": dist.residual,
        "method": dist.method,
        "boundary_mass": dist.boundary_mass,
        "mean_queue": [float(v) for v in
                       (dist.pi @ chain.states.astype(float))],
    }
    breach = False
    if "drift" in checks:
        rng = np.random.default_rng(args.seed)
        worst = 0.0
        for _ in range(args.drift_functions):
            values = rng.uniform(-1.0, 1.0, size=chain.n_states)
            worst = max(worst, check_zero_mean_drift(chain, dist, values))
        report["drift"] = {"functions": args.drift_functions, "max_abs": worst,
                           "threshold": 1e-8, "holds": bool(worst < 1e-8)}
        breach = breach or worst >= 1e-8
    if "minrate" in checks:
        entries = []
        for u in range(g.n_servers):
            res = check_min_rate_inequality(chain, dist, u)
            entries.append({"server": u, "lhs": res.lhs,
                            "service_rate": res.service_rate, "holds": res.holds})
            breach = breach or not res.holds
        report["minrate"] = entries
    if "convergence" in checks:
        meta = g.meta if g.meta.get("family") == "dandelion" else None
        if meta is None:
            raise ValidationError(
                "convergence distances need a graph built by the dandelion generator")
        p = meta["params"]
        if p["n"] < 2 or p["boundary"] < 1:
            raise ValidationError("convergence distances need n >= 2 and boundary >= 1")
        rows = boundary_convergence_table(
            [p["n"]], p["boundary"], p["central"], p["arrival"], p["service"],
            cap=args.cap)
        r = rows[0]
        report["distances"] = [{
            "n": r.n, "marginal_tv": r.marginal_tv, "joint_tv": r.joint_tv,
            "m_count": r.m_count, "m_count_bound": r.m_count_bound,
            "boundary_mass": r.boundary_mass,
        }]
        breach = breach or r.m_count > r.m_count_bound + 1e-9
    payload = _provenance("exact", resolved, **report)
    text = _json_text(payload)
    if args.out:
        Path(args.out).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)
    if breach:
        raise InvariantBreachError("an exactness check failed; see report")
    return EXIT_OK


# --- detect-skew ------------------------------------------------------------

def _cmd_detect_skew(args: argparse.Namespace) -> int:
    _require(args, "graph", "max_degree", "max_service", "out")
    g = load_graph(args.graph)
    params = SkewParams(max_degree=args.max_degree,
                        min_arrival_rate=args.min_arrival,
                        max_service_rate=args.max_service)
    resolved = {
        "graph": str(args.graph), "max_degree": args.max_degree,
        "min_arrival": args.min_arrival, "max_service": args.max_service,
        "core_from": args.core_from,
    }
    rows = []
    for u in range(g.n_servers):
        rows.append([u, int(g.server_degrees[u]),
                     len(skewed_neighborhood(g, u, params))])
    out = Path(args.out)
    _write_csv(out, ["server_id", "degree", "skew_size"], rows)
    extra: dict[str, Any] = {"graph_meta": g.meta}
    if args.core_from is not None:
        core, disp = find_skewed_core(g, args.core_from, params,
                                      drop_fraction=args.drop_fraction)
        extra["core"] = {"servers": list(core), "dispatchers": list(disp)}
    _write_sidecar(out, _provenance("detect-skew", resolved, **extra))
    return EXIT_OK


# --- presets ----------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved preset run: name, parameter overrides, seed, output directory."""

    preset: str
    seed: int = 0
    outdir: str = "."
    tier: str = "smoke"
    workers: int = 1
    params: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"preset": self.preset, "seed": self.seed, "outdir": self.outdir,
                "tier": self.tier, "workers": self.workers, "params": dict(self.params)}

    @staticmethod
    def from_dict(doc: Mapping[str, Any]) -> "ExperimentConfig":
        known = {"preset", "seed", "outdir", "tier", "workers", "params"}
        bad = set(doc) - known
        if bad:
            raise ValidationError(f"unknown config fields: {sorted(bad)}")
        if "preset" not in doc:
            raise ValidationError("preset name is required")
        return ExperimentConfig(
            preset=str(doc["preset"]),
            seed=int(doc.get("seed", 0)),
            outdir=str(doc.get("outdir", ".")),
            tier=str(doc.get("tier", "smoke")),
            workers=int(doc.get("workers", 1)),
            params=dict(doc.get("params", {})),
        )


_DANDELION_DEFAULTS: dict[str, Any] = {
    "b": 3, "c": 4, "lam": 2.85, "mu": 1.0,
    "n_list": (4, 8, 16, 32, 64), "seeds": 5,
    "horizon": 2e4, "warmup": 0.25, "ref_cap": 70,
}

_CDN_DEFAULTS: dict[str, Any] = {
    "clusters": 50, "edge_per_cluster": 10, "origin_count": 10,
    "load": 0.9, "hot_multiplier": 5.0, "seeds": 3,
    "horizon": 2000.0, "warmup": 0.25, "samples": 200, "min_level": 7,
}

_CDN_LONG: dict[str, Any] = {
    "clusters": 1000, "edge_per_cluster": 10, "origin_count": 100,
    "horizon": 20000.0, "seeds": 1,
}

_RB_SKEW_DEFAULTS: dict[str, Any] = {
    "b": 2.0, "max_degree": 3, "lam": 0.5, "mu": 1.0,
    "n_list": (100, 1000, 10000), "seeds": 20,
}

_ER_SKEW_DEFAULTS: dict[str, Any] = {
    "max_degree": 2, "lam": 0.5, "mu": 1.0,
    "n_list": (1000, 10000, 100000), "seeds": 20,
}


def _preset_params(defaults: Mapping[str, Any], overrides: Mapping[str, Any],
                   name: str) -> dict[str, Any]:
    bad = set(overrides) - set(defaults)
    if bad:
        raise ValidationError(f"unknown params for preset {name}: {sorted(bad)}")
    out = dict(defaults)
    out.update(overrides)
    return out


def _preset_dandelion(cfg: ExperimentConfig, outdir: Path) -> dict[str, Any]:
    p = _preset_params(_DANDELION_DEFAULTS, cfg.params, cfg.preset)
    n_list = tuple(int(n) for n in p["n_list"])
    seeds = int(p["seeds"])
    # Per-server stationary mean of the isolated single-dispatcher system.
    ref_chain, ref_dist = basic_jsq_stationary(
        int(p["b"]), float(p["lam"]), float(p["mu"]), cap=int(p["ref_cap"]))
    per_server = ref_dist.pi @ ref_chain.states.astype(float)
    basic_ref = float(per_server.mean())

    points = []
    for n in n_list:
        g = dandelion(DandelionSpec(n=n, boundary=int(p["b"]), central=int(p["c"]),
                                    arrival=float(p["lam"]), service=float(p["mu"])))
        for s in range(seeds):
            points.append(({"n": n, "rep": s}, g))
    # central_min is the exact time average of the min-over-centrals process,
    # the quantity whose growth in n signals saturation.
    cfg_sim = SimConfig(horizon=float(p["horizon"]), warmup_fraction=float(p["warmup"]),
                        seed=cfg.seed, min_track_group="central")
    rows_out = sweep(points, Jsq(), cfg_sim, workers=cfg.workers)
    # Seed averages ride along in the CSV so that plots need not aggregate.
    bm_by_n: dict[int, list[float]] = {}
    cm_by_n: dict[int, list[float]] = {}
    for r in rows_out:
        bm_by_n.setdefault(r.params["n"], []).append(r.metrics.group_stats["boundary"].mean)
        cm_by_n.setdefault(r.params["n"], []).append(r.metrics.min_track_average)
    bm_avg = {n: float(np.mean(v)) for n, v in bm_by_n.items()}
    cm_avg = {n: float(np.mean(v)) for n, v in cm_by_n.items()}
    rows = []
    for r in rows_out:
        stats = r.metrics.group_stats
        n = r.params["n"]
        rows.append([
            n, r.seed,
            stats["boundary"].mean,
            r.metrics.min_track_average, stats["central"].mean, stats["central"].max,
            bm_avg[n], cm_avg[n], basic_ref,
        ])
    _write_csv(outdir / "dandelion-sweep.csv",
               ["n", "seed", "boundary_mean", "central_min", "central_mean",
                "central_max", "boundary_mean_avg", "central_min_avg", "basic_ref"],
               rows)
    return {"rows": len(rows), "basic_ref": basic_ref,
            "files": ["dandelion-sweep.csv"]}


def _preset_cdn(cfg: ExperimentConfig, outdir: Path) -> dict[str, Any]:
    defaults = dict(_CDN_DEFAULTS)
    if cfg.tier == "long":
        defaults.update(_CDN_LONG)
    p = _preset_params(defaults, cfg.params, cfg.preset)
    g = cdn_network(CdnSpec(clusters=int(p["clusters"]),
                            edge_per_cluster=int(p["edge_per_cluster"]),
                            origin_count=int(p["origin_count"]),
                            load=float(p["load"]),
                            hot_multiplier=float(p["hot_multiplier"])))
    horizon = float(p["horizon"])
    rows = []
    summaries = []
    for s in range(int(p["seeds"])):
        cfg_sim = SimConfig(
            horizon=horizon, warmup_fraction=float(p["warmup"]), seed=cfg.seed + s,
            sample_every=horizon / int(p["samples"]),
            min_track_group="origin", min_track_threshold=int(p["min_level"]))
        m = simulate(g, Jsq(), cfg_sim)
        ts = m.samples
        stats = m.group_stats
        for i, t in enumerate(ts.times):
            rows.append([
                cfg.seed + s, float(t),
                float(ts.group_mean["edge"][i]),
                float(ts.group_min["origin"][i]),
                float(ts.group_mean["origin"][i]),
                float(ts.group_max["origin"][i]),
                stats["edge"].mean,
                stats["origin"].min, stats["origin"].mean, stats["origin"].max,
            ])
        summaries.append({
            "seed": cfg.seed + s,
            "edge_mean_tavg": stats["edge"].mean,
            "origin_mean_tavg": stats["origin"].mean,
            "origin_edge_ratio": stats["origin"].mean / stats["edge"].mean
            if stats["edge"].mean > 0 else float("inf"),
            "min_level": int(p["min_level"]),
            "min_track_fraction": m.min_track_fraction,
        })
    _write_csv(outdir / "cdn.csv",
               ["seed", "time", "edge_mean", "origin_min", "origin_mean",
                "origin_max", "edge_mean_tavg", "origin_min_tavg",
                "origin_mean_tavg", "origin_max_tavg"],
               rows)
    return {"rows": len(rows), "per_seed": summaries, "files": ["cdn.csv"]}


def _skew_size_rows(graphs: Sequence[tuple[int, int, CompatGraph]],
                    params: SkewParams) -> list[list[Any]]:
    # One row per (n, seed): the most skewed server and the median over seeds
    # is appended per n afterwards.
    raw = []
    for n, seed, g in graphs:
        best_size = -1
        best_u = 0
        for u in range(g.n_servers):
            size = len(skewed_neighborhood(g, u, params))
            if size > best_size:
                best_size = size
                best_u = u
        raw.append([n, seed, int(g.server_degrees[best_u]), best_size])
    by_n: dict[int, list[int]] = {}
    for n, _, _, size in raw:
        by_n.setdefault(n, []).append(size)
    med = {n: float(np.median(v)) for n, v in by_n.items()}
    return [[n, seed, deg, size, med[n]] for n, seed, deg, size in raw]


def _preset_random_bipartite_skew(cfg: ExperimentConfig, outdir: Path) -> dict[str, Any]:
    p = _preset_params(_RB_SKEW_DEFAULTS, cfg.params, cfg.preset)
    alpha = SkewParams(int(p["max_degree"]), float(p["lam"]), float(p["mu"]))
    graphs = []
    idx = 0
    for n in tuple(int(v) for v in p["n_list"]):
        for s in range(int(p["seeds"])):
            graphs.append((n, cfg.seed + idx,
                           random_bipartite(n, float(p["b"]), seed=cfg.seed + idx,
                                            arrival=float(p["lam"]),
                                            service=float(p["mu"]))))
            idx += 1
    rows = _skew_size_rows(graphs, alpha)
    _write_csv(outdir / "random-bipartite-skew.csv",
               ["n", "seed", "degree", "skew_size", "median_skew_size"], rows)
    return {"rows": len(rows), "files": ["random-bipartite-skew.csv"]}


def _preset_er_skew(cfg: ExperimentConfig, outdir: Path) -> dict[str, Any]:
    p = _preset_params(_ER_SKEW_DEFAULTS, cfg.params, cfg.preset)
    alpha = SkewParams(int(p["max_degree"]), float(p["lam"]), float(p["mu"]))
    graphs = []
    idx = 0
    for n in tuple(int(v) for v in p["n_list"]):
        for s in range(int(p["seeds"])):
            sg = er_network(n, seed=cfg.seed + idx, arrival=float(p["lam"]),
                            service=float(p["mu"]))
            graphs.append((n, cfg.seed + idx, to_bipartite(sg)))
            idx += 1
    rows = _skew_size_rows(graphs, alpha)
    _write_csv(outdir / "er-skew.csv",
               ["n", "seed", "degree", "skew_size", "median_skew_size"], rows)
    return {"rows": len(rows), "files": ["er-skew.csv"]}


_PRESETS = {
    "dandelion-sweep": _preset_dandelion,
    "cdn": _preset_cdn,
    "random-bipartite-skew": _preset_random_bipartite_skew,
    "er-skew": _preset_er_skew,
}


def run_preset(cfg: ExperimentConfig) -> dict[str, Any]:
    """Run one canned experiment; returns the summary written to the sidecar."""
    if cfg.preset == "custom":
        raise ValidationError(
            "custom preset: invoke the individual subcommands instead")
    if cfg.preset not in _PRESETS:
        raise ValidationError(
            f"unknown preset {cfg.preset!r}; want one of {sorted(_PRESETS)}")
    if cfg.tier not in ("smoke", "long"):
        raise ValidationError(f"unknown tier {cfg.tier!r}; want smoke or long")
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    summary = _PRESETS[cfg.preset](cfg, outdir)
    payload = _provenance("preset", cfg.to_dict(), **summary)
    (outdir / f"{cfg.preset}.json").write_text(_json_text(payload), newline="\n")
    return payload


def _cmd_preset(args: argparse.Namespace) -> int:
    overrides: dict[str, Any] = {}
    for item in args.param or []:
        if "=" not in item:
            raise ValidationError(f"bad --param {item!r}; want key=value")
        key, value = item.split("=", 1)
        try:
            overrides[key] = json.loads(value)
        except json.JSONDecodeError:
            overrides[key] = value
    cfg = ExperimentConfig(
        preset=args.name, seed=args.seed, outdir=args.outdir,
        tier=args.tier, workers=args.workers,
        params={**args.params, **overrides} if isinstance(args.params, dict)
        else overrides,
    )
    run_preset(cfg)
    return EXIT_OK


# --- parser wiring ----------------------------------------------------------

def _build_parser(config: Mapping[str, Any]) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skewnet",
        allow_abbrev=False,
        description="Load balancing on bipartite compatibility graphs: "
                    "generate, simulate, analyze.")
    parser.add_argument("--config", "-c", help="TOML or JSON config file; "
                        "flags override its values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a graph and save it as JSON")
    p.add_argument("family", choices=["dandelion", "basic", "cdn",
                                      "random-bipartite", "er", "pod-expand"])
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--b", type=float, default=1.0,
                   help="boundary servers (dandelion/basic) or mean degree (random-bipartite)")
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--clusters", type=int, default=50)
    p.add_argument("--edge-per-cluster", type=int, default=10)
    p.add_argument("--origin-count", type=int, default=10)
    p.add_argument("--load", type=float, default=0.9)
    p.add_argument("--hot-multiplier", type=float, default=5.0)
    p.add_argument("--edge-mu", type=float, default=1.0)
    p.add_argument("--origin-mu", type=float, default=1.0)
    p.add_argument("--stabilize", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--graph", "-g", help="source graph (pod-expand)")
    p.add_argument("--d-sample", type=int, default=2)
    p.add_argument("--out", "-o", default=None)
    p.set_defaults(func=_cmd_generate)

    def add_sim_flags(q: argparse.ArgumentParser) -> None:
        q.add_argument("--graph", "-g", default=None)
        q.add_argument("--policy", default="jsq", help="jsq or pod:<d>")
        q.add_argument("--horizon", type=float, default=1e4)
        q.add_argument("--warmup", type=float, default=0.25)
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--tail-k", default="",
                       help="comma-separated occupancy thresholds, e.g. 1,5,10")
        q.add_argument("--batches", type=int, default=20)
        q.add_argument("--max-events", type=int, default=None)
        q.add_argument("--sample-every", type=float, default=None)
        q.add_argument("--min-track-group", default=None)
        q.add_argument("--min-track-threshold", type=int, default=0)
        q.add_argument("--out", "-o", default=None)

    p = sub.add_parser("simulate", help="one run, per-server metrics CSV")
    add_sim_flags(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="seed-replicated runs of one graph")
    add_sim_flags(p)
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("couple", help="coupled original-vs-transformed run")
    p.add_argument("--graph", "-g", default=None)
    p.add_argument("--ops", default=None, help="transform pipeline JSON file")
    p.add_argument("--events", type=int, default=10000)
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon", type=float, default=1e9,
                   help="time cap; the event cap usually binds first")
    p.add_argument("--out", "-o", default=None,
                   help="report path; stdout when omitted")
    p.set_defaults(func=_cmd_couple)

    p = sub.add_parser("exact", help="truncated-chain stationary analysis")
    p.add_argument("--graph", "-g", default=None)
    p.add_argument("-K", "--cap", dest="cap", type=int, default=None)
    p.add_argument("--checks", default="",
                   help="comma-separated: drift, minrate, convergence")
    p.add_argument("--drift-functions", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o", default=None)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("detect-skew", help="per-server skewed-neighborhood sizes")
    p.add_argument("--graph", "-g", default=None)
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--min-arrival", type=float, default=0.0)
    p.add_argument("--max-service", type=float, default=None)
    p.add_argument("--core-from", type=int, default=None,
                   help="grow a server core from this seed server")
    p.add_argument("--drop-fraction", type=float, default=0.5)
    p.add_argument("--out", "-o", default=None)
    p.set_defaults(func=_cmd_detect_skew)

    p = sub.add_parser("preset", help="canned experiment producing CSV artifacts")
    p.add_argument("name", choices=[*sorted(_PRESETS), "custom"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--outdir", "-o", default=".")
    p.add_argument("--tier", choices=["smoke", "long"], default="smoke")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--param", action="append", default=[],
                   help="override a preset parameter, key=value (repeatable)")
    p.set_defaults(func=_cmd_preset, params={})

    # Config file values become defaults; explicit flags still win.
    if config:
        for cmd, section in config.items():
            if cmd not in sub.choices:
                raise ValidationError(f"config section [{cmd}] is not a subcommand")
            if not isinstance(section, dict):
                raise ValidationError(f"config section [{cmd}] must be a table")
            _apply_config_section(sub.choices[cmd], section, cmd)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # Pre-scan for --config so its values can seed the parser defaults.
    config: dict[str, Any] = {}
    try:
        pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
        pre.add_argument("--config", "-c", default=None)
        known, _ = pre.parse_known_args(argv)
        if known.config:
            config = _load_config_file(known.config)
        parser = _build_parser(config)
        args = parser.parse_args(argv)
        return args.func(args)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SizeCapError, NumericError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except InvariantBreachError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except SkewnetError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``seminalrank {synth,rank,evaluate,bias,similarity,snapshots}``.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig
from .evaluation import AgeGrouping, EvalReport, bias_profile, spearman_matrix
from .export import read_scores, write_scores
from .metrics import tune_citerank_params
from .network import (
    DataError, load_network, load_seminal, median_indegree, snapshot_cutoffs, snapshot,
    time_to_k_citations, write_edges, write_nodes, write_seminal,
)
from .pipeline import evaluate, rank_all
from .registry import MetricRunner, base_label
from .scores import ConvergenceError
from .synth import generate_synthetic, write_quality

log = logging.getLogger("seminalrank")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _require(cfg: RunConfig, *keys):
    for k in keys:
        p = getattr(cfg, k)
        if p is None:
            raise UsageError(f"missing path: {k}")
        if not Path(p).exists():
            raise UsageError(f"{k} path does not exist: {p}")


def _load(cfg: RunConfig, seminal=False):
    _require(cfg, "nodes", "edges", *(("seminal",) if seminal else ()))
    net, summary = load_network(cfg.nodes, cfg.edges)
    log.info("loaded N=%d E=%d (rejected %d)", net.N, net.E, summary.rejected)
    sem = None
    if seminal:
        sem = load_seminal(cfg.seminal, net)
        if sem.S == 0:
            raise DataError("no seminal id resolves to the network: " + ", ".join(sem.unresolved[:50]))
    return net, summary, sem


def _configs(cfg: RunConfig, net):
    configs = {b: cfg.metric_config(b) for b in ("P", "T", "L", "CI", "HITS")}
    tuning = cfg.citerank_tuning()
    tuned = None
    if tuning and any(base_label(m)[0] == "T" for m in cfg.metrics):
        alphas, taus, window = tuning
        a, tau, _ = tune_citerank_params(net, alphas, taus, window, configs["T"])
        base = configs["T"]
        configs["T"] = type(base)(a, tau, base.eps, base.max_iter, base.ci_level)
        tuned = {"alpha": a, "tau_days": tau}
        log.info("CiteRank tuned: alpha=%s tau=%.1f days", a, tau)
    return configs, tuned


def _inputs(cfg: RunConfig) -> dict:
    return {k: {"path": getattr(cfg, k), "sha256": _sha256(getattr(cfg, k))}
            for k in ("nodes", "edges", "seminal") if getattr(cfg, k) and Path(getattr(cfg, k)).exists()}


def _manifest(out: Path, cfg: RunConfig, command: str, t0: float, **extra):
    m = {
        "command": command, "version": __version__, "config": cfg.to_text(),
        "inputs": _inputs(cfg), "wall_clock_s": round(time.time() - t0, 3),
    }
    m.update(extra)
    out.mkdir(parents=True, exist_ok=True)
    (out / "manifest.json").write_text(json.dumps(m, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")


def _scores_for(cfg: RunConfig, net, labels, configs):
    if cfg.scores:
        return {lab: read_scores(Path(cfg.scores) / f"{lab}.tsv", net) for lab in labels}
    return rank_all(net, labels, window=cfg.window, configs=configs)


# -- commands -----------------------------------------------------------------

def cmd_synth(cfg: RunConfig, t0):
    res = generate_synthetic(cfg.synth_params())
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    write_nodes(res.network, out / "nodes.tsv")
    write_edges(res.network, out / "edges.tsv")
    write_seminal(res.seminal, res.network, out / "seminal.txt")
    write_quality(res, out / "quality.tsv")
    g = AgeGrouping.build(res.network.N, min(cfg.groups, res.network.N))
    first = float((g.group[res.seminal.positions] == 1).mean())
    _manifest(out, cfg, "synth", t0, params=res.params.as_dict(), n_nodes=res.network.N,
              n_edges=res.network.E, seminal_in_group1=first, clamped_nodes=res.clamped_nodes)
    print(f"wrote N={res.network.N} E={res.network.E} S={res.seminal.S} to {out}")


def cmd_rank(cfg: RunConfig, t0):
    net, summary, _ = _load(cfg)
    configs, tuned = _configs(cfg, net)
    out = Path(cfg.out) / "scores"
    out.mkdir(parents=True, exist_ok=True)
    labels = list(cfg.metrics)
    for lab in list(labels):
        base, rescaled = base_label(lab)
        if rescaled and base not in labels:
            labels.insert(labels.index(lab), base)
    runner = MetricRunner(net, window=cfg.window, configs=configs)
    iters = {}
    try:
        for lab in labels:
            sv = runner(lab)
            iters[lab] = sv.iterations
            base = base_label(lab)[0]
            meta = {"config": dataclasses.asdict(configs[base]) if base in configs else {}}
            if lab != base:
                meta["window"] = cfg.window
            write_scores(sv, net, out / f"{lab}.tsv", meta)
    except ConvergenceError as e:
        _manifest(Path(cfg.out), cfg, "rank", t0, error=str(e), failed_metric=e.label,
                  residual=e.residual, iterations=iters)
        raise
    _manifest(Path(cfg.out), cfg, "rank", t0, iterations=iters, citerank_tuned=tuned,
              load_summary={"N": net.N, "E": net.E, "rejected": summary.rejected,
                            "duplicates": summary.duplicate_edges, "backdated": summary.backdated_citations})
    print(f"wrote {len(labels)} score file(s) to {out}")


def cmd_evaluate(cfg: RunConfig, t0):
    net, _, sem = _load(cfg, seminal=True)
    configs, tuned = _configs(cfg, net)
    scores = _scores_for(cfg, net, cfg.metrics, configs)
    rep, scores = evaluate(net, sem, cfg.metrics, cfg.z, cfg.groups, window=cfg.window,
                           snapshots=cfg.snapshots, seed=cfg.seed, replicates=cfg.replicates,
                           workers=cfg.workers, scores=scores, configs=configs)
    rep.write(Path(cfg.out))
    _manifest(Path(cfg.out), cfg, "evaluate", t0, citerank_tuned=tuned,
              unresolved_seminal=list(sem.unresolved),
              iterations={k: v.iterations for k, v in scores.items()})
    for r in rep.rows:
        print(f"{r['metric']}\tz={r['z']}\tIR={r['IR']:.4f}\tNIR={r['NIR']:.4f}\tsigma/sigma0={r['sigma_ratio']:.2f}")


def cmd_bias(cfg: RunConfig, t0):
    net, _, _ = _load(cfg)
    configs, _ = _configs(cfg, net)
    scores = _scores_for(cfg, net, cfg.metrics, configs)
    grouping = AgeGrouping.build(net.N, cfg.groups)
    rep = EvalReport()
    for lab in cfg.metrics:
        rep.bias[lab] = bias_profile(scores[lab], grouping, cfg.z[0], cfg.replicates, cfg.seed)
    rep.write(Path(cfg.out))
    _manifest(Path(cfg.out), cfg, "bias", t0)
    for lab, b in rep.bias.items():
        print(f"{lab}\tsigma={b.sigma:.3f}\tsigma0={b.sigma0:.3f}\tratio={b.ratio:.2f}")


def cmd_similarity(cfg: RunConfig, t0):
    net, _, _ = _load(cfg)
    configs, _ = _configs(cfg, net)
    scores = _scores_for(cfg, net, cfg.metrics, configs)
    rep = EvalReport(spearman_labels=list(cfg.metrics),
                     spearman=spearman_matrix([scores[m] for m in cfg.metrics]))
    rep.write(Path(cfg.out))
    _manifest(Path(cfg.out), cfg, "similarity", t0)
    print(f"wrote spearman.csv for {len(cfg.metrics)} metric(s)")


def cmd_snapshots(cfg: RunConfig, t0):
    has_seminal = cfg.seminal is not None
    net, _, sem = _load(cfg, seminal=has_seminal)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "snapshots.csv", "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, delimiter="\t", lineterminator="\n")
        w.writerow(["cutoff", "N", "E"])
        for c in snapshot_cutoffs(net):
            s = snapshot(net, c)
            w.writerow([str(c), s.N, s.E])
    stats = {}
    for name, subset in (("all", None), ("seminal", sem)):
        if name == "seminal" and sem is None:
            continue
        row = {"median_indegree": median_indegree(net, subset)}
        for k in (3, 5):
            row[f"tau_{k}_years"] = time_to_k_citations(net, k, subset).mean_years
        stats[name] = row
    (out / "stats.json").write_text(json.dumps(stats, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _manifest(out, cfg, "snapshots", t0)
    print(json.dumps(stats, sort_keys=True))


COMMANDS = {
    "synth": cmd_synth, "rank": cmd_rank, "evaluate": cmd_evaluate,
    "bias": cmd_bias, "similarity": cmd_similarity, "snapshots": cmd_snapshots,
}


def _csv_list(text):
    return [x for x in text.replace(",", " ").split() if x]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="seminalrank", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="INI-style run configuration")
        s.add_argument("--nodes")
        s.add_argument("--edges")
        s.add_argument("--seminal")
        s.add_argument("--scores", help="directory of precomputed score files")
        s.add_argument("--metrics", type=_csv_list)
        s.add_argument("--z", type=lambda t: [float(x) for x in _csv_list(t)])
        s.add_argument("--groups", type=int)
        s.add_argument("--window", type=int)
        s.add_argument("--workers", type=int)
        s.add_argument("--seed", type=int)
        s.add_argument("--out")
        s.add_argument("--snapshots", action="store_true", default=None)
        s.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                       help="override any config entry, e.g. synth.n_nodes=10000")
        s.add_argument("-v", "--verbose", action="store_true")
    return p


def resolve_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    for key in ("nodes", "edges", "seminal", "scores", "metrics", "z", "groups", "window",
                "workers", "seed", "out", "snapshots"):
        v = getattr(args, key)
        if v is not None:
            setattr(cfg, key, v)
    for item in args.set:
        try:
            lhs, value = item.split("=", 1)
            section, key = lhs.split(".", 1)
        except ValueError:
            raise ConfigError(f"bad --set entry {item!r}") from None
        if section == "synth":
            cfg.synth[key] = value
        elif section == "solver":
            cfg.solver[key] = value
        else:
            cfg.metric_params.setdefault(section, {})[key] = value
    if args.seed is not None:
        cfg.synth["seed"] = str(args.seed)
    return cfg.validate()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    t0 = time.time()
    try:
        cfg = resolve_config(args)
        COMMANDS[args.command](cfg, t0)
    except (UsageError, ConfigError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, OSError, ValueError) as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

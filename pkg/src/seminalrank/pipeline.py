"""Rank a network with many metrics and evaluate the rankings in one pass."""
from __future__ import annotations

import logging
from typing import Sequence

from .evaluation import (
    N_GROUPS, SIGMA0_REPLICATES, AgeGrouping, EvalReport, age_curves_many, bias_profile,
    identification_rate, normalized_identification_rate, spearman_matrix,
)
from .network import CitationNetwork, SeminalSet
from .registry import MetricRunner, validate
from .scores import MetricConfig, ScoreVector

log = logging.getLogger(__name__)


def rank_all(net: CitationNetwork, labels: Sequence[str], cfg: MetricConfig | None = None,
             window: int | None = None, configs=None) -> dict[str, ScoreVector]:
    runner = MetricRunner(net, cfg, window, configs=configs)
    return {lab: runner(lab) for lab in validate(labels)}


def evaluate(net: CitationNetwork, seminal: SeminalSet, labels: Sequence[str], zs=(0.01,), G=N_GROUPS,
             cfg: MetricConfig | None = None, window: int | None = None, snapshots=False,
             seed=0, replicates=SIGMA0_REPLICATES, workers=1,
             scores: dict[str, ScoreVector] | None = None, configs=None) -> tuple[EvalReport, dict[str, ScoreVector]]:
    if seminal.S == 0:
        raise ValueError("no seminal node resolves to the network")
    scores = scores or rank_all(net, labels, cfg, window, configs)
    grouping = AgeGrouping.build(net.N, G)
    rep = EvalReport()
    for z in zs:
        nirs = {}
        for lab in labels:
            sv = scores[lab]
            prof = bias_profile(sv, grouping, z, replicates, seed)
            if z == zs[0]:
                rep.bias[lab] = prof
            nirs[lab] = normalized_identification_rate(sv, seminal, grouping, z)
            rep.rows.append({
                "metric": lab, "z": z, "IR": identification_rate(sv, seminal, z),
                "NIR": nirs[lab], "sigma_ratio": prof.ratio,
            })
        best = max(nirs.values())
        for r in rep.rows[-len(labels):]:
            r["rel_score"] = r["NIR"] / best if best > 0 else 0.0
    rep.spearman_labels = list(labels)
    rep.spearman = spearman_matrix([scores[lab] for lab in labels])
    if snapshots:
        runners: dict = {}

        def rank_snapshot(snap, lab):
            key = snap.as_of
            if key not in runners:
                runners[key] = MetricRunner(snap, cfg, window, clamp_window=True, configs=configs)
            return runners[key](lab)

        rep.curves = age_curves_many(rank_snapshot, labels, net, seminal, zs[0], G, workers)
    return rep, scores

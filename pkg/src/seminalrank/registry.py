"""Metric labels and the machinery to compute them by name."""
from __future__ import annotations

from typing import Callable

from . import metrics as M
from .evaluation import UndefinedMetric
from .network import CitationNetwork
from .rescale import NOT_RESCALABLE, default_window, rescale
from .scores import MetricConfig, ScoreVector

BASE: dict[str, Callable[[CitationNetwork, MetricConfig], ScoreVector]] = {
    "C": lambda net, cfg: M.citation_count(net),
    "P": M.pagerank,
    "T": M.citerank,
    "L": M.leaderrank,
    "H": lambda net, cfg: M.h_index(net),
    "CI": M.collective_influence,
    "SLC": lambda net, cfg: M.semi_local_centrality(net),
    "HITS": lambda net, cfg: M.hits(net, cfg)[0],
    "YCCP": lambda net, cfg: M.yccp(net),
    "AgeR": lambda net, cfg: M.age_rank(net),
}

# the 16 variants evaluated side by side, plus the two reference rankings
CORE_SET = ["C", "P", "T", "L", "H", "CI", "SLC", "HITS",
             "RC", "RP", "RT", "RL", "RH", "RCI", "RSLC", "RHITS"]
ALL_LABELS = CORE_SET + ["YCCP", "AgeR"]


def base_label(label: str) -> tuple[str, bool]:
    """Split a label into (base metric, rescaled?)."""
    if label in BASE:
        return label, False
    if label.startswith("R") and label[1:] in BASE:
        if label[1:] in NOT_RESCALABLE:
            raise ValueError(f"{label}: {label[1:]} has no rescaled variant")
        return label[1:], True
    raise ValueError(f"unknown metric {label!r}")


def validate(labels) -> list[str]:
    for lab in labels:
        base_label(lab)
    return list(labels)


def snapshot_window(window: int | None, n: int) -> int:
    """Requested (or default) window, shrunk to the largest even count below N."""
    w = default_window(n) if window is None else window
    if n < 3:
        raise UndefinedMetric(f"cannot rescale a network of {n} node(s)")
    return min(w, n - 1 if (n - 1) % 2 == 0 else n - 2)


class MetricRunner:
    """Computes labels on one network, caching base scores shared by rescaled variants."""

    def __init__(self, net: CitationNetwork, cfg: MetricConfig | None = None, window: int | None = None,
                 clamp_window: bool = False, configs: dict[str, MetricConfig] | None = None):
        self.net = net
        self.cfg = cfg or MetricConfig()
        self.configs = configs or {}
        self.window = window
        self.clamp_window = clamp_window
        self.cache: dict[str, ScoreVector] = {}

    def __call__(self, label: str) -> ScoreVector:
        if label in self.cache:
            return self.cache[label]
        base, rescaled = base_label(label)
        if rescaled:
            w = snapshot_window(self.window, self.net.N) if self.clamp_window else self.window
            sv = rescale(self(base), self.net, w)
        else:
            if base == "HITS" and self.net.E == 0:
                raise UndefinedMetric("HITS needs at least one citation")
            sv = BASE[base](self.net, self.configs.get(base, self.cfg))
        self.cache[label] = sv
        return sv


def metric_fn(label: str, cfg: MetricConfig | None = None, window: int | None = None):
    """Callable net -> ScoreVector, for snapshot-based evaluation."""
    base_label(label)
    return lambda net: MetricRunner(net, cfg, window, clamp_window=True)(label)

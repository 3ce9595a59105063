"""Age rescaling: z-score of each node's score within a window of similarly aged nodes."""
from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .network import CitationNetwork
from .scores import ScoreVector

NOT_RESCALABLE = {"YCCP", "AgeR"}


def default_window(n: int) -> int:
    """Window proportional to network size: N/600 rounded to even, clamped to [100, 20000]."""
    w = 2 * int(round(n / 1200))
    return int(min(max(w, 100), 20_000))


def window_stats(m: np.ndarray, w: int, block: int = 4096) -> tuple[np.ndarray, np.ndarray]:
    """Mean and population std over positions [i - w/2, i + w/2], truncated at the ends.

    Windows whose values are all identical get std exactly 0.
    """
    half = w // 2
    n = len(m)
    padded = np.concatenate([np.full(half, np.nan), m, np.full(half, np.nan)])
    views = sliding_window_view(padded, w + 1)
    mu = np.empty(n)
    sd = np.empty(n)
    for lo in range(0, n, block):
        v = views[lo:lo + block]
        mu[lo:lo + block] = np.nanmean(v, axis=1)
        sd[lo:lo + block] = np.nanstd(v, axis=1)
        flat = np.nanmax(v, axis=1) == np.nanmin(v, axis=1)
        sd[lo:lo + block][flat] = 0.0
    return mu, sd


def rescale(scores: ScoreVector, net: CitationNetwork, window: int | None = None) -> ScoreVector:
    if len(scores) != net.N:
        raise ValueError("score vector does not match network")
    if scores.label in NOT_RESCALABLE:
        raise ValueError(f"{scores.label} is not rescaled")
    w = default_window(net.N) if window is None else int(window)
    if w < 2 or w % 2:
        raise ValueError("window must be an even count of at least 2")
    if w >= net.N:
        raise ValueError(f"window {w} must be smaller than N={net.N}")
    mu, sd = window_stats(scores.scores, w)
    r = np.zeros(net.N)
    ok = sd > 0
    r[ok] = (scores.scores[ok] - mu[ok]) / sd[ok]
    return ScoreVector.build("R" + scores.label, r)

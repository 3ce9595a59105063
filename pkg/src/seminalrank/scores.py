from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata


class ConvergenceError(RuntimeError):
    def __init__(self, label: str, iterations: int, residual: float):
        super().__init__(f"{label} did not converge in {iterations} iterations (residual {residual:.3e})")
        self.label = label
        self.iterations = iterations
        self.residual = residual


@dataclass(frozen=True)
class MetricConfig:
    alpha: float = 0.5
    tau_days: float = 2.6 * 365.25
    eps: float = 1e-9
    max_iter: int = 10_000
    ci_level: int = 2

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if not self.tau_days > 0:
            raise ValueError("tau_days must be positive")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.max_iter < 1 or self.ci_level < 1:
            raise ValueError("max_iter and ci_level must be at least 1")


def rank_order(scores: np.ndarray) -> np.ndarray:
    """Node positions best first; ties keep canonical node order (older, then smaller id)."""
    return np.argsort(-np.asarray(scores, dtype=np.float64), kind="stable")


@dataclass(frozen=True)
class ScoreVector:
    label: str
    scores: np.ndarray
    ranking: np.ndarray = field(repr=False)
    iterations: int | None = None
    residual: float | None = None

    @classmethod
    def build(cls, label, scores, iterations=None, residual=None):
        scores = np.asarray(scores, dtype=np.float64)
        if np.isnan(scores).any():
            raise ValueError(f"{label}: NaN score")
        scores.setflags(write=False)
        ranking = rank_order(scores)
        ranking.setflags(write=False)
        return cls(label, scores, ranking, iterations, residual)

    def __len__(self):
        return len(self.scores)

    def positions(self) -> np.ndarray:
        """Rank position (0 = best) of every node."""
        pos = np.empty(len(self.ranking), dtype=np.int64)
        pos[self.ranking] = np.arange(len(self.ranking))
        return pos


def fractional_ranks(x) -> np.ndarray:
    return rankdata(x, method="average")


def spearman_rho(x, y) -> float | None:
    """Spearman correlation on average ranks; None when either input is constant."""
    rx, ry = fractional_ranks(x), fractional_ranks(y)
    rx = rx - rx.mean()
    ry = ry - ry.mean()
    den = np.sqrt((rx * rx).sum() * (ry * ry).sum())
    if den == 0:
        return None
    return float(np.clip((rx * ry).sum() / den, -1.0, 1.0))

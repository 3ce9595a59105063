"""Score files: ``id<TAB>score<TAB>rank`` plus a JSON sidecar with label and settings."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .network import CitationNetwork, DataError
from .scores import ScoreVector


def write_scores(sv: ScoreVector, net: CitationNetwork, path, meta: dict | None = None):
    path = Path(path)
    rank = sv.positions() + 1
    lines = ["id\tscore\trank"]
    lines += [f"{i}\t{s!r}\t{r}" for i, s, r in zip(net.ids.tolist(), sv.scores.tolist(), rank.tolist())]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    side = {"metric": sv.label, "n_nodes": net.N, "iterations": sv.iterations, "residual": sv.residual}
    side.update(meta or {})
    path.with_suffix(".json").write_text(json.dumps(side, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_scores(path, net: CitationNetwork) -> ScoreVector:
    path = Path(path)
    side = path.with_suffix(".json")
    label = json.loads(side.read_text(encoding="utf-8"))["metric"] if side.exists() else path.stem
    scores = np.full(net.N, np.nan)
    with open(path, encoding="utf-8") as f:
        next(f)
        for lineno, line in enumerate(f, start=2):
            parts = line.rstrip("\n").split("\t")
            i = net.index.get(parts[0])
            if i is None:
                raise DataError(f"{path}:{lineno}: unknown node {parts[0]!r}")
            scores[i] = float(parts[1])
    if np.isnan(scores).any():
        raise DataError(f"{path}: {int(np.isnan(scores).sum())} node(s) without a score")
    return ScoreVector.build(label, scores)

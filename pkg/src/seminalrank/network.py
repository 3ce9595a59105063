"""Time-stamped directed citation networks: ingestion, export, snapshots, statistics."""
from __future__ import annotations

import csv
import datetime as dt
import io
import logging
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, TextIO

import numpy as np
import scipy.sparse as sp

log = logging.getLogger(__name__)

DAYS_PER_YEAR = 365.25

NODE_HEADER = ("id", "date")
EDGE_HEADER = ("citing_id", "cited_id")


class DataError(ValueError):
    """Malformed or inconsistent input data."""


class EmptyNetworkError(DataError):
    pass


def _ro(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass
class LoadSummary:
    n_nodes: int = 0
    n_edges: int = 0
    rejected_unknown: int = 0
    rejected_self: int = 0
    duplicate_edges: int = 0
    bad_rows: list[tuple[int, str]] = field(default_factory=list)
    # citations whose citing node is dated before the cited node
    backdated_citations: int = 0

    @property
    def rejected(self) -> int:
        return self.rejected_unknown + self.rejected_self + len(self.bad_rows)


class CitationNetwork:
    """Immutable citation network.

    Nodes are held in canonical order: sorted by (date, id). ``src[e]`` cites
    ``dst[e]``; edges are sorted by (src, dst) and unique.
    """

    def __init__(self, ids, dates, src, dst, as_of=None, *, _trusted=False):
        ids = np.asarray(ids, dtype=object)
        dates = np.asarray(dates, dtype="datetime64[D]")
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        if not _trusted:
            if len(ids) != len(dates):
                raise DataError("ids and dates differ in length")
            if len(set(ids.tolist())) != len(ids):
                raise DataError("duplicate node id")
            order = np.lexsort((ids.astype(str), dates))
            inv = np.empty_like(order)
            inv[order] = np.arange(len(order))
            ids, dates = ids[order], dates[order]
            src, dst = inv[src], inv[dst]
            if np.any(src == dst):
                raise DataError("self-citation")
            key = np.unique(src * max(len(ids), 1) + dst)
            src, dst = key // max(len(ids), 1), key % max(len(ids), 1)
        if as_of is None:
            as_of = dates[-1] if len(dates) else None
        self.ids = _ro(ids)
        self.dates = _ro(dates)
        self.src = _ro(src)
        self.dst = _ro(dst)
        self.as_of = np.datetime64(as_of, "D") if as_of is not None else None

    @property
    def N(self) -> int:
        return len(self.ids)

    @property
    def E(self) -> int:
        return len(self.src)

    def __repr__(self):
        return f"CitationNetwork(N={self.N}, E={self.E}, as_of={self.as_of})"

    def __eq__(self, other):
        if not isinstance(other, CitationNetwork):
            return NotImplemented
        return (
            self.as_of == other.as_of
            and np.array_equal(self.ids, other.ids)
            and np.array_equal(self.dates, other.dates)
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
        )

    __hash__ = None

    @cached_property
    def index(self) -> dict[str, int]:
        return {k: i for i, k in enumerate(self.ids.tolist())}

    @cached_property
    def indegree(self) -> np.ndarray:
        return _ro(np.bincount(self.dst, minlength=self.N).astype(np.int64))

    @cached_property
    def outdegree(self) -> np.ndarray:
        return _ro(np.bincount(self.src, minlength=self.N).astype(np.int64))

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """A[i, j] = 1 if node i cites node j."""
        data = np.ones(self.E, dtype=np.float64)
        return sp.csr_matrix((data, (self.src, self.dst)), shape=(self.N, self.N))

    @cached_property
    def citers(self) -> sp.csr_matrix:
        """Transpose of the adjacency: row i lists the nodes citing i."""
        return self.adjacency.T.tocsr()

    @cached_property
    def day_numbers(self) -> np.ndarray:
        return _ro(self.dates.astype(np.int64))

    @cached_property
    def years(self) -> np.ndarray:
        return _ro(self.dates.astype("datetime64[Y]").astype(np.int64) + 1970)

    def resolve(self, ids: Iterable[str]) -> tuple[np.ndarray, list[str]]:
        """Map ids to node positions; return (positions, unresolved ids)."""
        found, missing = [], []
        for k in ids:
            i = self.index.get(k)
            if i is None:
                missing.append(k)
            else:
                found.append(i)
        return np.array(sorted(set(found)), dtype=np.int64), missing

    def prefix(self, n: int, as_of) -> "CitationNetwork":
        keep = (self.src < n) & (self.dst < n)
        return CitationNetwork(
            self.ids[:n].copy(), self.dates[:n].copy(), self.src[keep].copy(),
            self.dst[keep].copy(), as_of, _trusted=True,
        )


@dataclass(frozen=True)
class SeminalSet:
    ids: frozenset[str]
    positions: np.ndarray = field(compare=False, repr=False)
    unresolved: tuple[str, ...] = ()

    @property
    def S(self) -> int:
        return len(self.ids)

    @classmethod
    def resolve(cls, net: CitationNetwork, ids: Iterable[str]) -> "SeminalSet":
        ids = list(ids)
        pos, missing = net.resolve(ids)
        if missing:
            log.warning("%d seminal id(s) not in network: %s", len(missing), ", ".join(missing[:10]))
        return cls(frozenset(net.ids[pos].tolist()), _ro(pos), tuple(missing))


def parse_date(text: str) -> np.datetime64:
    return np.datetime64(dt.date.fromisoformat(text.strip()), "D")


def _open(source) -> TextIO:
    if isinstance(source, (str, os.PathLike)):
        return open(source, encoding="utf-8", newline="")
    return source


def _rows(source, delimiter: str, header: tuple[str, ...]):
    f = _open(source)
    try:
        first = True
        for lineno, line in enumerate(f, start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            row = next(csv.reader([line.rstrip("\r\n")], delimiter=delimiter))
            row = [c.strip() for c in row]
            if first:
                first = False
                if tuple(row[: len(header)]) == header:
                    continue
            yield lineno, row
    finally:
        if f is not source:
            f.close()


def load_network(nodes_source, edges_source, *, delimiter="\t", as_of=None, strict=True):
    """Read node and edge tables into a CitationNetwork.

    Returns ``(network, summary)``. A malformed row raises DataError naming its
    line when ``strict``; otherwise it is skipped and listed in the summary.
    """
    summary = LoadSummary()
    ids, dates, seen = [], [], set()
    for lineno, row in _rows(nodes_source, delimiter, NODE_HEADER):
        if len(row) < 2:
            err = f"line {lineno}: expected id and date"
        else:
            try:
                d = parse_date(row[1])
                err = None
            except ValueError:
                err = f"line {lineno}: malformed date {row[1]!r}"
        if err:
            if strict:
                raise DataError(err)
            summary.bad_rows.append((lineno, err))
            continue
        if row[0] in seen:
            raise DataError(f"line {lineno}: duplicate node id {row[0]!r}")
        seen.add(row[0])
        ids.append(row[0])
        dates.append(d)
    if not ids:
        raise EmptyNetworkError("node table is empty")

    pos = {k: i for i, k in enumerate(ids)}
    src, dst = [], []
    for lineno, row in _rows(edges_source, delimiter, EDGE_HEADER):
        if len(row) < 2:
            err = f"line {lineno}: expected citing and cited id"
            if strict:
                raise DataError(err)
            summary.bad_rows.append((lineno, err))
            continue
        a, b = pos.get(row[0]), pos.get(row[1])
        if a is None or b is None:
            summary.rejected_unknown += 1
        elif a == b:
            summary.rejected_self += 1
        else:
            src.append(a)
            dst.append(b)

    n_raw = len(src)
    net = CitationNetwork(ids, dates, src, dst, as_of)
    if net.as_of < net.dates[-1]:
        raise DataError(f"as_of {net.as_of} precedes latest node date {net.dates[-1]}")
    summary.duplicate_edges = n_raw - net.E
    summary.n_nodes, summary.n_edges = net.N, net.E
    summary.backdated_citations = int(np.sum(net.dates[net.src] < net.dates[net.dst]))
    if summary.rejected:
        log.info("rejected %d edge row(s)", summary.rejected)
    if summary.backdated_citations:
        log.warning("%d citation(s) predate the cited node", summary.backdated_citations)
    return net, summary


def load_seminal(source, net: CitationNetwork) -> SeminalSet:
    f = _open(source)
    try:
        ids = [ln.strip() for ln in f if ln.strip() and not ln.lstrip().startswith("#")]
    finally:
        if f is not source:
            f.close()
    return SeminalSet.resolve(net, ids)


def write_nodes(net: CitationNetwork, dest, delimiter="\t"):
    lines = [delimiter.join(NODE_HEADER)]
    lines += [f"{i}{delimiter}{d}" for i, d in zip(net.ids.tolist(), net.dates.astype(str).tolist())]
    _write(dest, "\n".join(lines) + "\n")


def write_edges(net: CitationNetwork, dest, delimiter="\t"):
    ids = net.ids
    lines = [delimiter.join(EDGE_HEADER)]
    lines += [f"{a}{delimiter}{b}" for a, b in zip(ids[net.src].tolist(), ids[net.dst].tolist())]
    _write(dest, "\n".join(lines) + "\n")


def write_seminal(seminal: SeminalSet, net: CitationNetwork, dest):
    _write(dest, "".join(f"{k}\n" for k in net.ids[seminal.positions].tolist()))


def _write(dest, text: str):
    if isinstance(dest, io.TextIOBase):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8", newline="") as f:
            f.write(text)


def snapshot(net: CitationNetwork, cutoff) -> CitationNetwork:
    """Nodes dated on or before ``cutoff`` and the citations among them."""
    cutoff = np.datetime64(cutoff, "D")
    if net.N == 0 or cutoff < net.dates[0]:
        raise EmptyNetworkError(f"no node dated on or before {cutoff}")
    n = int(np.searchsorted(net.dates, cutoff, side="right"))
    return net.prefix(n, cutoff)


def snapshot_cutoffs(net: CitationNetwork) -> list[np.datetime64]:
    if net.N == 0:
        raise EmptyNetworkError("empty network")
    first = int(net.years[0])
    last = int(str(net.as_of)[:4])
    cutoffs = [np.datetime64(f"{y}-12-31", "D") for y in range(first, last + 1)]
    cutoffs = [c for c in cutoffs if c <= net.as_of]
    if not cutoffs or cutoffs[-1] != net.as_of:
        cutoffs.append(net.as_of)
    return cutoffs


def yearly_snapshots(net: CitationNetwork) -> list[tuple[np.datetime64, CitationNetwork]]:
    return [(c, snapshot(net, c)) for c in snapshot_cutoffs(net)]


@dataclass
class CitationTiming:
    k: int
    mean_years: float | None
    nodes: np.ndarray
    durations_days: np.ndarray


def time_to_k_citations(net: CitationNetwork, k: int, subset: SeminalSet | None = None) -> CitationTiming:
    """Days until each node received its k-th citation (nodes with fewer are skipped)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    cite_day = net.day_numbers[net.src]
    order = np.lexsort((cite_day, net.dst))
    tgt, day = net.dst[order], cite_day[order]
    starts = np.searchsorted(tgt, np.arange(net.N))
    counts = net.indegree
    nodes = np.flatnonzero(counts >= k)
    if subset is not None:
        nodes = np.intersect1d(nodes, subset.positions)
    kth = day[starts[nodes] + k - 1]
    durations = np.maximum(kth - net.day_numbers[nodes], 0)
    mean = float(durations.mean() / DAYS_PER_YEAR) if len(nodes) else None
    return CitationTiming(k, mean, nodes, durations)


def median_indegree(net: CitationNetwork, subset: SeminalSet | None = None) -> float:
    deg = net.indegree if subset is None else net.indegree[subset.positions]
    return float(np.median(deg))

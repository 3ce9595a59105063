"""Ranking metrics for citation networks and their age-aware evaluation."""

__version__ = "0.1.0"

from .evaluation import (
    AgeGrouping, BiasProfile, EvalReport, bias_profile, identification_rate, identification_rate_vs_age,
    nir_vs_age, normalized_identification_rate, relative_performance, spearman_matrix, top_fraction,
)
from .metrics import (
    age_rank, citation_count, citerank, collective_influence, h_index, hits, leaderrank, pagerank,
    semi_local_centrality, tune_citerank_params, yccp,
)
from .network import (
    CitationNetwork, SeminalSet, load_network, snapshot, time_to_k_citations, yearly_snapshots,
)
from .rescale import default_window, rescale
from .scores import ConvergenceError, MetricConfig, ScoreVector
from .synth import SynthParams, generate_synthetic

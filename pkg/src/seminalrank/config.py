"""Run configuration: an INI-style key-value file, with command-line overrides.

    [run]
    nodes = data/nodes.tsv
    edges = data/edges.tsv
    seminal = data/seminal.txt
    out = results
    metrics = C, P, RP, AgeR
    z = 0.005, 0.01, 0.02
    groups = 40
    snapshots = no
    seed = 0

    [solver]
    eps = 1e-9
    max_iter = 10000

    [P]
    alpha = 0.5

    [T]
    tau_years = 2.6
    tune = yes
    alpha_grid = 0.3, 0.5, 0.7
    tau_grid_years = 1, 2.6, 5
    recent_window_years = 2

    [synth]
    n_nodes = 20000
    age_skew = 120
"""
from __future__ import annotations

import configparser
import dataclasses
import io
from dataclasses import dataclass, field

from .network import DAYS_PER_YEAR
from .registry import validate
from .scores import MetricConfig
from .synth import SynthParams


class ConfigError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.replace(",", " ").split()]


def _labels(text: str) -> list[str]:
    return [x for x in text.replace(",", " ").split()]


@dataclass
class RunConfig:
    nodes: str | None = None
    edges: str | None = None
    seminal: str | None = None
    scores: str | None = None  # directory of precomputed score files
    out: str = "out"
    metrics: list[str] = field(default_factory=lambda: ["C", "P", "RC", "RP", "AgeR"])
    z: list[float] = field(default_factory=lambda: [0.01])
    groups: int = 40
    window: int | None = None
    snapshots: bool = False
    seed: int = 0
    workers: int = 1
    replicates: int = 1000
    solver: dict = field(default_factory=dict)
    metric_params: dict[str, dict] = field(default_factory=dict)
    synth: dict = field(default_factory=dict)

    def validate(self):
        try:
            validate(self.metrics)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        if self.groups < 1 or self.workers < 1 or self.replicates < 1:
            raise ConfigError("groups, workers and replicates must be positive")
        if any(not 0 < z < 1 for z in self.z) or not self.z:
            raise ConfigError("z values must lie in (0, 1)")
        if self.window is not None and (self.window < 2 or self.window % 2):
            raise ConfigError("window must be an even count of at least 2")
        try:
            for lab in ("P", "T", "L", "CI", "HITS"):
                self.metric_config(lab)
            self.synth_params()
        except (TypeError, ValueError) as e:
            raise ConfigError(str(e)) from None
        return self

    def metric_config(self, base: str) -> MetricConfig:
        kw = {}
        s = {**self.solver, **self.metric_params.get(base, {})}
        if "alpha" in s:
            kw["alpha"] = float(s["alpha"])
        if "tau_years" in s:
            kw["tau_days"] = float(s["tau_years"]) * DAYS_PER_YEAR
        if "tau_days" in s:
            kw["tau_days"] = float(s["tau_days"])
        if "eps" in s:
            kw["eps"] = float(s["eps"])
        if "max_iter" in s:
            kw["max_iter"] = int(s["max_iter"])
        if "level" in s:
            kw["ci_level"] = int(s["level"])
        return MetricConfig(**kw)

    def citerank_tuning(self):
        """(alpha grid, tau grid in days, window in days) or None when tuning is off."""
        s = self.metric_params.get("T", {})
        if str(s.get("tune", "no")).lower() not in ("1", "yes", "true", "on"):
            return None
        alphas = _floats(s.get("alpha_grid", "0.3, 0.4, 0.5, 0.6, 0.7"))
        taus = [t * DAYS_PER_YEAR for t in _floats(s.get("tau_grid_years", "0.5, 1, 2, 4, 8"))]
        window = float(s.get("recent_window_years", 2)) * DAYS_PER_YEAR
        return alphas, taus, window

    def synth_params(self) -> SynthParams:
        types = {f.name: f.type for f in dataclasses.fields(SynthParams)}
        kw = {}
        for k, v in self.synth.items():
            if k not in types:
                raise ConfigError(f"unknown synth parameter {k!r}")
            kw[k] = int(v) if types[k] == "int" else float(v)
        kw.setdefault("seed", self.seed)
        return SynthParams(**kw)

    # -- serialisation --

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        cp = configparser.ConfigParser()
        cp.optionxform = str
        try:
            cp.read_string(text)
        except configparser.Error as e:
            raise ConfigError(str(e)) from None
        cfg = cls()
        if cp.has_section("run"):
            r = cp["run"]
            for key in ("nodes", "edges", "seminal", "scores", "out"):
                if key in r:
                    setattr(cfg, key, r[key])
            try:
                if "metrics" in r:
                    cfg.metrics = _labels(r["metrics"])
                if "z" in r:
                    cfg.z = _floats(r["z"])
                for key in ("groups", "window", "seed", "workers", "replicates"):
                    if key in r:
                        setattr(cfg, key, int(r[key]))
                if "snapshots" in r:
                    cfg.snapshots = r.getboolean("snapshots")
            except ValueError as e:
                raise ConfigError(str(e)) from None
        for sec in cp.sections():
            if sec == "solver":
                cfg.solver = dict(cp[sec])
            elif sec == "synth":
                cfg.synth = dict(cp[sec])
            elif sec != "run":
                cfg.metric_params[sec] = dict(cp[sec])
        return cfg

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        with open(path, encoding="utf-8") as f:
            return cls.from_text(f.read())

    def to_text(self) -> str:
        cp = configparser.ConfigParser()
        cp.optionxform = str
        run = {
            "out": self.out, "metrics": ", ".join(self.metrics), "z": ", ".join(repr(z) for z in self.z),
            "groups": str(self.groups), "snapshots": "yes" if self.snapshots else "no",
            "seed": str(self.seed), "workers": str(self.workers), "replicates": str(self.replicates),
        }
        for key in ("nodes", "edges", "seminal", "scores"):
            if getattr(self, key) is not None:
                run[key] = getattr(self, key)
        if self.window is not None:
            run["window"] = str(self.window)
        cp["run"] = dict(sorted(run.items()))
        if self.solver:
            cp["solver"] = self.solver
        for sec, vals in sorted(self.metric_params.items()):
            cp[sec] = vals
        if self.synth:
            cp["synth"] = self.synth
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()

"""Run configuration and on-disk formats.

Norm series are CSV with the fixed header ``t,l2,h1,h2,linf,mean`` and 17
significant digits, so a write/read cycle is lossless. Snapshots are CSV
with a ``#`` metadata line followed by ``x,u``. Reports are JSON; non-finite
floats are written as the strings "inf", "-inf" or "nan".
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .analysis import (
    AttractorReport,
    AttractorSample,
    BoundCheck,
    ConvergenceReport,
    NormEstimates,
    PropertyReport,
)
from .dynamics import SolverParams
from .errors import ConfigurationError
from .series import COLUMNS, NormSeries
from .spectral import DomainConfig, SpectralField, random_field, to_real

HEADER = ",".join(COLUMNS)


# --------------------------------------------------------------------------
# configuration


@dataclass
class DomainBlock:
    half_length: float = 16 * math.pi
    grid_size: int = 512


@dataclass
class SolverBlock:
    alpha: float = 0.01
    dt: float = 0.05
    t_end: float = 100.0
    dealias: bool = True
    snapshot_every: int = 10


@dataclass
class InitialBlock:
    seed: int = 0
    amplitude: float = 1.0
    decay: float = 2.0


@dataclass
class SweepBlock:
    alphas: list = field(default_factory=lambda: [1e-2, 1e-3, 1e-4])
    t_end: float = 10.0
    snapshot_every: int = 1
    t_max_check: float = 1.0


@dataclass
class AttractorBlock:
    alphas: list = field(default_factory=lambda: [1e-1, 1e-2, 1e-3])
    t_transient: float = 50.0
    t_sample: float = 200.0
    snapshot_every: int = 5
    stride: int = 1
    use_fields: bool = False


@dataclass
class PropertiesBlock:
    count: int = 1000
    grid_size: int = 256


_BLOCKS = {
    "domain": DomainBlock,
    "solver": SolverBlock,
    "initial": InitialBlock,
    "sweep": SweepBlock,
    "attractor": AttractorBlock,
    "properties": PropertiesBlock,
}


@dataclass
class RunConfig:
    domain: DomainBlock = field(default_factory=DomainBlock)
    solver: SolverBlock = field(default_factory=SolverBlock)
    initial: InitialBlock = field(default_factory=InitialBlock)
    sweep: SweepBlock = field(default_factory=SweepBlock)
    attractor: AttractorBlock = field(default_factory=AttractorBlock)
    properties: PropertiesBlock = field(default_factory=PropertiesBlock)

    def __post_init__(self):
        self.validate()

    def validate(self):
        # building these raises ConfigurationError on bad values
        self.domain_config()
        self.solver_params()
        if not (self.initial.amplitude > 0 and self.initial.decay > 0):
            raise ConfigurationError("initial amplitude and decay must be positive")
        for name, block in (("sweep", self.sweep), ("attractor", self.attractor)):
            if not block.alphas:
                raise ConfigurationError(f"{name}.alphas must be nonempty")
            if any(a < 0 for a in block.alphas):
                raise ConfigurationError(f"{name}.alphas must be nonnegative")
        if self.sweep.t_end <= 0 or self.sweep.t_max_check < 0:
            raise ConfigurationError("sweep.t_end must be > 0 and t_max_check >= 0")
        a = self.attractor
        if a.t_transient < 0 or a.t_sample < 0 or a.stride < 1 or a.snapshot_every < 1:
            raise ConfigurationError("invalid attractor sampling window")
        if self.properties.count < 1:
            raise ConfigurationError("properties.count must be >= 1")
        DomainConfig(self.domain.half_length, self.properties.grid_size)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigurationError("config must be a JSON object")
        unknown = set(data) - set(_BLOCKS)
        if unknown:
            raise ConfigurationError(f"unknown config sections: {sorted(unknown)}")
        blocks = {}
        for name, block_cls in _BLOCKS.items():
            raw = data.get(name, {})
            if not isinstance(raw, dict):
                raise ConfigurationError(f"section {name!r} must be an object")
            allowed = {f.name for f in fields(block_cls)}
            bad = set(raw) - allowed
            if bad:
                raise ConfigurationError(f"unknown keys in {name!r}: {sorted(bad)}")
            blocks[name] = block_cls(**raw)
        try:
            return cls(**blocks)
        except TypeError as exc:
            raise ConfigurationError(str(exc)) from exc

    def to_dict(self):
        return asdict(self)

    def domain_config(self):
        return DomainConfig(self.domain.half_length, self.domain.grid_size)

    def solver_params(self):
        s = self.solver
        return SolverParams(s.alpha, s.dt, s.t_end, s.dealias, s.snapshot_every)

    def initial_field(self, domain=None):
        i = self.initial
        return random_field(domain or self.domain_config(), i.seed, i.amplitude, i.decay)


def load_config(path=None) -> RunConfig:
    """Read a JSON config; ``None`` gives the defaults."""
    if path is None:
        return RunConfig()
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return RunConfig.from_dict(data)


# --------------------------------------------------------------------------
# norm series and snapshots


def _fmt(x):
    return "%.17g" % x


def format_norms(series: NormSeries) -> str:
    buf = io.StringIO()
    buf.write(HEADER + "\n")
    for row in series.rows():
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_norms(series: NormSeries, path):
    with open(path, "w", newline="") as fh:
        fh.write(format_norms(series))


def parse_norms(text: str) -> NormSeries:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise ConfigurationError(f"norms CSV must start with header {HEADER!r}")
    rows = [[float(v) for v in r] for r in csv.reader(lines[1:]) if r]
    return NormSeries.from_rows(rows)


def read_norms(path) -> NormSeries:
    with open(path) as fh:
        return parse_norms(fh.read())


def write_snapshot(path, t, u: SpectralField, alpha):
    d = u.domain
    values = to_real(u).values
    with open(path, "w", newline="") as fh:
        fh.write(
            f"# t={_fmt(t)} alpha={_fmt(alpha)} half_length={_fmt(d.half_length)} "
            f"grid_size={d.grid_size}\n"
        )
        fh.write("x,u\n")
        for x, v in zip(d.x, values):
            fh.write(f"{_fmt(x)},{_fmt(v)}\n")


def read_snapshot(path):
    """Return (metadata dict, x array, u array)."""
    with open(path) as fh:
        meta_line = fh.readline()
        if not meta_line.startswith("#"):
            raise ConfigurationError("snapshot file must start with a '#' metadata line")
        meta = dict(item.split("=", 1) for item in meta_line[1:].split())
        if fh.readline().strip() != "x,u":
            raise ConfigurationError("snapshot header must be 'x,u'")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    meta = {k: (int(v) if k == "grid_size" else float(v)) for k, v in meta.items()}
    return meta, data[:, 0], data[:, 1]


# --------------------------------------------------------------------------
# reports


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    return obj


def dumps(record) -> str:
    return json.dumps(_clean(record), indent=2, sort_keys=True) + "\n"


def _opt_float(x):
    return None if x is None else float(x)


def convergence_to_dict(r: ConvergenceReport):
    return {
        "kind": "convergence",
        "alphas": r.alphas,
        "sup_w": r.sup_w,
        "slope": r.slope,
        "intercept": r.intercept,
        "residual": r.residual,
        "excluded": r.excluded,
        "bound_checks": [asdict(c) for c in r.bound_checks],
        "estimates": [{"alpha": a, **asdict(e)} for a, e in r.estimates.items()],
        "failed": [{"alpha": a, "error": m} for a, m in r.failed.items()],
    }


def convergence_from_dict(d) -> ConvergenceReport:
    checks = []
    for c in d["bound_checks"]:
        v = c["violation"]
        checks.append(
            BoundCheck(
                float(c["alpha"]),
                float(c["t_max_check"]),
                bool(c["passed"]),
                bool(c["vacuous"]),
                float(c["worst_margin"]),
                None if v is None else tuple(float(x) for x in v),
            )
        )
    return ConvergenceReport(
        [float(a) for a in d["alphas"]],
        [float(s) for s in d["sup_w"]],
        _opt_float(d["slope"]),
        _opt_float(d["intercept"]),
        _opt_float(d["residual"]),
        [float(a) for a in d["excluded"]],
        checks,
        {
            float(e["alpha"]): NormEstimates(float(e["rho0"]), float(e["rho1"]), float(e["rho2"]))
            for e in d["estimates"]
        },
        {float(f["alpha"]): f["error"] for f in d["failed"]},
    )


def sample_to_dict(s: AttractorSample):
    out = {
        "alpha": s.alpha,
        "points": s.points,
        "t_transient": s.t_transient,
        "t_sample": s.t_sample,
        "stride": s.stride,
        "times": s.times,
    }
    if s.fields is not None:
        out["fields"] = s.fields
    return out


def sample_from_dict(d) -> AttractorSample:
    fields_ = d.get("fields")
    return AttractorSample(
        float(d["alpha"]),
        np.array(d["points"], dtype=float),
        float(d["t_transient"]),
        float(d["t_sample"]),
        int(d["stride"]),
        None if d.get("times") is None else np.array(d["times"], dtype=float),
        None if fields_ is None else np.array(fields_, dtype=float),
    )


def attractor_to_dict(r: AttractorReport):
    return {
        "kind": "attractor",
        "alphas": r.alphas,
        "distances": r.distances,
        "use_fields": r.use_fields,
        "samples": [sample_to_dict(s) for s in r.samples.values()],
        "failed": [{"alpha": a, "error": m} for a, m in r.failed.items()],
    }


def attractor_from_dict(d) -> AttractorReport:
    samples = [sample_from_dict(s) for s in d["samples"]]
    return AttractorReport(
        [float(a) for a in d["alphas"]],
        [float(x) for x in d["distances"]],
        {s.alpha: s for s in samples},
        bool(d["use_fields"]),
        {float(f["alpha"]): f["error"] for f in d["failed"]},
    )


def properties_to_dict(r: PropertyReport):
    return {
        "kind": "properties",
        "count": r.count,
        "half_length": r.domain.half_length,
        "grid_size": r.domain.grid_size,
        "passed": r.passed,
        "checks": [{**asdict(c), "passed": c.passed} for c in r.checks],
    }


def write_report(record: dict, path=None):
    text = dumps(record)
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text)
    return text


def read_report(path) -> dict:
    with open(path) as fh:
        return json.load(fh)

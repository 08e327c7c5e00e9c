"""Numerical checks of the localization limit alpha -> 0.

Covers the Hilbert-transform identities and the Poincare/Agmon
inequalities, measured uniform norm bounds, the difference w = u - v
between nonlocal and local trajectories from a shared start, the Gronwall
envelope for ||w||, log-log scaling fits, and observable-cloud attractor
samples compared by one-sided Hausdorff distance.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from .dynamics import SolverParams, integrate, iterate, make_stepper
from .errors import ConfigurationError, NLKSError
from .series import NormSeries, observe
from .spectral import (
    DomainConfig,
    SpectralField,
    derivative,
    h1_norm,
    hilbert,
    inner_product,
    l2_norm,
    linf_norm,
    random_field,
    resample,
)

IDENTITY_TOL = 1e-10


def parallel_map(func, items, max_workers=None):
    """Ordered map over ``items``, threaded when ``max_workers`` > 1."""
    items = list(items)
    if max_workers is None or max_workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(func, items))


# --------------------------------------------------------------------------
# identities and inequalities


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    kind: str  # "identity" or "inequality"
    worst: float  # max relative residual, or max lhs/rhs ratio
    violations: int
    tolerance: float

    @property
    def passed(self):
        return self.violations == 0


@dataclass(frozen=True)
class PropertyReport:
    count: int
    domain: DomainConfig
    checks: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _test_fields(domain, seed, i):
    # vary smoothness and scale across the sample so the checks see more than one spectrum shape
    rng = np.random.default_rng([seed, i, 0])
    decay = rng.uniform(0.5, 3.0)
    amplitude = float(np.exp(rng.uniform(-3.0, 3.0)))
    u = random_field(domain, [seed, i, 1], amplitude, decay)
    v = random_field(domain, [seed, i, 2], amplitude, rng.uniform(0.5, 3.0))
    return u, v


def identity_residuals(u: SpectralField, v: SpectralField) -> dict:
    """Relative residuals of the six Hilbert-transform identities on (u, v)."""
    hu, hv = hilbert(u), hilbert(v)
    nu, nv = l2_norm(u), l2_norm(v)
    ux = derivative(u, 1)
    return {
        "anti_involution": l2_norm(hilbert(hu) + u) / nu,
        "isometry": abs(l2_norm(hu) - nu) / nu,
        "self_orthogonality": abs(inner_product(u, hu)) / nu**2,
        "skew_adjointness": abs(inner_product(v, hu) + inner_product(u, hv)) / (nu * nv),
        "inner_product_preserved": abs(inner_product(hu, hv) - inner_product(u, v)) / (nu * nv),
        "commutes_with_derivative": l2_norm(derivative(hu, 1) - hilbert(ux)) / l2_norm(ux),
    }


def inequality_ratios(g: SpectralField) -> dict:
    """lhs / rhs for Poincare and Agmon; both must stay below 1."""
    l2, h1 = l2_norm(g), h1_norm(g)
    return {
        "poincare": l2 / (g.domain.period * h1),
        "agmon": linf_norm(g) ** 2 / (2.0 * l2 * h1),
    }


def check_inequalities(seed: int, count: int, domain: DomainConfig | None = None) -> PropertyReport:
    """Run every identity and both inequalities on ``count`` random fields.

    Failures are reported, not raised.
    """
    if count < 1:
        raise ConfigurationError("count must be >= 1")
    if domain is None:
        domain = DomainConfig(16 * np.pi, 256)
    worst, bad = {}, {}
    for i in range(count):
        u, v = _test_fields(domain, seed, i)
        for name, r in identity_residuals(u, v).items():
            worst[name] = max(worst.get(name, 0.0), r)
            bad[name] = bad.get(name, 0) + (not r <= IDENTITY_TOL)
        for name, r in inequality_ratios(u).items():
            worst[name] = max(worst.get(name, 0.0), r)
            bad[name] = bad.get(name, 0) + (not r < 1.0)
    checks = tuple(
        PropertyCheck(
            name,
            "inequality" if name in ("poincare", "agmon") else "identity",
            worst[name],
            bad[name],
            1.0 if name in ("poincare", "agmon") else IDENTITY_TOL,
        )
        for name in worst
    )
    return PropertyReport(count, domain, checks)


# --------------------------------------------------------------------------
# uniform bounds and the Gronwall envelope


@dataclass(frozen=True)
class NormEstimates:
    rho0: float
    rho1: float
    rho2: float

    @classmethod
    def from_series(cls, *series, t0=-np.inf, t1=np.inf):
        """Suprema of l2, h1, h2 over [t0, t1], pooled across ``series``."""
        return cls(
            max(s.sup("l2", t0, t1) for s in series),
            max(s.sup("h1", t0, t1) for s in series),
            max(s.sup("h2", t0, t1) for s in series),
        )

    @classmethod
    def pooled(cls, estimates):
        estimates = list(estimates)
        return cls(
            max(e.rho0 for e in estimates),
            max(e.rho1 for e in estimates),
            max(e.rho2 for e in estimates),
        )


@dataclass(frozen=True)
class GronwallConstants:
    b1: float
    b2: float

    @classmethod
    def from_estimates(cls, est: NormEstimates):
        return cls(2.0 + 4.0 * math.sqrt(est.rho1 * est.rho2), 2.0 * est.rho1**2)


def measure_uniform_bounds(u0, alphas, params: SolverParams, window, max_workers=None):
    """Per-alpha suprema of the norms over ``window`` plus the pooled maxima.

    Returns ``(per_alpha, pooled)`` where ``per_alpha`` maps alpha to
    NormEstimates.
    """
    t0, t1 = window
    if not 0 <= t0 <= t1 <= params.t_end:
        raise ConfigurationError(f"window {window} not inside [0, {params.t_end}]")

    def run(alpha):
        s = integrate(u0, params.replace(alpha=alpha))
        return NormEstimates.from_series(s, t0=t0, t1=t1)

    alphas = list(alphas)
    per_alpha = dict(zip(alphas, parallel_map(run, alphas, max_workers)))
    return per_alpha, NormEstimates.pooled(per_alpha.values())


def gronwall_bound(est: NormEstimates, alpha: float, t):
    """alpha * sqrt((b2/b1) (exp(b1 t) - 1)); +inf where exp overflows.

    ``t`` may be a scalar or an array.
    """
    if alpha < 0:
        raise ConfigurationError("alpha must be >= 0")
    g = GronwallConstants.from_estimates(est)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ConfigurationError("t must be >= 0")
    with np.errstate(over="ignore"):
        growth = np.expm1(g.b1 * t)
    bound = alpha * np.sqrt(g.b2 / g.b1 * growth)
    if alpha == 0:
        bound = np.zeros_like(t)
    return float(bound) if bound.ndim == 0 else bound


@dataclass(frozen=True)
class BoundCheck:
    alpha: float
    t_max_check: float
    passed: bool
    vacuous: bool
    worst_margin: float  # min over checked t > 0 of bound - observed
    violation: tuple | None = None  # (t, observed, bound) of the first failure


def verify_bound(diff: NormSeries, est: NormEstimates, alpha: float, t_max_check: float = 1.0):
    """Check ||w(t)|| <= gronwall_bound at every snapshot with t <= t_max_check.

    The bound is rigorous, so a failure points at discretization error.
    ``vacuous`` is set when the bound overflowed anywhere in the window.
    """
    keep = diff.times <= t_max_check
    t, w = diff.times[keep], diff.l2[keep]
    bound = np.atleast_1d(gronwall_bound(est, alpha, t))
    vacuous = bool(np.any(np.isinf(bound)))
    ok = w <= bound
    pos = t > 0
    margin = float(np.min(bound[pos] - w[pos])) if np.any(pos) else float("inf")
    violation = None
    if not np.all(ok):
        i = int(np.argmin(ok))
        violation = (float(t[i]), float(w[i]), float(bound[i]))
    return BoundCheck(float(alpha), float(t_max_check), bool(np.all(ok)), vacuous, margin, violation)


# --------------------------------------------------------------------------
# trajectory differences and scaling


class DifferenceRun(NamedTuple):
    w: NormSeries  # norms of u - v
    u: NormSeries  # nonlocal trajectory
    v: NormSeries  # local trajectory


def run_difference(u0, alpha, params: SolverParams, reference_params=None) -> DifferenceRun:
    """Integrate the nonlocal (alpha) and local (alpha = 0) equations from ``u0``."""
    ref = params.replace(alpha=0.0) if reference_params is None else reference_params
    for name in ("dt", "t_end", "snapshot_every", "dealias", "nonlinear"):
        if getattr(ref, name) != getattr(params, name):
            raise ConfigurationError(f"time grids differ in {name!r}")
    if ref.alpha != 0:
        raise ConfigurationError("reference run must have alpha = 0")
    nonlocal_ = params.replace(alpha=alpha)
    w_rows, u_rows, v_rows = [], [], []
    for (t, u), (_, v) in zip(iterate(u0, nonlocal_), iterate(u0, ref)):
        w_rows.append(observe(t, u - v))
        u_rows.append(observe(t, u))
        v_rows.append(observe(t, v))
    return DifferenceRun(*(NormSeries.from_rows(r) for r in (w_rows, u_rows, v_rows)))


def trajectory_difference(u0, alpha, params: SolverParams, reference_params=None) -> NormSeries:
    return run_difference(u0, alpha, params, reference_params).w


class ScalingFit(NamedTuple):
    slope: float
    intercept: float
    residual: float  # RMS residual of the log-log fit
    excluded: tuple  # alphas dropped because sup_w was zero


def fit_scaling(alphas, sup_w) -> ScalingFit:
    """Least-squares line through (log alpha, log sup_w)."""
    a = np.asarray(alphas, dtype=float)
    s = np.asarray(sup_w, dtype=float)
    if a.shape != s.shape:
        raise ConfigurationError("alphas and sup_w differ in length")
    keep = (s > 0) & (a > 0)
    if np.count_nonzero(keep) < 3:
        raise ValueError("need at least 3 positive (alpha, sup_w) pairs to fit")
    x, y = np.log(a[keep]), np.log(s[keep])
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return ScalingFit(float(slope), float(intercept), resid, tuple(a[~keep].tolist()))


@dataclass
class ConvergenceReport:
    alphas: list
    sup_w: list
    slope: float | None
    intercept: float | None
    residual: float | None
    excluded: list
    bound_checks: list
    estimates: dict = field(default_factory=dict)  # alpha -> NormEstimates
    failed: dict = field(default_factory=dict)  # alpha -> error message


def alpha_sweep(u0, alphas, params: SolverParams, t_max_check=1.0, max_workers=None):
    """Difference runs over an alpha grid from a shared ``u0`` and time grid.

    Runs that blow up are recorded in ``failed``; the fit uses the rest.
    """
    alphas = sorted((float(a) for a in alphas), reverse=True)

    def run(alpha):
        try:
            return run_difference(u0, alpha, params)
        except NLKSError as exc:
            return exc

    results = parallel_map(run, alphas, max_workers)
    kept, sup_w, checks, estimates, failed = [], [], [], {}, {}
    for alpha, res in zip(alphas, results):
        if isinstance(res, Exception):
            failed[alpha] = str(res)
            continue
        est = NormEstimates.from_series(res.u, res.v)
        kept.append(alpha)
        sup_w.append(res.w.sup("l2"))
        estimates[alpha] = est
        checks.append(verify_bound(res.w, est, alpha, t_max_check))
    try:
        fit = fit_scaling(kept, sup_w)
        slope, intercept, residual, excluded = fit
        excluded = list(excluded)
    except ValueError:
        slope = intercept = residual = None
        excluded = [a for a, s in zip(kept, sup_w) if not (s > 0 and a > 0)]
    return ConvergenceReport(
        kept, sup_w, slope, intercept, residual, excluded, checks, estimates, failed
    )


def bound_check_with_refinement(u0, alpha, params: SolverParams, t_max_check=1.0):
    """verify_bound at N, and again at 2N if the first check fails.

    Returns ``(check, refined)`` with ``refined`` None when not needed.
    """
    res = run_difference(u0, alpha, params)
    check = verify_bound(res.w, NormEstimates.from_series(res.u, res.v), alpha, t_max_check)
    if check.passed:
        return check, None
    fine = resample(u0, 2 * u0.domain.grid_size)
    res2 = run_difference(fine, alpha, params)
    est2 = NormEstimates.from_series(res2.u, res2.v)
    return check, verify_bound(res2.w, est2, alpha, t_max_check)


# --------------------------------------------------------------------------
# attractor samples


def field_embedding(u: SpectralField) -> np.ndarray:
    """Real vector whose Euclidean norm equals the L2 norm of ``u``."""
    d = u.domain
    w = np.sqrt(d.period * d.parseval_weights)
    return np.concatenate([w * u.coeffs.real, w * u.coeffs.imag])


@dataclass
class AttractorSample:
    alpha: float
    points: np.ndarray  # rows of (l2, h1, linf)
    t_transient: float
    t_sample: float
    stride: int
    times: np.ndarray = None
    fields: np.ndarray | None = None  # rows of field_embedding, when requested

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 3)
        if len(self.points) == 0:
            raise ValueError("attractor sample is empty")
        if not np.all(np.isfinite(self.points)):
            raise ValueError("attractor sample has non-finite coordinates")
        if self.times is not None:
            self.times = np.asarray(self.times, dtype=float)


def sample_attractor(params: SolverParams, u0, t_transient, t_sample, stride=1, keep_fields=False):
    """Observable cloud from snapshots in [t_transient, t_transient + t_sample]."""
    if t_transient < 0 or t_sample < 0:
        raise ConfigurationError("sampling windows must be nonnegative")
    if int(stride) != stride or stride < 1:
        raise ConfigurationError("stride must be a positive integer")
    run = params.replace(t_end=t_transient + t_sample)
    stepper = make_stepper(u0.domain, run)
    pts, times, fields = [], [], []
    i = 0
    # tolerance on the transient edge: snapshot times are n * dt
    edge = t_transient - 1e-9 * max(1.0, t_transient)
    for t, u in iterate(u0, run, stepper):
        if t < edge:
            continue
        if i % stride == 0:
            pts.append((l2_norm(u), h1_norm(u), linf_norm(u)))
            times.append(t)
            if keep_fields:
                fields.append(field_embedding(u))
        i += 1
    return AttractorSample(
        float(params.alpha),
        np.array(pts),
        float(t_transient),
        float(t_sample),
        int(stride),
        np.array(times),
        np.array(fields) if keep_fields else None,
    )


def hausdorff_semidistance(A, B) -> float:
    """max over a in A of the distance from a to the nearest point of B."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise ConfigurationError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    if len(A) == 0 or len(B) == 0:
        raise ConfigurationError("point clouds must be nonempty")
    dist, _ = cKDTree(B).query(A)
    return float(np.max(dist))


@dataclass
class AttractorReport:
    alphas: list
    distances: list  # one-sided distance from A_alpha to A_0
    samples: dict  # alpha -> AttractorSample, alpha = 0 included
    use_fields: bool = False
    failed: dict = field(default_factory=dict)


def attractor_distances(
    u0, alphas, params: SolverParams, t_transient, t_sample, stride=1, use_fields=False,
    max_workers=None,
):
    """Sample clouds for each alpha and alpha = 0 and measure d(A_alpha -> A_0).

    With ``use_fields`` the clouds are snapshot fields in L2 rather than
    (l2, h1, linf) observables.
    """
    alphas = [float(a) for a in alphas]
    unique = sorted(set(alphas) | {0.0}, reverse=True)

    def run(alpha):
        try:
            return sample_attractor(
                params.replace(alpha=alpha), u0, t_transient, t_sample, stride, use_fields
            )
        except NLKSError as exc:
            return exc

    results = dict(zip(unique, parallel_map(run, unique, max_workers)))
    failed = {a: str(r) for a, r in results.items() if isinstance(r, Exception)}
    samples = {a: r for a, r in results.items() if not isinstance(r, Exception)}
    kept, dists = [], []
    if 0.0 in samples:
        ref = samples[0.0]
        for a in alphas:
            if a in samples:
                cloud, ref_cloud = (
                    (samples[a].fields, ref.fields) if use_fields else (samples[a].points, ref.points)
                )
                kept.append(a)
                dists.append(hausdorff_semidistance(cloud, ref_cloud))
    return AttractorReport(kept, dists, samples, use_fields, failed)

"""Right-hand side and ETDRK4 time stepping for the nonlocal KS equation

    u_t + u_xxxx + u_xx + u u_x + alpha H(u_xxx) = 0

on the zero-mean periodic space. In Fourier variables the linear part is
diagonal with symbol q^2 - q^4 - alpha |q|^3; the quadratic term is
evaluated pseudo-spectrally with optional 2/3-rule truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import BlowUpError, ConfigurationError, InvariantViolation
from .series import NormSeries, observe
from .spectral import (
    DomainConfig,
    SpectralField,
    derivative_symbol,
    grid_phase,
    hilbert_symbol,
)

BLOWUP_L2 = 1e6
MEAN_TOL = 1e-10
CONTOUR_POINTS = 32
CONTOUR_RADIUS = 1.0


@dataclass(frozen=True)
class SolverParams:
    alpha: float = 0.0
    dt: float = 0.05
    t_end: float = 100.0
    dealias: bool = True
    snapshot_every: int = 10
    nonlinear: bool = True  # False keeps only the diagonal linear flow

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and self.alpha >= 0):
            raise ConfigurationError(f"alpha must be >= 0, got {self.alpha!r}")
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise ConfigurationError(f"dt must be > 0, got {self.dt!r}")
        if not (np.isfinite(self.t_end) and self.t_end >= 0):
            raise ConfigurationError(f"t_end must be >= 0, got {self.t_end!r}")
        if int(self.snapshot_every) != self.snapshot_every or self.snapshot_every < 1:
            raise ConfigurationError("snapshot_every must be a positive integer")
        object.__setattr__(self, "snapshot_every", int(self.snapshot_every))

    @property
    def n_steps(self) -> int:
        # guard against t_end/dt landing a hair above an integer
        return max(0, math.ceil(self.t_end / self.dt - 1e-9))

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True, eq=False)
class LinearSymbol:
    """Per-mode growth rates lambda_k on the half spectrum k = 0 .. N/2."""

    domain: DomainConfig
    alpha: float
    values: np.ndarray


def local_ks_symbol(domain: DomainConfig) -> LinearSymbol:
    """Symbol of -u_xxxx - u_xx: q^2 - q^4."""
    q = domain.q
    lam = q**2 - q**4
    lam[0] = 0.0
    return LinearSymbol(domain, 0.0, lam)


def linear_symbol(domain: DomainConfig, alpha: float) -> LinearSymbol:
    """q^2 - q^4 - alpha |q|^3.

    The nonlocal part is assembled from the Hilbert and third-derivative
    multipliers, i sgn(k) (i q)^3 = |q|^3. At alpha = 0 this returns the
    local symbol without touching the Hilbert multiplier.
    """
    if alpha < 0:
        raise ConfigurationError(f"alpha must be >= 0, got {alpha!r}")
    local = local_ks_symbol(domain)
    if alpha == 0:
        return local
    nonlocal_ = (hilbert_symbol(domain) * derivative_symbol(domain, 3)).real
    # Nyquist is zeroed in both multipliers; restore its damping so the
    # (always-zero) Nyquist coefficient sees a finite, stable rate
    nonlocal_[-1] = np.abs(domain.q[-1]) ** 3
    return LinearSymbol(domain, float(alpha), local.values - alpha * nonlocal_)


def _nonlinear_coeffs(c, domain, dealias):
    """Coefficients of -u u_x = -(1/2) (u^2)_x from coefficients ``c``."""
    n = domain.grid_size
    phase = grid_phase(domain)
    if dealias:
        c = c * domain.dealias_mask
    u = np.fft.irfft(c * phase, n=n) * n
    sq = np.fft.rfft(u * u) * (phase / n)
    if dealias:
        sq = sq * domain.dealias_mask
    out = -0.5 * derivative_symbol(domain, 1) * sq
    out[0] = 0.0
    out[-1] = 0.0
    return out


def nonlinear_term(u: SpectralField, dealias: bool = True) -> SpectralField:
    return SpectralField(u.domain, _nonlinear_coeffs(u.coeffs, u.domain, dealias))


def rhs(u: SpectralField, symbol: LinearSymbol, dealias: bool = True) -> SpectralField:
    if symbol.domain != u.domain:
        raise ConfigurationError("linear symbol built for a different domain")
    c = symbol.values * u.coeffs + _nonlinear_coeffs(u.coeffs, u.domain, dealias)
    return SpectralField(u.domain, c)


def classical_rhs(u: SpectralField, dealias: bool = True) -> SpectralField:
    """Right-hand side of the local equation u_t = -u_xxxx - u_xx - u u_x."""
    return rhs(u, local_ks_symbol(u.domain), dealias)


def etd_weights(z: np.ndarray, dt: float, points=CONTOUR_POINTS, radius=CONTOUR_RADIUS):
    """ETDRK4 weights for z = lambda * dt by contour averaging.

    Each phi-type function is averaged over ``points`` nodes on a circle of
    ``radius`` around z, which avoids cancellation as z -> 0.
    Returns (Q, f1, f2, f3), already scaled by dt.
    """
    theta = 2.0 * np.pi * (np.arange(points) + 0.5) / points
    r = z[:, None] + radius * np.exp(1j * theta)[None, :]
    er = np.exp(r)
    r3 = r**3
    Q = dt * np.mean((np.exp(r / 2) - 1.0) / r, axis=1).real
    f1 = dt * np.mean((-4.0 - r + er * (4.0 - 3.0 * r + r**2)) / r3, axis=1).real
    f2 = dt * np.mean((2.0 + r + er * (r - 2.0)) / r3, axis=1).real
    f3 = dt * np.mean((-4.0 - 3.0 * r - r**2 + er * (4.0 - r)) / r3, axis=1).real
    return Q, f1, f2, f3


@dataclass(frozen=True, eq=False)
class StepperState:
    """Precomputed ETDRK4 coefficients for one (domain, alpha, dt)."""

    symbol: LinearSymbol
    dt: float
    dealias: bool
    nonlinear: bool
    E: np.ndarray
    E2: np.ndarray
    Q: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray

    @property
    def domain(self):
        return self.symbol.domain

    @classmethod
    def build(cls, symbol: LinearSymbol, dt: float, dealias=True, nonlinear=True):
        z = symbol.values * dt
        E = np.exp(z)
        E2 = np.exp(z / 2)
        Q, f1, f2, f3 = etd_weights(z, dt)
        arrays = (E, E2, Q, f1, f2, f3)
        if not all(np.all(np.isfinite(a)) for a in arrays):
            raise ConfigurationError("non-finite ETDRK4 coefficients; reduce dt")
        for a in arrays:
            a.setflags(write=False)
        return cls(symbol, float(dt), bool(dealias), bool(nonlinear), *arrays)

    def advance(self, c):
        """One ETDRK4 step on a raw coefficient array."""
        if not self.nonlinear:
            return self.E * c
        d, da = self.domain, self.dealias
        Nv = _nonlinear_coeffs(c, d, da)
        a = self.E2 * c + self.Q * Nv
        Na = _nonlinear_coeffs(a, d, da)
        b = self.E2 * c + self.Q * Na
        Nb = _nonlinear_coeffs(b, d, da)
        cc = self.E2 * a + self.Q * (2.0 * Nb - Nv)
        Nc = _nonlinear_coeffs(cc, d, da)
        out = self.E * c + self.f1 * Nv + 2.0 * self.f2 * (Na + Nb) + self.f3 * Nc
        out[0] = 0.0
        return out


def make_stepper(domain: DomainConfig, params: SolverParams) -> StepperState:
    return StepperState.build(
        linear_symbol(domain, params.alpha), params.dt, params.dealias, params.nonlinear
    )


def _check_finite(c, domain, t):
    energy = domain.period * np.sum(domain.parseval_weights * (c.real**2 + c.imag**2))
    if not np.isfinite(energy):
        raise BlowUpError(t, "non-finite coefficient")
    if energy > BLOWUP_L2**2:
        raise BlowUpError(t, f"L2 norm {math.sqrt(energy):.3e} exceeds {BLOWUP_L2:.0e}")


def step_etdrk4(u: SpectralField, stepper: StepperState, t=float("nan")) -> SpectralField:
    """Advance ``u`` by one step of ``stepper.dt``; ``t`` labels blow-up errors."""
    if stepper.domain != u.domain:
        raise ConfigurationError("stepper built for a different domain")
    c = stepper.advance(u.coeffs)
    _check_finite(c, u.domain, t + stepper.dt)
    return SpectralField(u.domain, c)


def iterate(u0: SpectralField, params: SolverParams, stepper: StepperState | None = None):
    """Yield (t, field) at t = 0 and every ``snapshot_every`` steps.

    The final step is always yielded even when it is not a multiple of
    ``snapshot_every``. Time is n * dt, never accumulated.
    """
    domain = u0.domain
    if stepper is None:
        stepper = make_stepper(domain, params)
    n_steps = params.n_steps
    c = u0.coeffs
    yield 0.0, u0
    for n in range(1, n_steps + 1):
        t = n * params.dt
        c = stepper.advance(c)
        _check_finite(c, domain, t)
        if n % params.snapshot_every == 0 or n == n_steps:
            yield t, SpectralField(domain, c)


def integrate(u0: SpectralField, params: SolverParams, observer=None) -> NormSeries:
    """Integrate from ``u0`` and return the recorded norm series.

    ``observer(t, field)`` is called at every snapshot. Raises BlowUpError
    on runaway growth and InvariantViolation if the sampled mean drifts
    beyond 1e-10.
    """
    rows = []
    for t, u in iterate(u0, params):
        row = observe(t, u)
        if abs(row[-1]) > MEAN_TOL:
            raise InvariantViolation(f"mean drifted to {row[-1]:.3e} at t={t:.6g}")
        rows.append(row)
        if observer is not None:
            observer(t, u)
    return NormSeries.from_rows(rows)

"""Zero-mean periodic fields on I = (-l, l) and their Fourier multipliers.

A field is stored by its complex exponential coefficients

    u(x) = sum_k c_k exp(i k pi x / l),   c_{-k} = conj(c_k),

keeping only k = 0 .. N/2 (the negative half follows from realness).
The mean c_0 is pinned to zero and the unpaired Nyquist mode k = N/2 is
held at zero, so odd-order multipliers stay real.

Collocation points are x_j = -l + 2 l j / N. Because the grid starts at
-l rather than 0, the coefficients differ from a plain ``rfft / N`` by the
phase (-1)^k; :func:`grid_phase` carries that factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigurationError, InvariantViolation

__all__ = [
    "DomainConfig",
    "SpectralField",
    "RealField",
    "to_spectral",
    "to_real",
    "derivative",
    "derivative_symbol",
    "hilbert",
    "hilbert_symbol",
    "l2_norm",
    "h1_norm",
    "h2_norm",
    "linf_norm",
    "inner_product",
    "random_field",
    "grid_phase",
    "resample",
]


@dataclass(frozen=True)
class DomainConfig:
    """Half-period ``half_length`` (l) and number of collocation points ``grid_size`` (N)."""

    half_length: float
    grid_size: int

    def __post_init__(self):
        l, n = self.half_length, self.grid_size
        if not np.isfinite(l) or l <= 0:
            raise ConfigurationError(f"half_length must be positive, got {l!r}")
        if int(n) != n or n < 8 or n % 2:
            raise ConfigurationError(f"grid_size must be an even integer >= 8, got {n!r}")
        object.__setattr__(self, "half_length", float(l))
        object.__setattr__(self, "grid_size", int(n))

    @property
    def period(self):
        return 2.0 * self.half_length

    @property
    def n_modes(self):
        """Length of the stored half spectrum, N/2 + 1."""
        return self.grid_size // 2 + 1

    @cached_property
    def k(self) -> np.ndarray:
        return np.arange(self.n_modes)

    @cached_property
    def q(self) -> np.ndarray:
        """Physical wavenumbers k pi / l."""
        return self.k * (np.pi / self.half_length)

    @cached_property
    def x(self) -> np.ndarray:
        n = self.grid_size
        return -self.half_length + self.period * np.arange(n) / n

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """True for modes kept by the 2/3 rule (|k| <= N/3)."""
        return 3 * self.k <= self.grid_size

    @cached_property
    def parseval_weights(self) -> np.ndarray:
        # each interior k stands for the pair (k, -k)
        w = np.full(self.n_modes, 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        return w


def grid_phase(domain: DomainConfig) -> np.ndarray:
    """(-1)^k: maps ``rfft(samples) / N`` onto the coefficients c_k and back."""
    return np.where(domain.k % 2 == 0, 1.0, -1.0)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Real zero-mean periodic function held as its half spectrum c_0 .. c_{N/2}."""

    domain: DomainConfig
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != (self.domain.n_modes,):
            raise ConfigurationError(
                f"expected {self.domain.n_modes} coefficients, got shape {c.shape}"
            )
        if c[0] != 0:
            raise InvariantViolation(f"mean coefficient c_0 = {c[0]!r} must be exactly zero")
        c[-1] = 0.0
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zeros(cls, domain):
        return cls(domain, np.zeros(domain.n_modes, dtype=complex))

    @classmethod
    def from_modes(cls, domain, modes):
        """Build from ``{k: c_k}`` with k >= 1; negative k are filled by symmetry."""
        c = np.zeros(domain.n_modes, dtype=complex)
        for k, value in modes.items():
            if not 1 <= k < domain.n_modes:
                raise ConfigurationError(f"mode {k} outside 1..{domain.n_modes - 1}")
            c[k] = value
        return cls(domain, c)

    @classmethod
    def from_full(cls, domain, full, rtol=1e-12):
        """Build from all N coefficients in FFT order (k = 0, 1, .., -1).

        Raises InvariantViolation when c_{-k} != conj(c_k) beyond ``rtol``
        relative to the largest coefficient.
        """
        full = np.asarray(full, dtype=complex)
        n = domain.grid_size
        if full.shape != (n,):
            raise ConfigurationError(f"expected {n} coefficients, got shape {full.shape}")
        pos = full[1 : n // 2]
        neg = full[n - 1 : n // 2 : -1]
        scale = max(np.max(np.abs(full)), 1.0)
        mismatch = np.max(np.abs(neg - np.conj(pos)), initial=0.0)
        if mismatch > rtol * scale:
            raise InvariantViolation(
                f"Hermitian symmetry broken (max |c_-k - conj c_k| = {mismatch:.3e})"
            )
        if abs(full[0].imag) > rtol * scale:
            raise InvariantViolation("mean coefficient is not real")
        c = np.zeros(domain.n_modes, dtype=complex)
        c[1:-1] = pos
        return cls(domain, c)

    def full_coeffs(self) -> np.ndarray:
        """All N coefficients in FFT order, Nyquist slot included (zero)."""
        n = self.domain.grid_size
        full = np.zeros(n, dtype=complex)
        full[: n // 2] = self.coeffs[: n // 2]
        full[n // 2 + 1 :] = np.conj(self.coeffs[1 : n // 2][::-1])
        return full

    def coefficient(self, k: int) -> complex:
        n = self.domain.grid_size
        if not -n // 2 <= k <= n // 2:
            raise ConfigurationError(f"wavenumber {k} outside [-N/2, N/2]")
        c = self.coeffs[abs(k)]
        return complex(np.conj(c) if k < 0 else c)

    def _check_domain(self, other):
        if self.domain != other.domain:
            raise ConfigurationError(f"domain mismatch: {self.domain} vs {other.domain}")

    def __add__(self, other):
        self._check_domain(other)
        return SpectralField(self.domain, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check_domain(other)
        return SpectralField(self.domain, self.coeffs - other.coeffs)

    def __neg__(self):
        return SpectralField(self.domain, -self.coeffs)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return SpectralField(self.domain, scalar * self.coeffs)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SpectralField):
            return NotImplemented
        return self.domain == other.domain and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class RealField:
    """Samples of a periodic function at the N collocation points."""

    domain: DomainConfig
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.domain.grid_size,):
            raise ConfigurationError(
                f"expected {self.domain.grid_size} samples, got shape {v.shape}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, domain, func):
        return cls(domain, func(domain.x))

    @property
    def x(self):
        return self.domain.x


def to_spectral(f: RealField) -> SpectralField:
    """Discrete Fourier analysis; the mean is discarded (c_0 := 0)."""
    d = f.domain
    c = np.fft.rfft(f.values) * (grid_phase(d) / d.grid_size)
    c[0] = 0.0
    return SpectralField(d, c)


def to_real(u: SpectralField) -> RealField:
    d = u.domain
    if u.coeffs[0] != 0:
        raise InvariantViolation("mean coefficient c_0 must be zero")
    values = np.fft.irfft(u.coeffs * grid_phase(d), n=d.grid_size) * d.grid_size
    return RealField(d, values)


def derivative_symbol(domain: DomainConfig, order: int) -> np.ndarray:
    """(i q_k)^order, with the Nyquist entry zeroed."""
    if order not in (1, 2, 3, 4):
        raise ConfigurationError(f"derivative order must be 1..4, got {order!r}")
    sym = (1j * domain.q) ** order
    sym[-1] = 0.0
    return sym


def hilbert_symbol(domain: DomainConfig) -> np.ndarray:
    """i sgn(k) on k >= 0, with sgn(0) = 0 and the Nyquist entry zeroed."""
    sym = 1j * np.sign(domain.k).astype(complex)
    sym[-1] = 0.0
    return sym


def derivative(u: SpectralField, order: int = 1) -> SpectralField:
    return SpectralField(u.domain, derivative_symbol(u.domain, order) * u.coeffs)


def hilbert(u: SpectralField) -> SpectralField:
    """Periodic Hilbert transform, c_k -> i sgn(k) c_k.

    With this sign convention H(cos(pi x / l)) = -sin(pi x / l) and H(H(u)) = -u.
    """
    return SpectralField(u.domain, hilbert_symbol(u.domain) * u.coeffs)


def inner_product(u: SpectralField, v: SpectralField) -> float:
    """Integral of u v over (-l, l), by Parseval."""
    u._check_domain(v)
    d = u.domain
    s = np.sum(d.parseval_weights * (u.coeffs * np.conj(v.coeffs)).real)
    return float(d.period * s)


def _l2(domain, coeffs):
    return float(np.sqrt(domain.period * np.sum(domain.parseval_weights * np.abs(coeffs) ** 2)))


def l2_norm(u: SpectralField) -> float:
    return _l2(u.domain, u.coeffs)


def h1_norm(u: SpectralField) -> float:
    """||u_x||; a norm on the zero-mean space."""
    return _l2(u.domain, derivative_symbol(u.domain, 1) * u.coeffs)


def h2_norm(u: SpectralField) -> float:
    """||u_xx||."""
    return _l2(u.domain, derivative_symbol(u.domain, 2) * u.coeffs)


def linf_norm(u: SpectralField) -> float:
    """Maximum absolute value over the collocation points."""
    return float(np.max(np.abs(to_real(u).values)))


def random_field(domain: DomainConfig, seed: int, amplitude: float = 1.0, decay: float = 2.0):
    """Seeded random field with |c_k| = amplitude * k**-decay on 1 <= k <= N/6.

    Phases are uniform on [0, 2 pi). Support stops at N/6 so the initial
    data survive the 2/3 truncation untouched.
    """
    if not amplitude > 0 or not decay > 0:
        raise ConfigurationError("amplitude and decay must be positive")
    rng = np.random.default_rng(seed)
    kmax = domain.grid_size // 6
    k = np.arange(1, kmax + 1)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=kmax)
    c = np.zeros(domain.n_modes, dtype=complex)
    c[1 : kmax + 1] = amplitude * k.astype(float) ** (-decay) * np.exp(1j * phase)
    return SpectralField(domain, c)


def resample(u: SpectralField, grid_size: int) -> SpectralField:
    """Same function on a grid of ``grid_size`` points (zero-pad or truncate)."""
    d = DomainConfig(u.domain.half_length, grid_size)
    c = np.zeros(d.n_modes, dtype=complex)
    m = min(d.n_modes, u.domain.n_modes) - 1
    c[:m] = u.coeffs[:m]
    return SpectralField(d, c)

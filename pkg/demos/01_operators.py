"""Fields, the periodic Hilbert transform and the norms used everywhere else.

Run: python demos/01_operators.py
"""
import numpy as np

from nlks import (
    DomainConfig, RealField, SpectralField, check_inequalities, derivative, h1_norm,
    hilbert, inner_product, l2_norm, linf_norm, random_field, to_real, to_spectral,
)

# %% A domain is the half-period l and a grid size N; fields live on (-l, l).
d = DomainConfig(half_length=np.pi, grid_size=32)
u = to_spectral(RealField.from_function(d, np.cos))
print("c_1 of cos(x):", u.coefficient(1))  # 1/2

# %% H maps cos to -sin, and applying it twice flips the sign.
hu = hilbert(u)
print("max |H(cos) + sin| =", np.max(np.abs(to_real(hu).values + np.sin(d.x))))
print("H(H(u)) == -u:", hilbert(hu) == -u)

# %% Norms are computed from coefficients (Parseval, domain length 2l).
s = SpectralField.from_modes(d, {1: -0.5j})  # sin(x)
print(f"||sin||={l2_norm(s):.6f} (sqrt(pi)={np.sqrt(np.pi):.6f}), ||sin'||={h1_norm(s):.6f}")

# %% Random fields: seeded, zero-mean, supported on |k| <= N/6.
big = DomainConfig(16 * np.pi, 256)
g = random_field(big, seed=3, amplitude=1.0, decay=2.0)
print("<g, H g> =", inner_product(g, hilbert(g)))
print("Poincare ratio", l2_norm(g) / (big.period * h1_norm(g)))
print("Agmon ratio   ", linf_norm(g) ** 2 / (2 * l2_norm(g) * h1_norm(g)))
print("d/dx commutes with H:", l2_norm(derivative(hilbert(g)) - hilbert(derivative(g))))

# %% The full suite over many fields.
rep = check_inequalities(seed=0, count=200, domain=big)
for c in rep.checks:
    print(f"  {c.name:26s} worst {c.worst:.2e}  violations {c.violations}")

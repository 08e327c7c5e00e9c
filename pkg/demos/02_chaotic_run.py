"""One long trajectory in the chaotic regime (l = 16 pi, N = 512, dt = 0.05).

Run: python demos/02_chaotic_run.py [alpha]
"""
import sys

import numpy as np

from nlks import DomainConfig, SolverParams, integrate, random_field
from nlks.io import format_norms

alpha = float(sys.argv[1]) if len(sys.argv) > 1 else 0.01
d = DomainConfig(16 * np.pi, 512)
u0 = random_field(d, seed=0)

# %% Integrate and keep a norm row every 10 steps (every 0.5 time units).
series = integrate(u0, SolverParams(alpha=alpha, dt=0.05, t_end=100.0, snapshot_every=10))
print(f"alpha={alpha}: {len(series)} rows, sup L2 {series.sup('l2'):.4f}, "
      f"max |mean| {np.max(np.abs(series.mean)):.1e}")

# %% The same rows as the CLI writes them (first few lines).
print("\n".join(format_norms(series).splitlines()[:6]))

# %% After the transient the energy hovers around a fixed level.
late = series.window(50, 100)
print(f"t in [50, 100]: L2 mean {late.l2.mean():.3f}, std {late.l2.std():.3f}")

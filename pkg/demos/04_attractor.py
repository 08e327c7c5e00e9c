"""Attractor proxies: clouds of (L2, H1, Linf) after a transient, compared to alpha = 0.

Run: python demos/04_attractor.py
"""
import numpy as np

from nlks import DomainConfig, SolverParams, attractor_distances, random_field

d = DomainConfig(16 * np.pi, 512)
u0 = random_field(d, seed=0)
params = SolverParams(dt=0.05, snapshot_every=5)

rep = attractor_distances(u0, [1e-1, 1e-2, 1e-3], params, t_transient=50.0, t_sample=200.0)
for a, dist in zip(rep.alphas, rep.distances):
    cloud = rep.samples[a].points
    print(f"alpha={a:<6g} {len(cloud)} points, L2 in [{cloud[:, 0].min():.2f}, "
          f"{cloud[:, 0].max():.2f}], distance to A_0: {dist:.4f}")

# %% The same comparison in function space (L2 distance between stored snapshots).
# A few hundred snapshots sample a high-dimensional chaotic set sparsely, so here
# the distance mostly measures sampling gaps and need not shrink with alpha.
rep_f = attractor_distances(u0, [1e-1, 1e-2], params, 50.0, 100.0, use_fields=True)
print("field-space distances:", [f"{x:.3f}" for x in rep_f.distances])

#!/usr/bin/env python3
"""Skew-drift Ornstein-Uhlenbeck process: dissipation sweeps and their limits.

With drift alpha J - gamma I (J skew), transport depends on the direction
relative to the null line of J, here spanned by xi = (1, -1, 1):

* along xi the conservative rotation never mixes, D^e ~ |e.xi|^2/(3 gamma)
  diverges as gamma -> 0;
* across xi the rotation decorrelates velocity by itself, D^e -> 0 with
  vanishing dissipation;
* for large gamma every direction follows the universal law
  gamma D^e -> beta^-1.

The sweep table reproduces both qualitative regimes as plain data columns.
"""

import numpy as np

import greenkubo as gk
from greenkubo.sweeps import dissipation_sweep, log_grid

params = {"J": gk.DEFAULT_J3, "alpha": 1.0, "beta": 1.0}
xi = np.array([1.0, -1.0, 1.0])
grid = log_grid(1e-2, 1e2, 9)

for name, e in [("e perpendicular to xi", np.array([1.0, 1.0, 0.0]) / np.sqrt(2)),
                ("e along xi", xi / np.sqrt(3.0))]:
    rows = dissipation_sweep("genou", params, e, grid)
    print(f"{name}:")
    print("    gamma        D^e     gamma*D^e   (predicted gamma->0 and ->inf limits "
          f"of gamma*D^e: {rows[0].small_gamma_limit:.4f}, {rows[0].large_gamma_limit:.4f})")
    for row in rows:
        print(f"  {row.gamma:8.3f}  {row.d_e:9.5f}   {row.gamma_d_e:8.5f}")
    print()

print("closed form check: D^e = (gamma^2 + |e.xi|^2) / (gamma (3 + gamma^2))")
for gamma in (0.01, 1.0, 100.0):
    m = gk.build_genou(gk.DEFAULT_J3, 1.0, gamma, 1.0)
    e = np.array([1.0, 0.0, 0.0])
    formula = (gamma**2 + (e @ xi) ** 2) / (gamma * (3.0 + gamma**2))
    print(f"  gamma = {gamma:6.2f}:  solver {gk.directional_coefficient(m, e):.8f}"
          f"   formula {formula:.8f}")

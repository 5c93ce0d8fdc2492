"""Walk through the burst-count design problem for a two-user link.

Reproduces the running example: user 1 has k=3, q=0.3 and user 2 has
k=2, q=0.4, both at 30 dB transmit power, with cross gains 0.5 / 0.7.
We sweep the target load from light to heavy and watch the candidate
burst counts, the admissible offset intervals, and the optimizer flip
its preferred (N1, N2) as the offset spread grows.
"""

import numpy as np

from burstgic.design import (
    active_set,
    admissible_alpha,
    d_max,
    optimize_N,
    outage_curve,
)
from burstgic.model import UserParams

u1 = UserParams(k=3, q=0.3, P=1000.0, a=0.5)
u2 = UserParams(k=2, q=0.4, P=1000.0, a=0.7)

# 1. the active set grows with the target load ---------------------------
print("active (N1, N2) pairs by load:")
for r in (0.5, 0.7, 0.8):
    act = sorted(active_set(u1, u2, r * u1.lam, r * u2.lam))
    print(f"  R = {r:.1f}*lam -> {act}")

# 2. at half load a single burst per user is the whole story -------------
R1, R2 = 0.5 * u1.lam, 0.5 * u2.lam
adm = admissible_alpha(u1, u2, 1, 1, R1, R2)
print("\nadmissible offset differences at half load, (N1,N2)=(1,1):")
for lo, hi in adm.intervals:
    print(f"  ({lo:+.4f}, {hi:+.4f})")
dm = d_max(u1, u2, 1, 1, R1, R2)
print(f"guaranteed-zero-outage spread d_max = {dm:.4f}")

# 3. outage curves at 0.7*lam: two pairs trade places around d = 2 -------
R1, R2 = 0.7 * u1.lam, 0.7 * u2.lam
ds = list(np.arange(0.25, 3.01, 0.25))
print("\noutage by spread at 0.7*lam:")
print("    d     (1,1)     (1,2)")
c11 = dict(outage_curve(u1, u2, 1, 1, R1, R2, ds).samples)
c12 = dict(outage_curve(u1, u2, 1, 2, R1, R2, ds).samples)
for d in ds:
    print(f"  {d:5.2f}   {c11[d]:7.4f}   {c12[d]:7.4f}")

# 4. the optimizer sees the same crossover -------------------------------
print("\noptimizer winners:")
for d in (1.0, 1.5, 2.0, 2.5):
    best, table = optimize_N(u1, u2, R1, R2, d)
    print(f"  d = {d:.1f}: best {best}, outage {table[best]:.4f}")

"""Tour of the achievable codeword-rate region machinery.

Shows the single-user cap, the symmetric closed form (including a
setting where the region is a union of two disjoint intervals), and the
general grid renderer, then cross-checks the grid's diagonal against
the closed form.
"""

import numpy as np

from burstgic.model import UserParams
from burstgic.region import rbar_c, region, sym_curves, sym_region

u = UserParams(k=2, q=0.3, P=100.0, a=0.5)

# 1. the single-user cap that boxes every region -------------------------
for N in (1, 2, 4):
    print(f"rbar_c(N={N}) = {rbar_c(u, N):.4f}")

# 2. symmetric closed form: thresholds and the rate interval -------------
c = sym_curves(2, 1.0, u.lam, u.a, u.P, 0.5)
print(f"\ngamma0 = {c.gamma0:.4f} ({10 * np.log10(c.gamma0):.2f} dB),"
      f" branch_low = {c.branch_low}")
iv = sym_region(2, 1.0, u.lam, u.a, u.P, 0.5)
print("symmetric region, alpha = 0.5:",
      [(round(lo, 4), round(hi, 4)) for lo, hi in iv.intervals])

# 3. larger offsets can split the region in two --------------------------
iv5 = sym_region(2, 1.0, u.lam, u.a, u.P, 5.0)
print("symmetric region, alpha = 5.0:",
      [(round(lo, 4), round(hi, 4)) for lo, hi in iv5.intervals])

# 4. the general grid agrees with the closed form on the diagonal --------
reg = region(u, u, 2, 2, 1.0, 1.0, 5.0, m_grid=40, resolution=0.08)
xs = reg.xs()
cell = reg.cell[0]
mism = 0
for ix, x in enumerate(xs):
    member = bool(reg.mask[ix, ix])
    inside = any(lo + cell < x < hi - cell for lo, hi in iv5.intervals)
    outside = all(x < lo - cell or x > hi + cell for lo, hi in iv5.intervals)
    if (member and outside) or (not member and inside):
        mism += 1
print(f"\ngrid vs closed form on the diagonal: {len(xs)} cells,"
      f" {mism} mismatches beyond one cell")

# 5. a quick ASCII rendering of the disconnected region ------------------
print("\nregion mask (x = achievable), alpha = 5.0:")
step = max(1, reg.mask.shape[0] // 30)
for iy in range(reg.mask.shape[1] - 1, -1, -step):
    row = "".join("x" if reg.mask[ix, iy] else "." for ix in
                  range(0, reg.mask.shape[0], step))
    print("  " + row)

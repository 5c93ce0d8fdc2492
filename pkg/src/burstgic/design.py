"""Burst-count design against random activation offsets.

Given target average rates, enumerate the feasible burst counts (N1, N2),
work out which offset differences alpha = nu2 - nu1 keep every codeword
decodable, and pick the (N1, N2) minimizing the outage probability when
the offsets are drawn uniformly from [0, d].
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect as _bisect

from burstgic.geometry import BurstLayout, alpha_breakpoints
from burstgic.model import (
    UserParams,
    capacity_c,
    derive_scheme_v,
    rate_pair,
)
from burstgic.reliability import rate_bound

__all__ = [
    "InfeasibleDesignError",
    "IntervalUnion",
    "OutageCurve",
    "rbar_target",
    "active_set",
    "please1_holds",
    "admissible_alpha",
    "inadmissible_alpha",
    "outage",
    "d_max",
    "optimize_N",
    "outage_curve",
]

_MERGE_TOL = 1e-12


class InfeasibleDesignError(ValueError):
    """No burst count is compatible with the requested rates."""


@dataclass(frozen=True)
class IntervalUnion:
    """Union of disjoint open intervals, kept sorted."""

    intervals: tuple

    @classmethod
    def from_intervals(cls, pairs) -> "IntervalUnion":
        """Normalize: drop empty pieces, sort, merge overlaps and touches."""
        pairs = sorted((lo, hi) for lo, hi in pairs if hi - lo > 0)
        merged = []
        for lo, hi in pairs:
            if merged and lo <= merged[-1][1] + _MERGE_TOL:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        return cls(intervals=tuple((lo, hi) for lo, hi in merged))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, x: float) -> bool:
        for lo, hi in self.intervals:
            if lo < x < hi:
                return True
        return False

    def contains_many(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized membership (boundary points count as outside only up
        to float resolution, which is immaterial for continuous draws)."""
        if self.is_empty:
            return np.zeros(len(xs), dtype=bool)
        bounds = np.array([b for iv in self.intervals for b in iv])
        return np.searchsorted(bounds, xs) % 2 == 1

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion.from_intervals(self.intervals + other.intervals)

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        out = []
        for a_lo, a_hi in self.intervals:
            for b_lo, b_hi in other.intervals:
                lo, hi = max(a_lo, b_lo), min(a_hi, b_hi)
                if lo < hi:
                    out.append((lo, hi))
        return IntervalUnion.from_intervals(out)

    def measure(self) -> float:
        return sum(hi - lo for lo, hi in self.intervals)


@dataclass(frozen=True)
class OutageCurve:
    """Outage probability sampled over a grid of offset spreads d."""

    N1: int
    N2: int
    samples: tuple  # of (d, outage)

    def __post_init__(self):
        if any(not 0.0 <= p <= 1.0 for _, p in self.samples):
            raise ValueError("outage values must lie in [0, 1]")


def rbar_target(u: UserParams, N: int) -> float:
    """Largest average rate with a decodable interference-free codeword.

    Solves theta_hat(R) * C(gamma_hat(R)) = k/N for R on (0, lam) by
    bisection; the left side strictly exceeds k/N below the root.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    lam = u.lam

    def h(R):
        theta = (lam / R - 1.0) / u.q
        gamma = (u.P / N) * lam / (lam - R)
        return theta * capacity_c(gamma) - u.k / N

    lo, hi = lam * 1e-12, lam * (1.0 - 1e-12)
    if h(lo) <= 0.0:
        raise InfeasibleDesignError(
            f"no feasible rate for N={N}: even R->0 cannot carry k/N={u.k / N}"
        )
    if h(hi) >= 0.0:  # theta*phi -> 0 as R -> lam, so this cannot happen
        raise InfeasibleDesignError("bracketing failed at R near lam")
    return float(_bisect(h, lo, hi, xtol=1e-10))


def _n_window(u: UserParams, R: float) -> list:
    """All N whose feasible-rate window contains R.

    The window bounds are strict; a rate sitting on a bound (up to float
    noise) is excluded, so e.g. R = 0.8*lam does not activate N = 4.
    """
    if not 0.0 < R < u.lam:
        raise ValueError(f"R must be in (0, lam={u.lam}), got {R}")
    tol = 1e-9 * u.lam
    out = []
    N = 1
    while True:
        lower = u.lam * N / (N + 1.0) if N > 1 else 0.0
        if lower >= R - tol:
            break
        if R < rbar_target(u, N) - tol:
            out.append(N)
        N += 1
    return out


def active_set(u1: UserParams, u2: UserParams, R1: float, R2: float) -> set:
    """Burst-count pairs (N1, N2) compatible with the target rates."""
    w1, w2 = _n_window(u1, R1), _n_window(u2, R2)
    return {(a, b) for a in w1 for b in w2}


def _schemes_and_rates(u1, u2, N1, N2, R1, R2):
    s1 = derive_scheme_v(u1, N1, R1)
    s2 = derive_scheme_v(u2, N2, R2)
    rp1 = rate_pair(s1.gamma, s2.gamma, u2.a)
    rp2 = rate_pair(s2.gamma, s1.gamma, u1.a)
    return s1, s2, rp1, rp2


def please1_holds(u1: UserParams, u2: UserParams, R1: float, R2: float) -> bool:
    """Whether offsets can matter: every active (N1, N2) leaves at least
    one user above its always-reliable load."""
    act = active_set(u1, u2, R1, R2)
    if not act:
        raise InfeasibleDesignError("active set is empty")
    worst = math.inf
    for N1, N2 in act:
        s1, s2, rp1, rp2 = _schemes_and_rates(u1, u2, N1, N2, R1, R2)
        val = max(s1.eta / (s1.theta * rp1.psi), s2.eta / (s2.theta * rp2.psi))
        worst = min(worst, val)
    return worst >= 1.0


def _affine_threshold(s1, s2, user, j, rp, a_probe, b_probe):
    """Reconstruct the affine map alpha -> reliability threshold on one
    state interval from two probe evaluations."""

    def at(nu1, nu2):
        l = BurstLayout(mu1=s1.mu, theta1=s1.theta, nu1=nu1, N1=s1.N,
                        mu2=s2.mu, theta2=s2.theta, nu2=nu2, N2=s2.N)
        return rate_bound(l, user, j, rp)

    ta, tb = at(0.0, a_probe), at(0.0, b_probe)
    slope = (tb - ta) / (b_probe - a_probe)
    # offsets must enter only through their difference: the coefficient on
    # nu1 has to cancel the coefficient on nu2
    h = 1e-5 * max(1.0, abs(a_probe))
    c1 = (at(h, a_probe + h) - ta) / h
    if abs(c1) > 1e-6 * max(1.0, abs(slope)):
        raise AssertionError(
            f"threshold depends on (nu1, nu2) beyond their difference: "
            f"joint-shift derivative {c1}"
        )
    return slope, ta - slope * a_probe


def _alpha_analysis(u1, u2, N1, N2, R1, R2):
    """Admissible and inadmissible alpha intervals for one (N1, N2)."""
    s1, s2, rp1, rp2 = _schemes_and_rates(u1, u2, N1, N2, R1, R2)
    if s1.eta < s1.theta * rp1.psi and s2.eta < s2.theta * rp2.psi:
        # every overlap pattern decodes; offsets are irrelevant
        full = IntervalUnion.from_intervals([(-math.inf, math.inf)])
        return full, IntervalUnion.from_intervals([])

    bps = alpha_breakpoints((s1, s2))
    edges = [-math.inf] + bps + [math.inf]
    adm, bad = [], []
    for lo, hi in zip(edges, edges[1:]):
        if math.isinf(lo):
            pa, pb = hi - 1.5, hi - 0.5
        elif math.isinf(hi):
            pa, pb = lo + 0.5, lo + 1.5
        else:
            pa, pb = lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0
        clo, chi = lo, hi
        for user, s, rp in ((1, s1, rp1), (2, s2, rp2)):
            for j in range(1, s.N + 1):
                slope, icept = _affine_threshold(s1, s2, user, j, rp, pa, pb)
                margin = icept - s.eta  # eta < slope*alpha + icept
                if abs(slope) <= 1e-12:
                    if margin <= 0.0:
                        clo, chi = hi, hi  # nothing admissible here
                        break
                elif slope > 0.0:
                    clo = max(clo, -margin / slope)
                else:
                    chi = min(chi, -margin / slope)
            if clo >= chi:
                break
        if clo < chi:
            adm.append((clo, chi))
            if clo > lo:
                bad.append((lo, clo))
            if chi < hi:
                bad.append((chi, hi))
        else:
            bad.append((lo, hi))
    return IntervalUnion.from_intervals(adm), IntervalUnion.from_intervals(bad)


def admissible_alpha(u1: UserParams, u2: UserParams, N1: int, N2: int,
                     R1: float, R2: float) -> IntervalUnion:
    """Offset differences alpha for which every codeword decodes reliably.

    Piecewise construction: between consecutive breakpoints the overlap
    pattern is frozen, each codeword's threshold is affine in alpha, and
    the admissible part of the piece is a single interval.
    """
    return _alpha_analysis(u1, u2, N1, N2, R1, R2)[0]


def inadmissible_alpha(u1: UserParams, u2: UserParams, N1: int, N2: int,
                       R1: float, R2: float) -> IntervalUnion:
    """Complement of admissible_alpha within the breakpoint sweep (the
    grey region of offset differences that break some codeword)."""
    return _alpha_analysis(u1, u2, N1, N2, R1, R2)[1]


def _triangular_cdf(x: float, d: float) -> float:
    """CDF of nu2 - nu1 with nu_i i.i.d. uniform on [0, d]."""
    if x <= -d:
        return 0.0
    if x >= d:
        return 1.0
    if x <= 0.0:
        return (x + d) ** 2 / (2.0 * d * d)
    return 1.0 - (d - x) ** 2 / (2.0 * d * d)


def outage(adm: IntervalUnion, d: float) -> float:
    """Probability that the offset difference misses the admissible set."""
    if d <= 0:
        raise ValueError(f"d must be positive, got {d}")
    p = sum(
        _triangular_cdf(hi, d) - _triangular_cdf(lo, d)
        for lo, hi in adm.intervals
    )
    return min(1.0, max(0.0, 1.0 - p))


def d_max(u1: UserParams, u2: UserParams, N1: int, N2: int,
          R1: float, R2: float) -> float:
    """Largest offset spread with guaranteed zero outage.

    Returns +inf when no offset difference is inadmissible at all, and 0
    when inadmissible points sit arbitrarily close to alpha = 0.
    """
    _, bad = _alpha_analysis(u1, u2, N1, N2, R1, R2)
    if bad.is_empty:
        return math.inf
    dist = math.inf
    for lo, hi in bad.intervals:
        if lo < 0.0 < hi:
            return 0.0
        dist = min(dist, abs(lo) if lo >= 0.0 else abs(hi))
    return dist


def optimize_N(u1: UserParams, u2: UserParams, R1: float, R2: float,
               d: float):
    """Outage-minimizing burst counts at spread d.

    Returns ((N1, N2), table) where table maps each active pair to its
    outage. Ties go to the smallest N1+N2, then the smallest N1.
    """
    act = sorted(active_set(u1, u2, R1, R2))
    if not act:
        raise InfeasibleDesignError("active set is empty")
    table = {}
    for N1, N2 in act:
        adm = admissible_alpha(u1, u2, N1, N2, R1, R2)
        table[(N1, N2)] = outage(adm, d)
    best = min(act, key=lambda p: (round(table[p], 12), p[0] + p[1], p[0]))
    return best, table


def outage_curve(u1: UserParams, u2: UserParams, N1: int, N2: int,
                 R1: float, R2: float, ds) -> OutageCurve:
    """Outage versus spread d for one burst-count pair."""
    adm = admissible_alpha(u1, u2, N1, N2, R1, R2)
    samples = tuple((float(d), outage(adm, d)) for d in ds)
    return OutageCurve(N1=N1, N2=N2, samples=samples)

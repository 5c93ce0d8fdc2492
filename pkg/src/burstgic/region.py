"""Achievable long-run codeword-rate regions.

Everything lives in the (R_c1, R_c2) plane. Once a channel state fixes which
burst overlaps which codeword, both the geometric orderings and the decoding
conditions are affine in the rates, so each state contributes a polyhedron
pair (geom_polyhedron, rel_polyhedron) and the full region is their union
over states and over a finite grid of transmit powers. region() evaluates
that union pointwise without enumerating states: it rebuilds each grid
point's own layout and checks every codeword directly, which is the same
predicate. The symmetric model collapses to a union of intervals on the
diagonal (sym_curves, sym_region).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .design import IntervalUnion
from .geometry import ChannelStateS, OverlapTriple, triples_from_state
from .model import UserParams, capacity_c, rate_pair

_AREA_TOL = 1e-12


@dataclass(frozen=True)
class HalfPlane:
    """Open half-plane {(x, y): a*x + b*y < c}."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a == 0.0 and self.b == 0.0:
            raise ValueError("half-plane needs a nonzero normal")

    def contains(self, x, y):
        return self.a * x + self.b * y < self.c

    def margin(self, x, y):
        """Signed slack c - (a*x + b*y); positive strictly inside."""
        return self.c - (self.a * x + self.b * y)


def _shoelace(poly) -> float:
    if len(poly) < 3:
        return 0.0
    s = 0.0
    for i, (x, y) in enumerate(poly):
        x2, y2 = poly[(i + 1) % len(poly)]
        s += x * y2 - x2 * y
    return 0.5 * s


@dataclass(frozen=True)
class Polyhedron:
    """Intersection of finitely many open half-planes (possibly unbounded)."""

    rows: tuple

    def __post_init__(self):
        if not self.rows or not all(isinstance(r, HalfPlane) for r in self.rows):
            raise ValueError("need at least one HalfPlane row")

    def contains(self, x, y):
        return all(r.contains(x, y) for r in self.rows)

    def margin(self, x, y):
        """Smallest row slack; positive iff strictly inside (vectorized)."""
        return np.min([r.margin(x, y) for r in self.rows], axis=0)

    def clip(self, x0, x1, y0, y1) -> tuple:
        """Vertices (CCW) of the polyhedron cut to a box.

        Sutherland-Hodgman against each row in turn, treating boundaries as
        closed; an empty tuple means the intersection carries no area.
        """
        poly = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        for r in self.rows:
            if not poly:
                break
            out = []
            for i, p in enumerate(poly):
                q = poly[(i + 1) % len(poly)]
                p_in = r.a * p[0] + r.b * p[1] <= r.c
                q_in = r.a * q[0] + r.b * q[1] <= r.c
                if p_in:
                    out.append(p)
                if p_in != q_in:
                    den = r.a * (q[0] - p[0]) + r.b * (q[1] - p[1])
                    t = (r.c - r.a * p[0] - r.b * p[1]) / den
                    out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
            poly = out
        if abs(_shoelace(poly)) <= _AREA_TOL:
            return ()
        return tuple(poly)

    def is_empty_in(self, x0, x1, y0, y1) -> bool:
        return not self.clip(x0, x1, y0, y1)


def _check_convex(poly):
    if len(poly) < 3 or abs(_shoelace(poly)) <= _AREA_TOL:
        raise ValueError("polygon is degenerate")
    n = len(poly)
    for i in range(n):
        ax, ay = poly[i]
        bx, by = poly[(i + 1) % n]
        cx, cy = poly[(i + 2) % n]
        cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        if cross < -1e-9 * max(1.0, abs(bx - ax) + abs(by - ay)):
            raise ValueError("polygon is not convex/CCW")


@dataclass(frozen=True, eq=False)
class Region2D:
    """A rate region rendered on a bounding box.

    The primary representation is a boolean occupancy grid (mask[ix, iy]
    says whether cell center (xs()[ix], ys()[iy]) is achievable), which
    stays honest for the disconnected, non-convex unions that show up here.
    A list of convex CCW polygons may ride along when the region came from
    clipping explicit polyhedra.
    """

    x0: float
    x1: float
    y0: float
    y1: float
    mask: np.ndarray
    polygons: tuple = ()

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("degenerate bounding box")
        if self.mask.ndim != 2 or self.mask.dtype != np.bool_:
            raise ValueError("mask must be a 2-d boolean array")
        for poly in self.polygons:
            _check_convex(poly)

    @property
    def cell(self):
        nx, ny = self.mask.shape
        return (self.x1 - self.x0) / nx, (self.y1 - self.y0) / ny

    def xs(self):
        nx = self.mask.shape[0]
        return self.x0 + self.cell[0] * (np.arange(nx) + 0.5)

    def ys(self):
        ny = self.mask.shape[1]
        return self.y0 + self.cell[1] * (np.arange(ny) + 0.5)

    def contains(self, x, y) -> bool:
        """Membership of the cell holding (x, y); False outside the box."""
        if not (self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1):
            return False
        dx, dy = self.cell
        ix = min(int((x - self.x0) / dx), self.mask.shape[0] - 1)
        iy = min(int((y - self.y0) / dy), self.mask.shape[1] - 1)
        return bool(self.mask[ix, iy])

    @classmethod
    def from_polyhedra(cls, polys, x0, x1, y0, y1, resolution) -> "Region2D":
        """Rasterize a union of polyhedra, keeping their clipped polygons."""
        nx = max(2, int(math.ceil((x1 - x0) / resolution)))
        ny = max(2, int(math.ceil((y1 - y0) / resolution)))
        xs = x0 + (x1 - x0) / nx * (np.arange(nx) + 0.5)
        ys = y0 + (y1 - y0) / ny * (np.arange(ny) + 0.5)
        mask = np.zeros((nx, ny), dtype=bool)
        kept = []
        for p in polys:
            verts = p.clip(x0, x1, y0, y1)
            if not verts:
                continue
            kept.append(verts)
            X, Y = np.meshgrid(xs, ys, indexing="ij")
            mask |= np.asarray(p.margin(X, Y)) > 0
        return cls(x0, x1, y0, y1, mask, tuple(kept))


# ---------------------------------------------------------------------------
# rate caps and power grids

def _rbar_raw(lam: float, P: float, N: int) -> float:
    def short(R):
        return R - capacity_c((1.0 / N + R / lam) * P)

    hi = 64.0
    while short(hi) < 0:
        hi *= 2.0
    return brentq(short, 0.0, hi, xtol=1e-10)


def rbar_c(u: UserParams, N: int) -> float:
    """Largest useful codeword rate: the root of R = C((1/N + R/lam)P).

    Above it even a never-interfered codeword at the full power budget
    fails, so it bounds every achievable region box.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return _rbar_raw(u.lam, u.P, N)


def gamma_grid(u: UserParams, N: int, m: int) -> np.ndarray:
    """Interior power grid {(l/m)*gamma_bar : l = 1..m-1}."""
    if m < 2:
        raise ValueError(f"power grid needs m >= 2, got {m}")
    gbar = (1.0 / N + rbar_c(u, N) / u.lam) * u.P
    return gbar * np.arange(1, m) / m


# ---------------------------------------------------------------------------
# per-state polyhedra

def geom_polyhedron(S: ChannelStateS, theta1, theta2, lam1, lam2, alpha,
                    N1: int, N2: int) -> Polyhedron:
    """Linear constraints pinning every Tx-2 burst endpoint to its interval.

    Intervals are indexed 1..2*N1+1 by the partition Tx-1's burst endpoints
    cut on the time axis; the state says where each Tx-2 endpoint landed.
    A run of consecutive endpoints in the same interval only needs its
    outermost two bounds (their mutual order is already forced by the burst
    spacing), and the open end intervals have no outer bound at all. The
    two closing rows keep each user's bursts apart from their successors.
    """
    if len(S.pairs) != N2:
        raise ValueError(f"state has {len(S.pairs)} pairs, expected N2={N2}")
    if max(S.flat) > 2 * N1 + 1:
        raise ValueError("state indices exceed 2*N1+1")

    def lower(w):
        # affine (cR1, cR2, c0) for the interval's left edge, None at w=1
        if w == 1:
            return None
        if w % 2 == 0:
            return (w // 2 * theta1 / lam1, 0.0, 0.0)
        return ((w - 1) // 2 * theta1 / lam1, 0.0, theta1)

    def upper(w):
        if w == 2 * N1 + 1:
            return None
        if w % 2 == 0:
            return (w // 2 * theta1 / lam1, 0.0, theta1)
        return ((w + 1) // 2 * theta1 / lam1, 0.0, 0.0)

    def endpoint(m):
        # E_1, E_2, ... = B_1, B'_1, B_2, B'_2, ...
        j = (m + 1) // 2
        return (0.0, j * theta2 / lam2, alpha + (theta2 if m % 2 == 0 else 0.0))

    flat = S.flat
    rows = []
    m = 1
    while m <= 2 * N2:
        m_end = m
        while m_end < 2 * N2 and flat[m_end] == flat[m - 1]:
            m_end += 1
        lo, up = lower(flat[m - 1]), upper(flat[m - 1])
        if lo is not None:
            e = endpoint(m)
            rows.append(HalfPlane(lo[0] - e[0], lo[1] - e[1], e[2] - lo[2]))
        if up is not None:
            e = endpoint(m_end)
            rows.append(HalfPlane(e[0] - up[0], e[1] - up[1], up[2] - e[2]))
        m = m_end + 1
    if N1 > 1:
        rows.append(HalfPlane(-1.0, 0.0, -lam1))
    if N2 > 1:
        rows.append(HalfPlane(0.0, -1.0, -lam2))
    return Polyhedron(rows=tuple(rows))


def _covered_affine(t: OverlapTriple, j: int, theta_own, theta_other,
                    nu_own, nu_other):
    """Interfered length of codeword j as (coef_mu_own, coef_mu_other, const)."""
    wm, wp, win = t.w_minus, t.w_plus, t.w_in
    if wm and wp:
        if wm == wp:
            return 0.0, 0.0, theta_own
        assert wp - wm == win + 1, t
        return 0.0, -(1.0 + win), theta_own + (1.0 + win) * theta_other
    if wm:
        return -float(j), float(wm), nu_other - nu_own + (1.0 + win) * theta_other
    if wp:
        return float(j), -float(wp), nu_own - nu_other + theta_own + win * theta_other
    return 0.0, 0.0, win * theta_other


def rel_polyhedron(S: ChannelStateS, theta1, theta2, lam1, lam2, alpha,
                   gamma1, gamma2, a1, a2, N1: int, N2: int,
                   P1, P2) -> Polyhedron:
    """Decoding constraints of every codeword at one fixed power pair.

    The state pins each codeword's overlap triple, making its interfered
    length affine in (R_c1, R_c2); each decoding condition is then a single
    open half-plane. The last two rows are the average-power constraints.
    """
    if gamma1 < 0 or gamma2 < 0:
        raise ValueError("powers must be nonnegative")
    triples = triples_from_state(S, N1, N2)
    rp = {1: rate_pair(gamma1, gamma2, a2), 2: rate_pair(gamma2, gamma1, a1)}
    theta = {1: theta1, 2: theta2}
    lam = {1: lam1, 2: lam2}
    nu = {1: 0.0, 2: alpha}
    counts = {1: N1, 2: N2}
    rows = []
    for user in (1, 2):
        other = 3 - user
        d = rp[user].phi - rp[user].psi
        for j in range(1, counts[user] + 1):
            cown, coth, c0 = _covered_affine(
                triples[(user, j)], j, theta[user], theta[other],
                nu[user], nu[other])
            a_own = theta[user] * (1.0 + d * cown / lam[user])
            b_oth = d * coth * theta[other] / lam[other]
            rhs = theta[user] * rp[user].phi - d * c0
            if user == 1:
                rows.append(HalfPlane(a_own, b_oth, rhs))
            else:
                rows.append(HalfPlane(b_oth, a_own, rhs))
    rows.append(HalfPlane(-1.0, 0.0, lam1 * (1.0 / N1 - gamma1 / P1)))
    rows.append(HalfPlane(0.0, -1.0, lam2 * (1.0 / N2 - gamma2 / P2)))
    return Polyhedron(rows=tuple(rows))


# ---------------------------------------------------------------------------
# the full region on a power grid

def _covered_lengths(R1, R2, lam1, lam2, theta1, theta2, alpha, N1, N2):
    """Interfered length of every codeword of both users, broadcast over
    arrays of rate points. Returns (cov1, cov2) with trailing axes N1, N2."""
    mu1 = theta1 * R1 / lam1
    mu2 = theta2 * R2 / lam2
    j1 = np.arange(1, N1 + 1, dtype=float)
    j2 = np.arange(1, N2 + 1, dtype=float)
    s1 = mu1[..., None, None] * j1[:, None]
    s2 = alpha + mu2[..., None, None] * j2[None, :]
    over = np.minimum(s1 + theta1, s2 + theta2) - np.maximum(s1, s2)
    np.clip(over, 0.0, None, out=over)
    return over.sum(axis=-1), over.sum(axis=-2)


def region_members(u1: UserParams, u2: UserParams, N1: int, N2: int,
                   theta1, theta2, alpha, m_grid: int, R1, R2) -> np.ndarray:
    """Membership of rate points in the power-gridded achievable region.

    A point is in iff the worst-covered codeword of each user decodes and
    both power budgets hold, for at least one power pair on the grid. The
    worst codeword suffices because all of a user's codewords share the
    same (phi, psi) at a fixed power pair.
    """
    R1 = np.asarray(R1, dtype=float)
    R2 = np.asarray(R2, dtype=float)
    if R1.shape != R2.shape:
        raise ValueError("R1 and R2 must have matching shapes")
    base = (R1 > (u1.lam if N1 > 1 else 0.0)) & (R2 > (u2.lam if N2 > 1 else 0.0))
    cov1, cov2 = _covered_lengths(R1, R2, u1.lam, u2.lam, theta1, theta2,
                                  alpha, N1, N2)
    worst1 = cov1.max(axis=-1)
    worst2 = cov2.max(axis=-1)
    cap1 = (1.0 / N1 + R1 / u1.lam) * u1.P
    cap2 = (1.0 / N2 + R2 / u2.lam) * u2.P
    members = np.zeros(R1.shape, dtype=bool)
    for g1 in gamma_grid(u1, N1, m_grid):
        for g2 in gamma_grid(u2, N2, m_grid):
            rp1 = rate_pair(g1, g2, u2.a)
            rp2 = rate_pair(g2, g1, u1.a)
            ok = (g1 <= cap1) & (g2 <= cap2)
            ok &= theta1 * R1 < theta1 * rp1.phi - (rp1.phi - rp1.psi) * worst1
            ok &= theta2 * R2 < theta2 * rp2.phi - (rp2.phi - rp2.psi) * worst2
            members |= ok
        if members.all():
            break
    return members & base


def region(u1: UserParams, u2: UserParams, N1: int, N2: int, theta1, theta2,
           alpha, m_grid: int = 10, resolution: float | None = None) -> Region2D:
    """Achievable-region occupancy grid on the natural bounding box.

    The box is [lam1*1{N1>1}, rbar_c1] x [lam2*1{N2>1}, rbar_c2] and
    resolution is the cell size (default: a 100x100 grid).
    """
    lo1 = u1.lam if N1 > 1 else 0.0
    lo2 = u2.lam if N2 > 1 else 0.0
    hi1 = rbar_c(u1, N1)
    hi2 = rbar_c(u2, N2)
    if resolution is None:
        resolution = max(hi1 - lo1, hi2 - lo2) / 100.0
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    nx = max(2, int(math.ceil((hi1 - lo1) / resolution)))
    ny = max(2, int(math.ceil((hi2 - lo2) / resolution)))
    xs = lo1 + (hi1 - lo1) / nx * (np.arange(nx) + 0.5)
    ys = lo2 + (hi2 - lo2) / ny * (np.arange(ny) + 0.5)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    mask = region_members(u1, u2, N1, N2, theta1, theta2, alpha, m_grid, X, Y)
    return Region2D(lo1, hi1, lo2, hi2, mask)


# ---------------------------------------------------------------------------
# symmetric model

def _check_sym_args(N, theta, lam, a, P, alpha):
    if not (isinstance(N, int) and N >= 1):
        raise ValueError(f"N must be a positive integer, got {N!r}")
    if theta <= 0 or lam <= 0 or P <= 0:
        raise ValueError("theta, lam and P must be positive")
    if a < 0 or alpha < 0:
        raise ValueError("a and alpha must be nonnegative")


def _jstar(mu: float, alpha: float) -> int:
    """Offset class: the j with alpha/j < mu < alpha/(j-1)."""
    if alpha <= 0:
        return 1
    js = int(math.floor(alpha / mu)) + 1
    if not alpha / js < mu:
        raise ValueError(f"mu={mu} sits exactly on a breakpoint alpha/{js}")
    return js


def sym_omega(N: int, mu: float, theta: float, alpha: float) -> dict:
    """Overlap triples of the symmetric layout, straight from (mu, theta, alpha).

    Closed-form counterpart of overlap_profile when both users share N, mu
    and theta (offsets 0 and alpha >= 0). w_in is always 0: equal-length
    bursts never nest strictly.
    """
    if mu <= 0 or theta <= 0:
        raise ValueError("mu and theta must be positive")
    if N > 1 and mu <= theta:
        raise ValueError("bursts overlap their own successors")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    js = _jstar(mu, alpha)
    lo_ok = mu > (alpha - theta) / (js - 1) if js > 1 else alpha < theta
    hi_ok = mu < (alpha + theta) / js
    out = {}
    for j in range(1, N + 1):
        wm1 = j - js if j >= js + 1 and hi_ok else 0
        wp1 = j - js + 1 if j >= js and lo_ok else 0
        wm2 = j + js - 1 if j <= N - js + 1 and lo_ok else 0
        wp2 = j + js if j <= N - js and hi_ok else 0
        out[(1, j)] = OverlapTriple(wm1, wp1, 0)
        out[(2, j)] = OverlapTriple(wm2, wp2, 0)
    return out


@dataclass(frozen=True)
class SymCurves:
    """Per-power envelope of the symmetric rate interval (alpha < theta).

    For each power gamma the achievable codeword rates form the single
    interval (max(f(gamma), power_line(gamma)), g(gamma)), with f = g = 0
    encoding empty. gamma0 solves 2*psi = phi and only selects the branch;
    gamma1 solves psi = lam (+inf when psi saturates below lam); gamma2 is
    where the overlap-free cap crosses (1 + alpha/theta)*lam, the handoff
    between the ratio-form bound and the overlap-free bound.
    """

    N: int
    theta: float
    lam: float
    a: float
    P: float
    alpha: float
    gamma0: float
    gamma1: float
    gamma2: float

    def __post_init__(self):
        if self.gamma0 <= 0:
            raise ValueError("gamma0 must be positive")

    @property
    def branch_low(self) -> bool:
        """True when lam < psi(gamma0), the empty-until-gamma1 branch."""
        return self.a == 0.0 or self.lam < self.psi(self.gamma0)

    def phi(self, gamma):
        return capacity_c(gamma)

    def psi(self, gamma):
        return capacity_c(gamma / (1.0 + self.a * gamma))

    def clear_cap(self, gamma):
        """Rate cap when only the offset stub of a codeword is interfered."""
        p, s = self.phi(gamma), self.psi(gamma)
        return s + self.alpha / self.theta * (p - s)

    def ratio_cap(self, gamma):
        """The bound (2*psi - phi) / (1 - (phi - psi)/lam).

        Upper bound while the denominator is positive, lower bound once it
        flips sign; each branch only evaluates it where it is the active
        finite bound.
        """
        p, s = self.phi(gamma), self.psi(gamma)
        return (2.0 * s - p) / (1.0 - (p - s) / self.lam)

    def power_line(self, gamma):
        return (gamma / self.P - 1.0 / self.N) * self.lam

    def f(self, gamma):
        if self.branch_low:
            return 0.0 if gamma <= self.gamma1 else self.lam
        if gamma <= self.gamma2:
            return 0.0
        if gamma <= self.gamma1:
            return self.ratio_cap(gamma)
        return self.lam

    def g(self, gamma):
        if self.branch_low:
            if gamma <= self.gamma1:
                return 0.0
            if gamma <= self.gamma2:
                return self.ratio_cap(gamma)
            return self.clear_cap(gamma)
        return 0.0 if gamma <= self.gamma2 else self.clear_cap(gamma)


def sym_curves(N: int, theta, lam, a, P, alpha) -> SymCurves:
    """Closed-form symmetric-model curves; requires alpha < theta."""
    _check_sym_args(N, theta, lam, a, P, alpha)
    if not alpha < theta:
        raise ValueError(f"closed form needs alpha < theta, got {alpha} >= {theta}")
    if a > 0:
        gamma0 = (1.0 + math.sqrt(1.0 + 4.0 * a * a)) / (2.0 * a * a)
    else:
        gamma0 = math.inf
    t = 2.0 ** (2.0 * lam) - 1.0
    den = 1.0 - a * t
    gamma1 = t / den if den > 0 else math.inf
    if alpha == 0:
        gamma2 = gamma1
    else:
        kap = 1.0 + alpha / theta

        def short(g):
            p = capacity_c(g)
            s = capacity_c(g / (1.0 + a * g))
            return s + alpha / theta * (p - s) - kap * lam

        hi = 1.0
        while short(hi) < 0:
            hi *= 2.0
        gamma2 = brentq(short, 0.0, hi, xtol=1e-10)
    return SymCurves(N, theta, lam, a, P, alpha, gamma0, gamma1, gamma2)


def _pert_windows(js: int, N: int, theta: float, alpha: float):
    """mu-windows of offset class js with their decoding-constraint lists.

    Each constraint (x, y) stands for (1 - x*(phi-psi)/lam)*R < psi -
    (phi-psi)*y/theta at the power under test. Division by js-1 at js=1
    follows the sign of the numerator (the window simply has no such edge).
    """
    if js > 1:
        prev = (alpha - theta) / (js - 1)
        nxt = alpha / (js - 1)
    else:
        prev = -math.inf if alpha < theta else math.inf
        nxt = math.inf
    lo_slot = alpha / js
    hi_slot = (alpha + theta) / js
    if js <= N - 1:
        a_cons = ((1, theta), (1 - js, -alpha))
    elif js == N:
        a_cons = ((1 - N, -alpha),)
    else:
        a_cons = ((0, -theta),)
    b_cons = ((js, alpha),) if js <= N - 1 else ((0, -theta),)
    c_cons = ((1 - js, -alpha),) if js <= N else ((0, -theta),)
    d_cons = ((0, -theta),)
    return (
        ((max(prev, lo_slot), min(hi_slot, nxt)), a_cons),
        ((lo_slot, min(prev, hi_slot)), b_cons),
        ((max(prev, hi_slot), nxt), c_cons),
        ((hi_slot, prev), d_cons),
    )


def _sweep_union(samples) -> IntervalUnion:
    """Union of a continuously moving interval sampled along a curve.

    samples yields (lo, hi) or None per grid point, in sweep order. When two
    consecutive samples are nonempty the interval never vanished in between
    (its endpoints move continuously), so their hull joins the union; this
    closes the pinholes a narrow interval leaves when it climbs faster per
    grid step than its own width.
    """
    pieces = []
    prev = None
    for cur in samples:
        if cur is not None:
            pieces.append(cur)
            if prev is not None:
                pieces.append((min(prev[0], cur[0]), max(prev[1], cur[1])))
        prev = cur
    return IntervalUnion.from_intervals(pieces)


def _sym_pert_region(N, theta, lam, a, P, alpha, n_gamma=2048) -> IntervalUnion:
    """Symmetric region assembled per offset class; works for any alpha >= 0."""
    gbar = (1.0 / N + _rbar_raw(lam, P, N) / lam) * P
    js_max = int(math.ceil(alpha / theta)) + 1 if alpha > 0 else 1
    windows = []
    for js in range(1, js_max + 1):
        windows.extend(_pert_windows(js, N, theta, alpha))
    grid = np.linspace(0.0, gbar, n_gamma)
    out = IntervalUnion.from_intervals([])

    def window_samples(wlo, whi, cons):
        for g in grid:
            p = capacity_c(g)
            s = capacity_c(g / (1.0 + a * g))
            d = p - s
            lo = max(lam if N > 1 else 0.0, (g / P - 1.0 / N) * lam,
                     wlo * lam / theta)
            hi = whi * lam / theta
            feasible = True
            for x, y in cons:
                coef = 1.0 - x * d / lam
                rhs = s - d * y / theta
                if abs(coef) < 1e-14:
                    if rhs <= 0:
                        feasible = False
                        break
                elif coef > 0:
                    hi = min(hi, rhs / coef)
                else:
                    lo = max(lo, rhs / coef)
            yield (lo, hi) if feasible and hi > lo else None

    for (wlo, whi), cons in windows:
        if whi <= wlo:
            continue
        out = out.union(_sweep_union(window_samples(wlo, whi, cons)))
    return out


def sym_region(N: int, theta, lam, a, P, alpha, n_gamma: int = 2048) -> IntervalUnion:
    """Achievable codeword rates of the symmetric model.

    N=1 reduces to a closed form. For N >= 2 with alpha < theta the curve
    pair of sym_curves is swept over a power grid plus its breakpoints; for
    alpha >= theta the per-offset-class windows are assembled directly.
    """
    _check_sym_args(N, theta, lam, a, P, alpha)
    if N == 1:
        if alpha >= theta:
            return IntervalUnion.from_intervals([(0.0, _rbar_raw(lam, P, 1))])

        def short(g):
            p = capacity_c(g)
            s = capacity_c(g / (1.0 + a * g))
            return s + alpha / theta * (p - s) - (g / P - 1.0) * lam

        hi = 2.0 * P
        while short(hi) > 0:
            hi *= 2.0
        gstar = brentq(short, 0.0, hi, xtol=1e-10)
        return IntervalUnion.from_intervals([(0.0, (gstar / P - 1.0) * lam)])
    if not alpha < theta:
        return _sym_pert_region(N, theta, lam, a, P, alpha, n_gamma)
    sc = sym_curves(N, theta, lam, a, P, alpha)
    gbar = (1.0 / N + _rbar_raw(lam, P, N) / lam) * P
    grid = set(np.linspace(0.0, gbar, n_gamma))
    grid |= {g for g in (sc.gamma1, sc.gamma2) if 0.0 < g < gbar}

    def samples():
        for g in sorted(grid):
            f_val = sc.f(g)
            if f_val <= 0.0:
                yield None
                continue
            lo = max(f_val, sc.power_line(g))
            hi = sc.g(g)
            yield (lo, hi) if hi > lo else None

    return _sweep_union(samples())

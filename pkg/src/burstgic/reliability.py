"""Per-codeword reliability thresholds.

The normative computation splits a codeword into its interfered and clear
stretches and prices them at psi and phi respectively; a message of eta
bits per scaled-time unit decodes reliably iff eta falls strictly below
the resulting threshold. The case-by-case closed forms are kept as an
independent route and must agree with the geometric one.
"""

from __future__ import annotations

from dataclasses import dataclass

from burstgic.geometry import BurstLayout
from burstgic.model import RatePair

__all__ = [
    "ALWAYS_RELIABLE",
    "DEPENDS",
    "IMPOSSIBLE",
    "RateDecomp",
    "rate_decomp",
    "rate_bound",
    "closed_form_bound",
    "corollary1_class",
]

ALWAYS_RELIABLE = "ALWAYS_RELIABLE"
DEPENDS = "DEPENDS"
IMPOSSIBLE = "IMPOSSIBLE"


@dataclass(frozen=True)
class RateDecomp:
    """Scaled lengths of the clear and interfered parts of one codeword."""

    len_clear: float
    len_interf: float

    def __post_init__(self):
        if self.len_clear < 0 or self.len_interf < 0:
            raise ValueError("subinterval lengths must be nonnegative")


def rate_decomp(l: BurstLayout, user: int, j: int) -> RateDecomp:
    """Split codeword j of the given user into clear/interfered lengths."""
    other = 2 if user == 1 else 1
    a, a2 = l.burst(user, j)
    covered = 0.0
    for b, b2 in l.bursts(other):
        covered += max(0.0, min(a2, b2) - max(a, b))
    theta = a2 - a
    d = RateDecomp(len_clear=theta - covered, len_interf=covered)
    assert abs(d.len_clear + d.len_interf - theta) < 1e-12
    return d


def rate_bound(l: BurstLayout, user: int, j: int, rp: RatePair) -> float:
    """Reliable-decoding threshold for codeword j of the given user.

    Decoding succeeds (as n grows) iff the per-codeword load eta is
    strictly below the returned value.
    """
    d = rate_decomp(l, user, j)
    return d.len_interf * rp.psi + d.len_clear * rp.phi


def closed_form_bound(triple, schemes, nu1: float, nu2: float,
                      user: int, j: int, rp: RatePair) -> float:
    """Same threshold as rate_bound, but from the overlap-case formulas.

    The interfered length is reconstructed from the overlap triple alone
    (plus the layout parameters), not from interval intersections.
    """
    s1, s2 = schemes
    if user == 1:
        mu, theta, nu = s1.mu, s1.theta, nu1
        mu_o, theta_o, nu_o = s2.mu, s2.theta, nu2
    elif user == 2:
        mu, theta, nu = s2.mu, s2.theta, nu2
        mu_o, theta_o, nu_o = s1.mu, s1.theta, nu1
    else:
        raise ValueError(f"user must be 1 or 2, got {user}")

    wm, wp, w = triple.w_minus, triple.w_plus, triple.w_in
    if wm == 0 and wp == 0:
        covered = w * theta_o
    elif wm != 0 and wp == wm:
        if w != 0:
            raise ValueError(f"containment triple cannot also enclose bursts: {triple}")
        covered = theta
    elif wm != 0 and wp != 0:
        if wp - wm != w + 1:
            raise ValueError(f"no overlap case matches triple {triple}")
        covered = theta - (1 + w) * (mu_o - theta_o)
    elif wm != 0:  # left end covered, right end clear
        covered = (wm * mu_o + nu_o + theta_o) - (j * mu + nu) + w * theta_o
    else:  # right end covered, left end clear
        covered = (j * mu + nu + theta) - (wp * mu_o + nu_o) + w * theta_o
    return theta * rp.phi - (rp.phi - rp.psi) * covered


def corollary1_class(eta: float, theta: float, rp: RatePair) -> str:
    """Classify a load against the best and worst case thresholds.

    ALWAYS_RELIABLE: decodes no matter how the bursts fall. IMPOSSIBLE:
    fails even with no interference at all. DEPENDS: the burst offsets
    decide.
    """
    if theta <= 0:
        raise ValueError(f"theta must be positive, got {theta}")
    if eta < theta * rp.psi:
        return ALWAYS_RELIABLE
    if eta >= theta * rp.phi:
        return IMPOSSIBLE
    return DEPENDS

"""Core parameter containers and closed-form rate/power maps.

Everything in this module is pure and immutable. Powers are linear scale
throughout; dB conversion happens at the CLI config boundary and nowhere
else. All logarithms are base 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "InfeasibleRateError",
    "UserParams",
    "SchemeV",
    "SchemeVI",
    "RatePair",
    "capacity_c",
    "rate_pair",
    "derive_scheme_v",
    "limit_power_rate",
    "stability_ok",
]


class InfeasibleRateError(ValueError):
    """Raised when a target rate falls outside the feasible open interval."""


def capacity_c(x: float) -> float:
    """Gaussian capacity 0.5*log2(1+x) for SNR x >= 0 (linear scale)."""
    if x < 0:
        raise ValueError(f"SNR must be nonnegative, got {x}")
    return 0.5 * math.log2(1.0 + x)


@dataclass(frozen=True)
class RatePair:
    """Per-symbol rates on clear (phi) and interfered (psi) stretches."""

    phi: float
    psi: float

    def __post_init__(self):
        if not (0.0 <= self.psi <= self.phi):
            raise ValueError(f"need 0 <= psi <= phi, got psi={self.psi}, phi={self.phi}")


def rate_pair(gamma_own: float, gamma_other: float, a_other: float) -> RatePair:
    """Rates sustained by a Gaussian codebook with and without interference.

    phi = C(gamma_own) when the other user is silent, psi treats the other
    user's signal (power gamma_other, cross gain a_other) as extra noise.
    """
    if gamma_own < 0 or gamma_other < 0 or a_other < 0:
        raise ValueError("powers and cross gains must be nonnegative")
    phi = capacity_c(gamma_own)
    psi = capacity_c(gamma_own / (1.0 + a_other * gamma_other))
    return RatePair(phi=phi, psi=psi)


@dataclass(frozen=True)
class UserParams:
    """Static per-user parameters.

    k: bits arriving per arrival event, q: arrival probability per slot,
    P: average power budget (linear), a: cross gain of this user's signal
    at the other receiver. lam = k*q is the arrival rate in bits/slot.

    q is nominally interior (0, 1); the boundary q = 1 is tolerated so the
    deterministic-arrivals edge case stays constructible.
    """

    k: int
    q: float
    P: float
    a: float

    def __post_init__(self):
        if not (isinstance(self.k, int) and self.k >= 1):
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        if not (0.0 < self.q <= 1.0):
            raise ValueError(f"q must be in (0, 1], got {self.q}")
        if self.P <= 0:
            raise ValueError(f"P must be positive, got {self.P}")
        if self.a < 0:
            raise ValueError(f"cross gain a must be nonnegative, got {self.a}")

    @property
    def lam(self) -> float:
        """Arrival rate k*q in bits per slot."""
        return self.k * self.q


@dataclass(frozen=True)
class SchemeV(object):
    """Fixed-length scheme: N codewords per k-bit batch, target rate R.

    Derived quantities are recomputed from (user, N, R) on access so there
    is a single source of truth. Direct construction only checks basic
    domains; use derive_scheme_v() to also enforce the feasibility window
    R in (lam*N/(N+1)*1{N>1}, lam).
    """

    user: UserParams
    N: int
    R: float

    def __post_init__(self):
        if not (isinstance(self.N, int) and self.N >= 1):
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if not (0.0 < self.R < self.user.lam):
            raise ValueError(
                f"R must be in (0, lam={self.user.lam}), got {self.R}"
            )

    @property
    def eta(self) -> float:
        """Bits per codeword over blocklength, k/N."""
        return self.user.k / self.N

    @property
    def theta(self) -> float:
        """Codeword length (scaled time) meeting rate R: (1/q)(lam/R - 1)."""
        return (self.user.lam / self.R - 1.0) / self.user.q

    @property
    def gamma(self) -> float:
        """Transmit power during bursts: (P/N) * lam/(lam - R)."""
        return (self.user.P / self.N) * self.user.lam / (self.user.lam - self.R)

    @property
    def mu(self) -> float:
        """Mean inter-burst spacing in scaled time, eta/lam = 1/(N q)."""
        return 1.0 / (self.N * self.user.q)


@dataclass(frozen=True)
class SchemeVI(object):
    """Free-parameter scheme: codeword length theta, codebook rate R_c,
    transmit power gamma chosen directly."""

    user: UserParams
    N: int
    theta: float
    R_c: float
    gamma: float

    def __post_init__(self):
        if not (isinstance(self.N, int) and self.N >= 1):
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if self.theta <= 0:
            raise ValueError(f"theta must be positive, got {self.theta}")
        lam = self.user.lam
        if self.N > 1 and self.R_c <= lam:
            raise InfeasibleRateError(
                f"R_c must exceed lam={lam} when N={self.N} > 1, got {self.R_c}"
            )
        if self.R_c <= 0:
            raise ValueError(f"R_c must be positive, got {self.R_c}")
        gmax = (1.0 / self.N + self.R_c / lam) * self.user.P
        if not (0.0 <= self.gamma <= gmax):
            raise ValueError(
                f"gamma must be in [0, {gmax}] to respect the power budget, "
                f"got {self.gamma}"
            )

    @property
    def mu(self) -> float:
        """Mean inter-burst spacing theta * R_c / lam."""
        return self.theta * self.R_c / self.user.lam

    @property
    def eta(self) -> float:
        """Bits per codeword over blocklength, theta * R_c."""
        return self.theta * self.R_c


def derive_scheme_v(u: UserParams, N: int, R: float) -> SchemeV:
    """Build a SchemeV, rejecting rates outside the feasible window.

    Feasibility needs 0 < R < lam always, and R > lam*N/(N+1) when N > 1
    (otherwise the transmit queue is unstable).
    """
    lam = u.lam
    lo = lam * N / (N + 1.0) if N > 1 else 0.0
    if not (lo < R < lam):
        raise InfeasibleRateError(
            f"R={R} outside feasible interval ({lo}, {lam}) for N={N}"
        )
    return SchemeV(user=u, N=N, R=R)


def limit_power_rate(s, u: UserParams) -> tuple[float, float]:
    """Long-run (average power, throughput) of a scheme as n grows.

    Q = N*gamma / (1 + 1/(q*theta)),  R = lam / (1 + q*theta).

    Works for either scheme type; s only needs N, gamma and theta.
    """
    theta = s.theta
    if theta <= 0:
        raise ValueError(f"theta must be positive, got {theta}")
    qt = u.q * theta
    Q = s.N * s.gamma / (1.0 + 1.0 / qt)
    R = u.lam / (1.0 + qt)
    return Q, R


def stability_ok(s) -> bool:
    """Whether bursts drain fast enough that the queue stays stable.

    Vacuously true for N = 1 (a single codeword per batch never queues
    behind itself); otherwise requires mu > theta.
    """
    if s.N == 1:
        return True
    return s.mu > s.theta

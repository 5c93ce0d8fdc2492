"""Bursty two-user Gaussian interference channel toolkit.

Schedulers for stochastic arrivals, burst-overlap geometry, codeword
reliability bounds, outage-optimal design and achievable rate regions,
plus a Monte Carlo detection/decoding simulator.
"""

from burstgic.detection import (
    DetectionConfig,
    DetectionRow,
    GaussianCodebook,
    RxTrace,
    TypicalityParams,
    channel_run,
    decode_codeword,
    detection_experiment,
    estimate_arrivals,
    typicality_test,
)
from burstgic.design import (
    InfeasibleDesignError,
    IntervalUnion,
    OutageCurve,
    active_set,
    admissible_alpha,
    d_max,
    optimize_N,
    outage,
    outage_curve,
)
from burstgic.geometry import (
    BurstLayout,
    ChannelStateS,
    OverlapTriple,
    enumerate_states,
    overlap_profile,
    state_of,
)
from burstgic.model import (
    RatePair,
    SchemeV,
    SchemeVI,
    UserParams,
    capacity_c,
    derive_scheme_v,
    limit_power_rate,
    rate_pair,
    stability_ok,
)
from burstgic.region import (
    Region2D,
    rbar_c,
    region,
    region_members,
    sym_curves,
    sym_region,
)
from burstgic.reliability import rate_bound, rate_decomp

__version__ = "0.1.0"

__all__ = [
    "UserParams",
    "SchemeV",
    "SchemeVI",
    "RatePair",
    "capacity_c",
    "rate_pair",
    "derive_scheme_v",
    "limit_power_rate",
    "stability_ok",
    "BurstLayout",
    "ChannelStateS",
    "OverlapTriple",
    "enumerate_states",
    "overlap_profile",
    "state_of",
    "rate_bound",
    "rate_decomp",
    "IntervalUnion",
    "OutageCurve",
    "InfeasibleDesignError",
    "active_set",
    "admissible_alpha",
    "d_max",
    "optimize_N",
    "outage",
    "outage_curve",
    "Region2D",
    "rbar_c",
    "region",
    "region_members",
    "sym_curves",
    "sym_region",
    "DetectionConfig",
    "DetectionRow",
    "GaussianCodebook",
    "RxTrace",
    "TypicalityParams",
    "channel_run",
    "decode_codeword",
    "detection_experiment",
    "estimate_arrivals",
    "typicality_test",
]

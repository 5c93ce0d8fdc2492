"""Finite-length Monte Carlo of the detection and decoding chain.

Gaussian codebooks with known preambles are pushed through the two-user
interference channel; each receiver then locates burst arrivals by a
sequential joint-typicality scan, identifies the sender of each burst,
and decodes its own sender's codewords segment by segment against the
interference pattern. Everything is scored against the ground-truth
schedule carried on the trace.

All log-density statistics and differential entropies are in bits.
"""

import math
from dataclasses import dataclass

import numpy as np

LOG2E = math.log2(math.e)

PDF_IDS = ("p1", "p2", "p3", "p4")

#: codebook sizes past this are not worth simulating on a desk
M_CAP = 1 << 16

DECODE_NONE = "NONE"
DECODE_AMBIGUOUS = "AMBIGUOUS"


# ---------------------------------------------------------------------------
# typicality machinery

@dataclass(frozen=True)
class TypicalityParams:
    """One receiver's reference density for a joint-typicality test.

    pdf picks the hypothesized situation for the pair (sent symbol,
    received sample): p1 own sender, clean; p2 own sender, interfered;
    p3 cross sender, clean; p4 cross sender, interfered. gamma1 is the
    power of this receiver's own sender and gamma2 the other sender's;
    a is the cross gain into this receiver. At Rx 2 pass (gamma2,
    gamma1, a1) for (gamma1, gamma2, a); rx_params does this bookkeeping.

    The Bernstein-type guarantees behind the scan ask for
    eps < min{gamma1/3, (gamma1 + a*gamma2)/2} * log2(e); that is an
    analysis working condition, not enforced here (see eps_guard).
    """

    eps: float
    pdf: str
    gamma1: float
    gamma2: float
    a: float

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.pdf not in PDF_IDS:
            raise ValueError(f"unknown pdf id {self.pdf!r}")
        if self.gamma1 <= 0 or self.gamma2 <= 0:
            raise ValueError("symbol powers must be positive")
        if self.a < 0:
            raise ValueError("cross gain must be nonnegative")

    @property
    def var_x(self) -> float:
        return self.gamma1 if self.pdf in ("p1", "p2") else self.gamma2

    @property
    def coef(self) -> float:
        """Channel gain applied to the hypothesized sender's symbol."""
        return 1.0 if self.pdf in ("p1", "p2") else math.sqrt(self.a)

    @property
    def var_res(self) -> float:
        """Variance of y - coef*x: unit noise plus any interferer."""
        if self.pdf == "p2":
            return 1.0 + self.a * self.gamma2
        if self.pdf == "p4":
            return 1.0 + self.gamma1
        return 1.0

    @property
    def var_y(self) -> float:
        return self.coef ** 2 * self.var_x + self.var_res

    @property
    def h_x(self) -> float:
        return 0.5 * math.log2(2.0 * math.pi * math.e * self.var_x)

    @property
    def h_y(self) -> float:
        return 0.5 * math.log2(2.0 * math.pi * math.e * self.var_y)

    @property
    def h_joint(self) -> float:
        # log2(2 pi e sqrt(det Sigma)) with det Sigma = var_x * var_res
        return math.log2(2.0 * math.pi * math.e
                         * math.sqrt(self.var_x * self.var_res))


def rx_params(eps: float, gamma_own: float, gamma_other: float,
              a_other: float) -> dict:
    """The four reference densities of one receiver, keyed by pdf id."""
    return {pdf: TypicalityParams(eps, pdf, gamma_own, gamma_other, a_other)
            for pdf in PDF_IDS}


def eps_guard(gamma1: float, gamma2: float, a: float) -> float:
    """Largest eps the concentration analysis behind the scan supports."""
    return min(gamma1 / 3.0, (gamma1 + a * gamma2) / 2.0) * LOG2E


def _mean_log_gauss(sumsq: float, m: int, var: float) -> float:
    """Mean of log2 g(.; var) over m samples with total square sum sumsq."""
    return -0.5 * math.log2(2.0 * math.pi * var) - LOG2E * sumsq / (2.0 * m * var)


def typicality_deviations(xs, ys, tp: TypicalityParams):
    """|empirical log-density + entropy| for the x, y and joint conditions."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1 or xs.size == 0:
        raise ValueError("xs and ys must be equal-length nonempty vectors")
    m = xs.size
    dx = abs(_mean_log_gauss(float(xs @ xs), m, tp.var_x) + tp.h_x)
    dy = abs(_mean_log_gauss(float(ys @ ys), m, tp.var_y) + tp.h_y)
    res = ys - tp.coef * xs
    joint = (_mean_log_gauss(float(xs @ xs), m, tp.var_x)
             + _mean_log_gauss(float(res @ res), m, tp.var_res))
    dxy = abs(joint + tp.h_joint)
    return dx, dy, dxy


def typicality_test(xs, ys, tp: TypicalityParams) -> bool:
    """True iff (xs, ys) is an eps-jointly typical pair for tp's density."""
    return max(typicality_deviations(xs, ys, tp)) < tp.eps


def scan_typicality(y, xs, tp: TypicalityParams):
    """Typicality of (xs, y[t:t+m]) for every window start t.

    Returns (ok, joint_dev): a boolean vector over the len(y)-m+1 window
    positions and the joint-condition deviation at each (used to break
    ties between senders). The sliding sums come from a cumulative sum
    and a cross-correlation, so a whole trace is one vectorized pass.
    """
    y = np.asarray(y, dtype=float)
    xs = np.asarray(xs, dtype=float)
    m = xs.size
    if m == 0:
        raise ValueError("empty reference sequence")
    if y.size < m:
        return np.zeros(0, dtype=bool), np.zeros(0)
    sum_x = float(xs @ xs)
    dx = abs(_mean_log_gauss(sum_x, m, tp.var_x) + tp.h_x)
    csum = np.concatenate(([0.0], np.cumsum(y * y)))
    sum_y = csum[m:] - csum[:-m]
    cross = np.correlate(y, xs, mode="valid")
    sum_res = sum_y - 2.0 * tp.coef * cross + tp.coef ** 2 * sum_x
    dy = np.abs(-0.5 * math.log2(2.0 * math.pi * tp.var_y)
                - LOG2E * sum_y / (2.0 * m * tp.var_y) + tp.h_y)
    joint = (_mean_log_gauss(sum_x, m, tp.var_x)
             - 0.5 * math.log2(2.0 * math.pi * tp.var_res)
             - LOG2E * sum_res / (2.0 * m * tp.var_res))
    dxy = np.abs(joint + tp.h_joint)
    ok = (dx < tp.eps) & (dy < tp.eps) & (dxy < tp.eps)
    return ok, dxy


# ---------------------------------------------------------------------------
# codebooks and the channel

@dataclass(frozen=True, eq=False)
class GaussianCodebook:
    """M codewords of length n plus a preamble, all i.i.d. N(0, gamma)."""

    words: np.ndarray
    preamble: np.ndarray
    gamma: float

    def __post_init__(self):
        if self.words.ndim != 2 or self.words.shape[0] < 1:
            raise ValueError("words must be a nonempty M x n matrix")
        if self.words.shape[0] > M_CAP:
            raise ValueError(
                f"codebook size {self.words.shape[0]} exceeds the "
                f"simulation cap {M_CAP}")
        if self.preamble.ndim != 1 or self.preamble.size < 1:
            raise ValueError("preamble must be a nonempty vector")
        if self.gamma <= 0:
            raise ValueError("symbol power must be positive")

    @property
    def M(self) -> int:
        return self.words.shape[0]

    @property
    def n(self) -> int:
        return self.words.shape[1]

    @property
    def nprime(self) -> int:
        return self.preamble.size

    @property
    def rate(self) -> float:
        """Effective codebook rate log2(M)/n actually simulated."""
        return math.log2(self.M) / self.n

    @classmethod
    def draw(cls, M: int, n: int, nprime: int, gamma: float,
             rng: np.random.Generator) -> "GaussianCodebook":
        words = math.sqrt(gamma) * rng.standard_normal((M, n))
        preamble = math.sqrt(gamma) * rng.standard_normal(nprime)
        return cls(words=words, preamble=preamble, gamma=gamma)

    @classmethod
    def from_rate(cls, n: int, eta: float, nprime: int, gamma: float,
                  rng: np.random.Generator) -> "GaussianCodebook":
        """Codebook with M = 2^floor(n*eta), guarded by the size cap."""
        if eta <= 0:
            raise ValueError("eta must be positive")
        M = 1 << int(math.floor(n * eta))
        return cls.draw(M, n, nprime, gamma, rng)


@dataclass(frozen=True, eq=False)
class RxTrace:
    """One receiver's samples plus the schedule that produced them.

    truth holds (sender, start slot, message index) per burst, sorted by
    start; it is only for scoring, the estimators never read it.
    """

    y: np.ndarray
    truth: tuple

    def __post_init__(self):
        if self.y.ndim != 1:
            raise ValueError("trace must be a 1-d sample vector")


def channel_run(schedules, codebooks, a1: float, a2: float, seed,
                horizon: int):
    """Push both users' bursts through the channel; returns both traces.

    schedules is a pair of (start, message) lists, codebooks a pair of
    GaussianCodebook. Each burst occupies [start, start + n' + n_i) as
    preamble then codeword; receiver i sees its own sender at unit gain,
    the other at sqrt(a_other), plus unit-variance noise.
    """
    rng = np.random.default_rng(seed)
    xs = []
    truth = []
    for i, (sched, cb) in enumerate(zip(schedules, codebooks), start=1):
        x = np.zeros(horizon)
        span = cb.nprime + cb.n
        last_end = -1
        for start, msg in sorted(sched):
            start = int(start)
            if start < 0 or start + span > horizon:
                raise ValueError(
                    f"user {i} burst at {start} leaves the horizon")
            assert start > last_end, \
                f"user {i} burst at {start} overlaps its predecessor"
            x[start:start + cb.nprime] = cb.preamble
            x[start + cb.nprime:start + span] = cb.words[int(msg)]
            truth.append((i, start, int(msg)))
            last_end = start + span - 1
        xs.append(x)
    truth.sort(key=lambda rec: rec[1])
    x1, x2 = xs
    y1 = x1 + math.sqrt(a2) * x2 + rng.standard_normal(horizon)
    y2 = x2 + math.sqrt(a1) * x1 + rng.standard_normal(horizon)
    return (RxTrace(y=y1, truth=tuple(truth)),
            RxTrace(y=y2, truth=tuple(truth)))


# ---------------------------------------------------------------------------
# sequential arrival estimation

def estimate_arrivals(trace: RxTrace, preambles, tps, nprime: int,
                      n_codewords) -> list:
    """Sequential scan for burst starts; returns [(slot, sender), ...].

    Everything is in the receiver's frame: preambles[0] belongs to this
    receiver's own sender (unit gain, densities p1/p2), preambles[1] to
    the cross sender (cross gain, densities p3/p4), and the returned
    sender ids follow the same convention (1 = own, 2 = cross). Callers
    working at the second receiver should swap accordingly.

    Outside any known burst the receiver tests both preambles against
    their clean densities (p1/p3) and identifies the sender by whichever
    passes, breaking a double pass toward the smaller joint deviation.
    While exactly one sender's burst is live, only the other sender can
    arrive, so the scan switches to that preamble under the interfered
    density (p4 for the cross sender, p2 for the own sender) until the
    live burst ends, then falls back to the clean scan. Burst spans are
    known: n' + n_codewords[sender-1] slots from the detected start.
    """
    for pdf in PDF_IDS:
        if pdf not in tps:
            raise ValueError(f"missing typicality params for {pdf}")
    s1, s2 = (np.asarray(p, dtype=float) for p in preambles)
    if s1.size != nprime or s2.size != nprime:
        raise ValueError("preamble lengths must equal nprime")
    y = trace.y
    ok1, dev1 = scan_typicality(y, s1, tps["p1"])
    ok3, dev3 = scan_typicality(y, s2, tps["p3"])
    ok2, _ = scan_typicality(y, s1, tps["p2"])
    ok4, _ = scan_typicality(y, s2, tps["p4"])
    T = ok1.size
    found = []
    ends = {1: -1, 2: -1}
    t = 0
    while t < T:
        live = [i for i in (1, 2) if ends[i] >= t]
        if len(live) == 2:
            t = min(ends.values()) + 1
            continue
        if len(live) == 1:
            i = live[0]
            o = 3 - i
            ok_in = ok4 if o == 2 else ok2
            hits = np.flatnonzero(ok_in[t:min(ends[i], T - 1) + 1])
            if hits.size:
                ts = t + int(hits[0])
                found.append((ts, o))
                ends[o] = ts + nprime + n_codewords[o - 1] - 1
                t = ts + 1
            else:
                t = ends[i] + 1
            continue
        hits = np.flatnonzero(ok1[t:] | ok3[t:])
        if not hits.size:
            break
        ts = t + int(hits[0])
        if ok1[ts] and ok3[ts]:
            sender = 1 if dev1[ts] <= dev3[ts] else 2
        else:
            sender = 1 if ok1[ts] else 2
        found.append((ts, sender))
        ends[sender] = ts + nprime + n_codewords[sender - 1] - 1
        t = ts + 1
    return found


# ---------------------------------------------------------------------------
# decoding

def codeword_segments(code_start: int, n: int, other_spans) -> tuple:
    """Partition a codeword span by the other sender's burst spans.

    code_start is the slot of the first codeword symbol (preamble
    already skipped); other_spans are half-open (start, stop) slot
    ranges. Overlapped stretches decode against p2, the rest against p1.
    """
    marks = {code_start, code_start + n}
    for a, b in other_spans:
        marks.add(min(max(a, code_start), code_start + n))
        marks.add(min(max(b, code_start), code_start + n))
    cuts = sorted(marks)
    segs = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if a == b:
            continue
        hit = any(s < b and a < e for s, e in other_spans)
        segs.append(((a, b), "p2" if hit else "p1"))
    return tuple(segs)


def decode_codeword(trace: RxTrace, codebook: GaussianCodebook, segments,
                    tps):
    """Unique codeword passing every per-segment typicality test.

    segments is a list of ((start, stop), pdf id) slot ranges that
    partition the codeword span contiguously; symbol l of each candidate
    aligns with slot segments[0][0][0] + l. Returns the message index,
    DECODE_NONE if no candidate passes, DECODE_AMBIGUOUS if several do.
    """
    if not segments:
        raise ValueError("need at least one segment")
    y = trace.y
    base = segments[0][0][0]
    expect = base
    total = 0
    for (a, b), pdf in segments:
        if b <= a:
            raise ValueError(f"empty segment ({a}, {b})")
        if a != expect:
            raise ValueError("segments must be contiguous")
        if a < 0 or b > y.size:
            raise ValueError(f"segment ({a}, {b}) outside the trace")
        if pdf not in tps:
            raise ValueError(f"missing typicality params for {pdf}")
        expect = b
        total += b - a
    if total != codebook.n:
        raise ValueError(
            f"segments cover {total} slots, codewords have {codebook.n}")
    alive = np.ones(codebook.M, dtype=bool)
    for (a, b), pdf in segments:
        tp = tps[pdf]
        m = b - a
        ysl = y[a:b]
        wsl = codebook.words[:, a - base:b - base]
        sum_x = np.einsum("ij,ij->i", wsl, wsl)
        sum_y = float(ysl @ ysl)
        res = ysl[None, :] - tp.coef * wsl
        sum_res = np.einsum("ij,ij->i", res, res)
        dx = np.abs(-0.5 * math.log2(2.0 * math.pi * tp.var_x)
                    - LOG2E * sum_x / (2.0 * m * tp.var_x) + tp.h_x)
        dy = abs(_mean_log_gauss(sum_y, m, tp.var_y) + tp.h_y)
        dxy = np.abs(-0.5 * math.log2(2.0 * math.pi * tp.var_x)
                     - LOG2E * sum_x / (2.0 * m * tp.var_x)
                     - 0.5 * math.log2(2.0 * math.pi * tp.var_res)
                     - LOG2E * sum_res / (2.0 * m * tp.var_res)
                     + tp.h_joint)
        alive &= (dx < tp.eps) & (dxy < tp.eps) & (dy < tp.eps)
        if not alive.any():
            return DECODE_NONE
    winners = np.flatnonzero(alive)
    if winners.size > 1:
        return DECODE_AMBIGUOUS
    return int(winners[0])


# ---------------------------------------------------------------------------
# experiment driver

@dataclass(frozen=True)
class DetectionConfig:
    """Scenario knobs for the one-burst-per-user experiment."""

    n_values: tuple
    gamma1: float
    gamma2: float
    a1: float
    a2: float
    eps: float
    M: int
    nprime_values: tuple = None  # default: ceil(sqrt(n)) per n

    def __post_init__(self):
        if not self.n_values or any(n < 4 for n in self.n_values):
            raise ValueError("n_values must be codeword lengths >= 4")
        if self.nprime_values is not None:
            if len(self.nprime_values) != len(self.n_values):
                raise ValueError("nprime_values must pair up with n_values")
            if any(m < 2 for m in self.nprime_values):
                raise ValueError("preamble lengths must be >= 2")
        if self.gamma1 <= 0 or self.gamma2 <= 0:
            raise ValueError("symbol powers must be positive")
        if self.a1 < 0 or self.a2 < 0:
            raise ValueError("cross gains must be nonnegative")
        if self.M < 2 or self.M > M_CAP:
            raise ValueError(f"M must be in [2, {M_CAP}]")
        guard = min(eps_guard(self.gamma1, self.gamma2, self.a2),
                    eps_guard(self.gamma2, self.gamma1, self.a1))
        if not 0 < self.eps < guard:
            raise ValueError(
                f"eps must sit in (0, {guard:.3g}) for these powers")

    def nprime_for(self, idx: int) -> int:
        if self.nprime_values is not None:
            return int(self.nprime_values[idx])
        return math.isqrt(self.n_values[idx] - 1) + 1  # ceil(sqrt(n))


@dataclass(frozen=True)
class DetectionRow:
    """Aggregated scores for one codeword length.

    Counts are over traces (two receivers per trial) except e2e_errors,
    which is per trial: a trial is end-to-end correct when both
    receivers recover every burst start exactly and decode their own
    message. false_alarms tallies spurious arrival estimates; they are
    reported on their own rather than negating recovery, because the
    rescan for a second arrival inside a live burst faces a mismatched
    density whose log-likelihood gap shrinks with the interference ratio
    and is not reliably rejectable at preamble-length windows.
    """

    n: int
    nprime: int
    trials: int
    traces: int
    bursts_total: int
    bursts_located: int
    recovered_traces: int
    misid_errors: int
    false_alarms: int
    decode_errors: int
    e2e_errors: int
    eff_rate: float

    @property
    def recovery_rate(self) -> float:
        return self.recovered_traces / self.traces

    @property
    def detect_error_rate(self) -> float:
        return 1.0 - self.recovery_rate

    @property
    def misid_rate(self) -> float:
        if self.bursts_located == 0:
            return 0.0
        return self.misid_errors / self.bursts_located

    @property
    def decode_error_rate(self) -> float:
        return self.decode_errors / self.traces

    @property
    def e2e_error_rate(self) -> float:
        return self.e2e_errors / self.trials


def _score_trace(trace, own_cb, other_cb, tps, nprime, own_user, starts,
                 own_start, other_span, own_msg):
    """Score one receiver: recovery, located bursts, misid, false alarms,
    own-message decode. Sender labels from the scan are receiver-local
    (1 = own, 2 = cross) and are mapped back to user ids here."""
    est = estimate_arrivals(trace, (own_cb.preamble, other_cb.preamble),
                            tps, nprime, (own_cb.n, other_cb.n))
    claimed = {slot: (own_user if s == 1 else 3 - own_user)
               for slot, s in est}
    located = 0
    mis = 0
    for slot, user in starts.items():
        if slot in claimed:
            located += 1
            if claimed[slot] != user:
                mis += 1
    fa = sum(1 for slot in claimed if slot not in starts)
    segs = codeword_segments(own_start + nprime, own_cb.n, (other_span,))
    dec_ok = decode_codeword(trace, own_cb, segs, tps) == own_msg
    return located == len(starts), located, mis, fa, dec_ok


def _run_trial(n: int, nprime: int, cfg: DetectionConfig,
               rng: np.random.Generator):
    cb1 = GaussianCodebook.draw(cfg.M, n, nprime, cfg.gamma1, rng)
    cb2 = GaussianCodebook.draw(cfg.M, n, nprime, cfg.gamma2, rng)
    span = nprime + n
    t1 = int(rng.integers(0, 2 * nprime))
    t2 = t1 + span + int(rng.integers(nprime, 3 * nprime))
    horizon = t2 + span + 2 * nprime
    msg1 = int(rng.integers(cfg.M))
    msg2 = int(rng.integers(cfg.M))
    tr1, tr2 = channel_run((((t1, msg1),), ((t2, msg2),)), (cb1, cb2),
                           cfg.a1, cfg.a2, rng, horizon)
    tps1 = rx_params(cfg.eps, cfg.gamma1, cfg.gamma2, cfg.a2)
    tps2 = rx_params(cfg.eps, cfg.gamma2, cfg.gamma1, cfg.a1)
    starts = {t1: 1, t2: 2}
    out = []
    for trace, tps, own_cb, other_cb, own_msg, own, o_start in (
            (tr1, tps1, cb1, cb2, msg1, 1, t2),
            (tr2, tps2, cb2, cb1, msg2, 2, t1)):
        own_start = t1 if own == 1 else t2
        out.append(_score_trace(
            trace, own_cb, other_cb, tps, nprime, own, starts,
            own_start, (o_start, o_start + span), own_msg))
    return out


def detection_experiment(cfg: DetectionConfig, trials: int, seed) -> tuple:
    """Error frequencies per codeword length; one DetectionRow per n.

    Each trial sends one burst per user, separated by a random gap, and
    scores each receiver three ways: arrival recovery (every true burst
    start located exactly), sender identification over the located
    bursts, and spurious extra detections (false alarms). Decoding of
    each receiver's own message is scored against the interference
    pattern of the true schedule, i.e. for a receiver that has resolved
    the burst boundaries before decoding, so the decode column isolates
    codeword discrimination rather than compounding scan mistakes.
    Trials draw from independent spawned streams, so the report is
    reproducible for a given seed and safe to parallelize later.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    rows = []
    per_n = np.random.SeedSequence(seed).spawn(len(cfg.n_values))
    for idx, (n, seq) in enumerate(zip(cfg.n_values, per_n)):
        nprime = cfg.nprime_for(idx)
        recovered = located = mis = fa = dec_err = e2e = 0
        for rng in map(np.random.default_rng, seq.spawn(trials)):
            scores = _run_trial(n, nprime, cfg, rng)
            trial_ok = True
            for rec, loc, m, f, d_ok in scores:
                recovered += rec
                located += loc
                mis += m
                fa += f
                dec_err += not d_ok
                trial_ok &= rec and d_ok
            e2e += not trial_ok
        rows.append(DetectionRow(
            n=n, nprime=nprime, trials=trials, traces=2 * trials,
            bursts_total=4 * trials, bursts_located=located,
            recovered_traces=recovered, misid_errors=mis,
            false_alarms=fa, decode_errors=dec_err, e2e_errors=e2e,
            eff_rate=math.log2(cfg.M) / n))
    return tuple(rows)

"""One full receive chain: detect two asynchronous bursts, then decode.

Each sender transmits a preamble followed by a Gaussian codeword at an
unknown start slot. The receiver slides length-n' typicality tests to
find the starts and tell the senders apart, then decodes its own
codeword with the interference pattern the burst layout implies.
"""

import numpy as np

from burstgic.detection import (
    DetectionConfig,
    GaussianCodebook,
    channel_run,
    codeword_segments,
    decode_codeword,
    detection_experiment,
    estimate_arrivals,
    rx_params,
)

rng = np.random.default_rng(2)
n, nprime, M = 2000, 45, 64
gamma, a = 100.0, 0.1

# 1. two senders, staggered starts, one received trace -------------------
cb1 = GaussianCodebook.draw(M, n, nprime, gamma, rng)
cb2 = GaussianCodebook.draw(M, n, nprime, gamma, rng)
span = nprime + n
t1 = 120
t2 = t1 + span + 300
msg1, msg2 = 17, 40
trace, _ = channel_run((((t1, msg1),), ((t2, msg2),)), (cb1, cb2), a, a,
                       rng, t2 + span + 200)
print(f"true starts: sender 1 at {t1}, sender 2 at {t2}")

# 2. estimate arrivals from receiver 1's side ----------------------------
# Expect both true starts slot-exact, usually plus a phantom cross start
# just inside sender 1's own burst: at short window lengths the in-burst
# cross test faces a variance mismatch of only 1 + a*gamma/(1+gamma),
# far too close to 1 to reject. The experiment harness books such extras
# as false alarms; recovery means every true start was located exactly.
tps = rx_params(0.48, gamma, gamma, a)
est = estimate_arrivals(trace, (cb1.preamble, cb2.preamble), tps, nprime,
                        (n, n))
print("estimated (slot, sender):", est)
hits = [s for s, _ in est]
print(f"true starts recovered exactly: {t1 in hits and t2 in hits},"
      f" extra estimates: {len(est) - 2}")

# 3. decode sender 1's codeword around the overlap it saw ----------------
segs = codeword_segments(t1 + nprime, n, ((t2, t2 + span),))
print("\ncodeword segments (interval, density):", segs)
out = decode_codeword(trace, cb1, segs, tps)
print(f"decoded message {out} (sent {msg1})")

# 4. error frequencies fall as the blocklength grows ---------------------
cfg = DetectionConfig(n_values=(500, 1000, 2000), gamma1=gamma,
                      gamma2=gamma, a1=a, a2=a, eps=0.48, M=M)
rows = detection_experiment(cfg, trials=150, seed=33)
print("\n    n   recovery   misid   false alarms   end-to-end error")
for r in rows:
    print(f"  {r.n:4d}   {r.recovery_rate:8.3f}   {r.misid_rate:5.3f}"
          f"   {r.false_alarms:12d}   {r.e2e_error_rate:8.3f}")

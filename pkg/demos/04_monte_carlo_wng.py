"""
Monte-Carlo check of the white noise gain
=========================================

Feed the beamformer pure sensor noise, y = v, with unit per-sensor variance
and compare the average output power with 1/WNG.
"""

import numpy as np

from steerdma import ArrayGeometry, design, make_spec, monte_carlo_noise_power, wng
from steerdma.metrics import RNG_ALGORITHM, apply_filter, simulate_snapshot

geom = ArrayGeometry(8, 0.02)
spec = make_spec("DerivCon", 2, np.radians(50), np.radians([120, 240]), i_beta=[1, 0, -2, 0, 0])

print("generator:", RNG_ALGORITHM)
for f in (500, 1000, 4000):
    h = design(geom, f, spec)
    predicted = 1.0 / wng(h, geom).linear
    measured = monte_carlo_noise_power(h, geom, snapshots=100_000, noise_power=1.0, rng_seed=1)
    print(f"{f:5d} Hz: 1/WNG = {predicted:10.4f}, simulated = {measured:10.4f}, "
          f"gap = {10 * np.log10(measured / predicted):+.3f} dB")

# %%
# With the noise switched off the desired signal passes unchanged.
h = design(geom, 1000, spec)
y = simulate_snapshot(geom, h.omega, spec.steering, 0.7 - 0.2j, noise_power=0.0)
print("Z =", apply_filter(h, y))

"""Metrics tour: beampattern, spatial ISLR and range ISLR of a random MPSK set.

Run with ``python demos/01_metrics_and_beampattern.py``.
"""

import numpy as np

from mimo_islr import AngleScenario, beampattern, correlations, init_waveform, range_islr, spatial_islr
from mimo_islr.metrics import to_db

# The standard scene: desired sector [-55, -35] deg, everything else from
# -90 to 90 (except a 5 deg guard on either side) is undesired.
scenario = AngleScenario.default_scene(mt=8, n=64)
print(f"{len(scenario.theta_d)} desired and {len(scenario.theta_u)} undesired grid angles")

s = np.asarray(init_waveform(8, 64, l0=8, seed=0))

# A random start radiates roughly uniformly, so the spatial ratio sits near 0 dB.
print(f"spatial ISLR of the random start: {to_db(spatial_islr(s, scenario)):6.2f} dB")

# Range ISLR counts auto- and cross-correlation sidelobes against the mainlobes.
# For unit-modulus waveforms it can never drop below Mt - 1.
print(f"range ISLR of the random start:   {to_db(range_islr(s)):6.2f} dB "
      f"(floor {to_db(8 - 1):.2f} dB)")

# A coarse look at the transmit beampattern.
theta = np.radians(np.arange(-90, 91, 15))
for deg, p in zip(np.degrees(theta), beampattern(s, theta)):
    print(f"  {deg:6.0f} deg  {'#' * int(round(4 * p))}")

# Correlations come back as r[m, l, k + N - 1]; the zero-lag autocorrelation
# of a unimodular row is N.
r = correlations(s)
print("zero-lag autocorrelations:", np.round(np.abs(np.diagonal(r[:, :, 63])), 6))

# # Pinning the pole parameter against the master equation
#
# The closed forms depend on a complex parameter lambda built from the
# damping, the detuning and the nonlinearity. Two factors are easy to get
# wrong: a factor i in the denominator and whether the damping enters as
# gamma or gamma / 2. Here all four choices are compared with the oracle.

import itertools

import numpy as np

from knr import KnrParams, photon_distribution, steady_state
from knr.model import LambdaConvention

points = [KnrParams(chi=c, delta=d, omega_drive=o)
          for c, d, o in [(2, -40, 5), (10, 0, 20), (20, -20, 20), (20, 20, 5)]]
refs = [steady_state(p).probs for p in points]

for conv, scale in itertools.product(LambdaConvention, (1.0, 0.5)):
    worst = 0.0
    for p, ref in zip(points, refs):
        probs = photon_distribution(p, conv=conv, damping_scale=scale).padded(len(ref))
        padded = np.zeros(len(probs))
        padded[: len(ref)] = ref
        worst = max(worst, np.abs(probs - padded).max())
    print(f"{conv.name:17s} damping x{scale:<4g} max |dP| = {worst:.2e}")

# Only lambda = (gamma/2 + i delta) / (i chi) agrees, at round-off level.
# That choice is the package default (knr.model.CALIBRATED_CONVENTION).

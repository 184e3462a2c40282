# # Photon blockade at a single parameter point
#
# A Kerr resonator with chi = 20 gamma is driven on resonance with the
# 0 -> 1 transition. The 1 -> 2 transition is detuned by 2 chi, so the
# cavity holds at most one photon and the light is antibunched.

import numpy as np

from knr import KnrParams, g2_zero_delay, mean_photon_number, photon_distribution
from knr.oracle import oracle_observables, steady_state

params = KnrParams(chi=20.0, delta=0.0, omega_drive=5.0)

# ## Closed form
# Populations come from a ratio of 0F2 series; the list stops once three
# consecutive values drop below 1e-12.

dist = photon_distribution(params)
print("n_max =", dist.n_max, " tail mass =", dist.tail_mass)
for n, p in enumerate(dist.probs[:5]):
    print(f"P{n} = {p:.6f}")

print("<n>   =", mean_photon_number(params))
print("g2(0) =", g2_zero_delay(params))

# ## Brute force
# The same point solved as a Lindblad steady state in a truncated Fock basis.

rho = steady_state(params)
obs = oracle_observables(rho)
print("oracle dim", rho.dim, " residual", rho.residual)
diff = np.abs(dist.padded(rho.dim) - obs.probs).max()
print(f"max |P_n(closed form) - P_n(oracle)| = {diff:.2e}")
print(f"g2 closed form {g2_zero_delay(params):.12f}  oracle {obs.g2:.12f}")

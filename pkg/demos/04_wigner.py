# # Wigner function of the steady state
#
# The closed form is W(alpha) = (2/pi) exp(-2|alpha|^2) |0F1(; lambda; -2 alpha* epsilon)|^2
# divided by 0F2(; lambda, lambda*; 2|epsilon|^2). The oracle uses the
# displaced-parity formula on the numerical density matrix instead.

import numpy as np

from knr import KnrParams, mean_photon_number, oracle_wigner, steady_state, wigner

params = KnrParams(chi=20.0, delta=-40.0, omega_drive=20.0)
grid = wigner(params)
ref = oracle_wigner(steady_state(params))

print("integral before rescaling:", grid.norm_estimate)
print("min W:", grid.values.min(), " max W:", grid.values.max())
print("max |W - W_oracle| / max W:", np.abs(grid.values - ref.values).max() / grid.values.max())

# ## Photon number from phase space
# Symmetric ordering gives <|alpha|^2>_W = <n> + 1/2.

moment = grid.integrate(lambda a: np.abs(a) ** 2 - 0.5)
print(f"<n> from W {moment:.8f}   closed form {mean_photon_number(params):.8f}")

# ## A coarse look
# Every tenth sample, x across and y increasing upwards.

shades = " .:-=+*#%@"
coarse = grid.values[::10, ::10]
for j in range(coarse.shape[1] - 1, -1, -1):
    row = coarse[:, j] / coarse.max()
    print("".join(shades[min(int(v * len(shades)), len(shades) - 1)] for v in row))

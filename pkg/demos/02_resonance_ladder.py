# # Multiphoton resonances along the detuning axis
#
# The n-photon transition |0> -> |n> is resonant at delta = -chi (n - 1).
# Sweeping the detuning at fixed drive shows one population peak per rung,
# and a stronger drive adds Raman peaks through intermediate states.

from knr import KnrParams
from knr.model import resonance_detuning, stark_shift
from knr.sweep import detect_peaks, figure_preset, run_sweep

chi = 20.0
print("resonant detunings:", [resonance_detuning(n, KnrParams(chi=chi)) for n in (1, 2, 3, 4)])

# Second-order drive shifts of the lowest levels, drive frequency 100 gamma.
weak = KnrParams(chi=chi, omega_drive=5.0)
print("stark shifts:", [round(stark_shift(n, weak, 100.0), 4) for n in range(3)])

# ## The sweep
# The fig3 preset evaluates P0..P3 on 241 detunings for drives 5 and 20.

result = run_sweep(figure_preset("fig3"))
x = result.axis_values()
for curve, omega in enumerate((5.0, 20.0)):
    print(f"\nomega = {omega:g}")
    for obs in ("P1", "P2", "P3"):
        peaks = detect_peaks(result.column(obs, curve=curve), x)
        text = ", ".join(f"{h:.3f} at {pos:+.1f}" for pos, h in peaks if h > 0.01)
        print(f"  {obs}: {text or 'no peaks'}")

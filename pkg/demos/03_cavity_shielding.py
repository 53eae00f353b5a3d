"""Shielding effectiveness of a slotted cavity.

The incident wave is 1 V behind 377 ohm.  The slot is a lumped resistance
in parallel with the cavity line, which is cut at its midpoint for a 1 Mohm
sensor and shorted at the far wall.  SE compares the sensor voltage with the
voltage the same wave puts across a matched 377 ohm load.
"""
import sys

import numpy as np

from kron_tan import FrequencyGrid, load_deck, run_sweep
from kron_tan.couplings import gupta_aperture_impedance

problem = load_deck("cavity_aperture")
(_, we, b), = problem.netlist.apertures
print(f"slot {we * 1e3:.1f} mm in {b * 1e3:.1f} mm: Za = {gupta_aperture_impedance(we, b):.2f} ohm")

grid = FrequencyGrid.linear(1e8, 1.2e9, 1101)
sol = run_sweep(problem, grid)
se = sol.observable("SE").real

tau = sum(t for *_, t in problem.netlist.branins)
f_res = 1 / (2 * tau)
dip = next(n for n in range(1, len(se) - 1) if se[n] < se[n - 1] and se[n] <= se[n + 1])
print(f"first SE dip at {sol.freqs_hz[dip] / 1e6:.1f} MHz; half-wave resonance of the shorted cavity {f_res / 1e6:.2f} MHz")
for f in (2e8, 3e8, 4e8, 4.9e8, 5e8, 7e8, 1e9):
    n = int(np.argmin(np.abs(sol.freqs_hz - f)))
    print(f"  {sol.freqs_hz[n] / 1e6:7.1f} MHz  SE = {se[n]:7.2f} dB")

if "--plot" in sys.argv:
    import matplotlib.pyplot as plt

    plt.plot(sol.freqs_hz / 1e6, se)
    plt.axvline(f_res / 1e6, ls=":", c="k")
    plt.xlabel("frequency (MHz)")
    plt.ylabel("SE (dB)")
    plt.show()

"""A horn antenna fed through a resistive splitter, facing a metallic wall.

The wall echo is a chord on the antenna mesh.  Replacing the wall by
absorbers (no reflection) shows how much the echo moves the detector
reading.
"""
from dataclasses import replace

import numpy as np

from kron_tan import FrequencyGrid, load_deck, run_sweep

wall = load_deck("antenna_wall")
absorbers = replace(wall, chords=())
print(wall.mesh_labels())

grid = FrequencyGrid.linear(9.9e9, 10.1e9, 201)
with_wall = run_sweep(wall, grid)
without = run_sweep(absorbers, grid)

v_wall = np.abs(with_wall.observable("vdet"))
v_free = np.abs(without.observable("vdet"))
ripple = 20 * np.log10(v_wall / v_free)
n = len(grid) // 2
print(f"detector at 10 GHz: {v_wall[n] * 1e3:.3f} mV with wall, {v_free[n] * 1e3:.3f} mV with absorbers")
print(f"echo ripple on the detector over 9.9 .. 10.1 GHz: {ripple.min():+.3f} .. {ripple.max():+.3f} dB")
print(f"echo emf in the antenna mesh at 10 GHz: {abs(with_wall.observable('eecho')[n]) * 1e3:.3f} mV")

"""Topology of a small graph: incidence, spanning tree, meshes, and the
split of an arbitrary current into mesh and tree parts."""
import numpy as np

from kron_tan import Chain, decompose_current, load_deck

problem = load_deck("figure1")
cx = problem.complex

print("incidence (rows = vertices, +1 where an edge enters):")
print(cx.incidence)

tree = problem.tree
print("\ntree edges   :", [a + 1 for a in tree.tree_edges])
print("closing edges:", [a + 1 for a in tree.closing_edges])
print(problem.mesh_labels())

# Meshes are cycles, so their boundary vanishes.
print("\nB @ F =\n", cx.incidence @ problem.meshes.complex.face_boundaries)

# Any current splits into meshes plus tree coefficients; the tree part is
# the charge that KCL fails to balance.
rng = np.random.default_rng(0)
kcl_current = problem.meshes.complex.face_boundaries @ rng.normal(size=problem.meshes.n_meshes)
for label, values in (("KCL current", kcl_current), ("random current", rng.normal(size=cx.n_edges))):
    d = decompose_current(Chain(1, values), tree, problem.meshes)
    print(f"{label:>14}: theta = {np.round(d.tree_coefficients.real, 12)}")

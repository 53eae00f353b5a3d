"""Classic nodal analysis, used as ground truth for the mesh solver.

Nothing here goes through spanning trees, meshes or ``C^T z C``.  Each edge is
a branch ``i = y (e - U)`` with ``U`` the head-minus-tail potential
difference; groups of edges coupled by off-diagonal impedances (mutual
inductances, chords folded onto closing edges, line ports) are inverted as a
block and stamped like a transformer.  Current sources are stamped as
injections across their edge.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import OracleSingularError

__all__ = ["NodalSolution", "solve_nodal", "solve_problem_nodal"]


@dataclass(frozen=True, eq=False)
class NodalSolution:
    potentials: np.ndarray
    edge_currents: np.ndarray
    Y: np.ndarray = field(repr=False)
    grounds: tuple[int, ...]
    injection: np.ndarray = field(repr=False)


def _groups(n, pairs):
    pairs = list(pairs)
    rows = [a for a, _ in pairs]
    cols = [b for _, b in pairs]
    _, labels = connected_components(coo_matrix((np.ones(len(pairs)), (rows, cols)), shape=(n, n)), directed=False)
    out = {}
    for x, lab in enumerate(labels):
        out.setdefault(lab, []).append(x)
    return list(out.values())


def solve_nodal(cx, edge_metric, omega, edge_emfs=None, jsources=None, couplings=()):
    """Edge currents of the network by nodal analysis.

    Parameters
    ----------
    cx : CellComplex
        Only vertices and edges are used.
    edge_metric : EdgeMetric
        Its raw ``(row, col, term)`` entries are stamped directly.
    omega : float
        Angular frequency.
    edge_emfs : array, optional
        Emf per edge, driving current from tail to head.
    jsources : dict, optional
        Edge -> current pushed through that edge from tail to head by an
        external source connected across its end vertices.
    couplings : iterable of (row, col, value)
        Extra edge-space impedances (complex numbers).
    """
    nv, ne = cx.n_vertices, cx.n_edges
    e = np.zeros(ne, dtype=complex) if edge_emfs is None else np.asarray(edge_emfs, dtype=complex)
    z = np.zeros((ne, ne), dtype=complex)
    for r, c, term in edge_metric.entries:
        z[r, c] += term.evaluate(omega)
    for r, c, value in couplings:
        z[r, c] += value

    coupled = [(r, c) for r, c in zip(*np.nonzero(z)) if r != c]
    yb = np.zeros((ne, ne), dtype=complex)
    for group in _groups(ne, coupled):
        block = z[np.ix_(group, group)]
        if len(group) == 1 and block[0, 0] == 0:
            raise OracleSingularError(f"edge {group[0]} has zero impedance; nodal analysis needs admittances")
        try:
            yb[np.ix_(group, group)] = np.linalg.inv(block)
        except np.linalg.LinAlgError:
            raise OracleSingularError(f"coupled edges {group} have a singular impedance block") from None

    Y = np.zeros((nv, nv), dtype=complex)
    rhs = np.zeros(nv, dtype=complex)
    inj = np.zeros(nv, dtype=complex)
    norton = yb @ e
    for a, (ta, ha) in enumerate(cx.edges):
        rhs[ha] += norton[a]
        rhs[ta] -= norton[a]
        for b in np.nonzero(yb[a])[0]:
            tb, hb = cx.edges[b]
            y = yb[a, b]
            Y[ha, hb] += y
            Y[ha, tb] -= y
            Y[ta, hb] -= y
            Y[ta, tb] += y
    for s, J in (jsources or {}).items():
        t, h = cx.edges[s]
        inj[h] += J
        inj[t] -= J
    rhs -= inj

    grounds = tuple(min(g) for g in _groups(nv, cx.edges))
    keep = [v for v in range(nv) if v not in set(grounds)]
    phi = np.zeros(nv, dtype=complex)
    if keep:
        Yr = Y[np.ix_(keep, keep)]
        if np.linalg.cond(Yr) > 1e14:
            raise OracleSingularError(f"nodal admittance matrix is singular at omega={omega:.6g}")
        phi[keep] = np.linalg.solve(Yr, rhs[keep])
    U = np.array([phi[h] - phi[t] for t, h in cx.edges], dtype=complex)
    i = yb @ (e - U)
    return NodalSolution(phi, i, Y, grounds, inj)


def solve_problem_nodal(problem, omega: float) -> NodalSolution:
    """Run the oracle on a :class:`~kron_tan.solver.NetworkProblem`.

    Chords name meshes by closing edge, and a closing edge carries exactly its
    mesh current, so each chord entry is stamped between closing edges.
    """
    couplings = []
    for chord in problem.chords:
        couplings.extend(chord.entries(omega))
    jsources = dict(zip(problem.connectivity.source_edges, problem.source_currents))
    return solve_nodal(problem.complex, problem.edge_metric, omega, problem.edge_emfs, jsources, couplings)

"""Frequency-domain solution in the complete space.

At each frequency the metric ``g = C^T z C (+ chords)`` is split into blocks
``[[A, B], [E, D]]`` over (tree sources, meshes) and

    k   = D^-1 (S - E J)
    V_J = W - (A J + B k)

where ``S`` are mesh emfs and ``W`` the emfs sitting on the source edges.
``V_J`` is the potential difference head minus tail across each source edge,
the same convention as :func:`~kron_tan.cell_complex.coboundary`.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la

from .cell_complex import CellComplex
from .errors import KronError, ObservableError, SingularMetricError, SweepError
from .metric import EdgeMetric, MeshMetric, assemble_complete_metric, chord_matrix
from .topology import (
    ConnectivityMatrix,
    MeshBasis,
    SpanningTree,
    build_connectivity,
    build_mesh_basis,
    build_spanning_tree,
)

logger = logging.getLogger(__name__)

__all__ = [
    "Probe",
    "NetworkProblem",
    "SourceVector",
    "FrequencyGrid",
    "SweepSolution",
    "mesh_emfs_from_edges",
    "solve_complete",
    "run_sweep",
    "shielding_effectiveness",
    "power_balance",
]

COND_LIMIT = 1e14
SE_CLAMP_DB = 300.0


@dataclass(frozen=True)
class Probe:
    """A named observable.

    ``kind`` is ``"edge"`` or ``"mesh"`` (``target`` an edge index; meshes are
    named by closing edge) with ``quantity`` ``"current"`` or ``"voltage"``,
    or ``"se"`` with ``target = (reference_name, probe_name)``.
    """

    name: str
    kind: str
    target: int | tuple[str, str]
    quantity: str = "voltage"


@dataclass(frozen=True, eq=False)
class SourceVector:
    J: np.ndarray
    S: np.ndarray
    W: np.ndarray

    def scaled(self, alpha: complex) -> "SourceVector":
        return SourceVector(alpha * self.J, alpha * self.S, alpha * self.W)


def mesh_emfs_from_edges(edge_emfs, C: ConnectivityMatrix, J=None) -> SourceVector:
    """Project per-edge emfs with ``C^T``: mesh rows give ``S``, source rows ``W``."""
    e = np.asarray(edge_emfs, dtype=complex)
    v = C.natural.T @ e
    ns = C.n_sources
    J = np.zeros(ns, dtype=complex) if J is None else np.asarray(J, dtype=complex)
    if J.shape != (ns,):
        raise ValueError(f"expected {ns} source currents, got {J.shape}")
    return SourceVector(J, v[ns:], v[:ns])


def solve_complete(g: MeshMetric, src: SourceVector):
    """Mesh currents ``k`` and source-edge voltages ``V_J``."""
    D, E, A, B = g.D, g.E, g.A, g.B
    rhs = src.S - E @ src.J
    if D.shape[0]:
        cond = np.linalg.cond(D)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise SingularMetricError(g.omega, cond)
        k = la.lu_solve(la.lu_factor(D, check_finite=False), rhs, check_finite=False)
        res = np.linalg.norm(D @ k - rhs)
        scale = np.linalg.norm(src.S) + np.linalg.norm(E @ src.J)
        if res > 1e-10 * scale + 1e-300:
            raise SingularMetricError(g.omega, cond)
    else:
        k = np.zeros(0, dtype=complex)
    v_j = src.W - (A @ src.J + B @ k)
    return k, v_j


@dataclass(frozen=True, eq=False)
class NetworkProblem:
    """Everything needed to solve one network over frequency."""

    complex: CellComplex
    tree: SpanningTree
    meshes: MeshBasis
    connectivity: ConnectivityMatrix
    edge_metric: EdgeMetric
    chords: tuple = ()
    edge_emfs: np.ndarray = field(default=None, repr=False)
    source_currents: np.ndarray = field(default=None, repr=False)
    probes: tuple[Probe, ...] = ()
    netlist: object = field(default=None, repr=False)

    @classmethod
    def build(
        cls,
        cx: CellComplex,
        edge_metric: EdgeMetric,
        chords=(),
        edge_emfs=None,
        jsources=None,
        probes=(),
        tree_edges=None,
        netlist=None,
    ) -> "NetworkProblem":
        """Derive tree, meshes and connectivity for ``cx``.

        ``jsources`` maps tree edges to source currents; ``tree_edges`` pins
        the spanning tree instead of the breadth-first default.
        """
        tree = build_spanning_tree(cx) if tree_edges is None else SpanningTree.from_edges(cx, tree_edges)
        meshes = build_mesh_basis(cx, tree)
        jsources = dict(jsources or {})
        source_edges = sorted(jsources)
        conn = build_connectivity(meshes.complex, tree, meshes, source_edges)
        emfs = np.zeros(cx.n_edges, dtype=complex) if edge_emfs is None else np.asarray(edge_emfs, dtype=complex)
        if emfs.shape != (cx.n_edges,):
            raise ValueError("one emf per edge expected")
        J = np.array([jsources[s] for s in source_edges], dtype=complex)
        return cls(meshes.complex, tree, meshes, conn, edge_metric, tuple(chords), emfs, J, tuple(probes), netlist)

    @property
    def n_unknowns(self) -> int:
        return self.connectivity.n_sources + self.meshes.n_meshes

    def metric(self, omega: float) -> MeshMetric:
        return assemble_complete_metric(self.edge_metric, self.connectivity, self.chords, omega, self.meshes)

    def sources(self) -> SourceVector:
        return mesh_emfs_from_edges(self.edge_emfs, self.connectivity, self.source_currents)

    def chord_edge_matrix(self, omega: float) -> np.ndarray:
        """Chord contributions attributed to the closing edge of each mesh."""
        n = self.complex.n_edges
        out = np.zeros((n, n), dtype=complex)
        if self.chords:
            idx = list(self.meshes.closing_edges)
            out[np.ix_(idx, idx)] = chord_matrix(self.chords, self.meshes.closing_edges, omega)
        return out

    def edge_impedance(self, omega: float) -> np.ndarray:
        """Edge metric with chords folded onto closing edges; ``C^T`` of it is ``g``."""
        return self.edge_metric.evaluate(omega) + self.chord_edge_matrix(omega)

    def injection(self) -> np.ndarray:
        """Vertex pattern ``B Q J`` that the edge currents must balance."""
        return self.complex.incidence @ (self.connectivity.natural[:, : self.connectivity.n_sources] @ self.source_currents)

    def mesh_labels(self) -> str:
        """One-line description of mesh ids (1-based closing edges) and their cycles."""
        parts = []
        for c, cycle in zip(self.meshes.closing_edges, self.meshes.meshes):
            walk = " ".join(f"{'+' if s > 0 else '-'}{a + 1}" for a, s in cycle)
            parts.append(f"{c + 1}:[{walk}]")
        return "meshes " + (" ".join(parts) if parts else "(none)")


@dataclass(frozen=True)
class FrequencyGrid:
    """Strictly positive, increasing angular frequencies (rad/s)."""

    omegas: tuple[float, ...]
    spacing: str = "custom"

    def __post_init__(self):
        w = np.asarray(self.omegas, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("a frequency grid needs at least one point")
        if np.any(w <= 0) or np.any(np.diff(w) <= 0):
            raise ValueError("grid points must be positive and strictly increasing")
        object.__setattr__(self, "omegas", tuple(float(x) for x in w))

    @classmethod
    def linear(cls, fmin_hz: float, fmax_hz: float, n: int) -> "FrequencyGrid":
        return cls(tuple(2 * math.pi * np.linspace(fmin_hz, fmax_hz, n)), "linear")

    @classmethod
    def logarithmic(cls, fmin_hz: float, fmax_hz: float, n: int) -> "FrequencyGrid":
        return cls(tuple(2 * math.pi * np.geomspace(fmin_hz, fmax_hz, n)), "logarithmic")

    @property
    def freqs_hz(self) -> np.ndarray:
        return np.asarray(self.omegas) / (2 * math.pi)

    def __len__(self):
        return len(self.omegas)


@dataclass(frozen=True, eq=False)
class SweepSolution:
    omegas: np.ndarray
    mesh_currents: np.ndarray
    source_voltages: np.ndarray
    edge_currents: np.ndarray
    edge_drops: np.ndarray
    observables: dict
    errors: dict
    problem: NetworkProblem = field(repr=False)

    @property
    def freqs_hz(self) -> np.ndarray:
        return self.omegas / (2 * math.pi)

    def __len__(self):
        return len(self.omegas)

    def observable(self, name: str) -> np.ndarray:
        try:
            return self.observables[name]
        except KeyError:
            raise ObservableError(f"no observable named {name!r}") from None


def _solve_point(problem: NetworkProblem, src: SourceVector, omega: float):
    g = problem.metric(omega)
    k, v_j = solve_complete(g, src)
    i = problem.connectivity.natural @ np.concatenate([src.J, k])
    drops = problem.edge_impedance(omega) @ i - problem.edge_emfs
    chord_emf = chord_matrix(problem.chords, problem.meshes.closing_edges, omega) @ k
    return k, v_j, i, drops, chord_emf


def _probe_value(problem, probe, k, i, drops, chord_emf):
    if probe.kind == "edge":
        return i[probe.target] if probe.quantity == "current" else -drops[probe.target]
    m = problem.meshes.mesh_of(probe.target)
    return k[m] if probe.quantity == "current" else chord_emf[m]


def run_sweep(problem: NetworkProblem, grid, workers: int = 1) -> SweepSolution:
    """Solve ``problem`` at every grid point.

    A point that fails (pole of an edge impedance, singular mesh block) is
    stored as NaN and its message kept in ``errors``; the sweep only fails
    when no point succeeds.
    """
    omegas = np.asarray(grid.omegas if isinstance(grid, FrequencyGrid) else grid, dtype=float)
    if problem.n_unknowns == 0:
        raise SweepError("the problem has neither meshes nor current sources")
    src = problem.sources()

    def work(w):
        try:
            return _solve_point(problem, src, w)
        except KronError as exc:
            return exc

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, omegas))
    else:
        results = [work(w) for w in omegas]

    nf, nm, ns, ne = len(omegas), problem.meshes.n_meshes, problem.connectivity.n_sources, problem.complex.n_edges
    nan = complex(math.nan, math.nan)
    k = np.full((nf, nm), nan)
    vj = np.full((nf, ns), nan)
    cur = np.full((nf, ne), nan)
    drop = np.full((nf, ne), nan)
    direct = [p for p in problem.probes if p.kind != "se"]
    obs = {p.name: np.full(nf, nan) for p in problem.probes}
    errors = {}
    for n, res in enumerate(results):
        if isinstance(res, Exception):
            errors[n] = str(res)
            logger.warning("omega=%g: %s", omegas[n], res)
            continue
        k[n], vj[n], cur[n], drop[n], chord_emf = res
        for p in direct:
            obs[p.name][n] = _probe_value(problem, p, k[n], cur[n], drop[n], chord_emf)
    if len(errors) == nf:
        raise SweepError(f"all {nf} frequency points failed; first error: {errors[0]}")
    sol = SweepSolution(omegas, k, vj, cur, drop, obs, errors, problem)
    for p in problem.probes:
        if p.kind == "se":
            ref, inner = p.target
            obs[p.name] = shielding_effectiveness(sol, inner, ref).astype(complex)
    return sol


def shielding_effectiveness(sol: SweepSolution, probe: str, reference: str) -> np.ndarray:
    """``20 log10(|reference| / |probe|)`` in dB, clamped to 300 dB."""
    ref = np.abs(sol.observable(reference))
    val = np.abs(sol.observable(probe))
    with np.errstate(divide="ignore", invalid="ignore"):
        se = 20 * np.log10(ref / val)
    se = np.where((val == 0) & (ref > 0), SE_CLAMP_DB, se)
    return np.minimum(se, SE_CLAMP_DB)


def power_balance(sol: SweepSolution):
    """Supplied and absorbed active power at every point.

    Supplied: ``Re(sum conj(i) e) - Re(sum conj(J) V_J)``; absorbed:
    ``Re(i^H Z i)`` with chords folded onto closing edges.  Returns two
    arrays, equal up to rounding.
    """
    problem = sol.problem
    e = problem.edge_emfs
    J = problem.source_currents
    supplied = np.real(np.conj(sol.edge_currents) @ e) - np.real(sol.source_voltages @ np.conj(J))
    absorbed = np.real(np.sum(np.conj(sol.edge_currents) * (sol.edge_drops + e), axis=1))
    return supplied, absorbed

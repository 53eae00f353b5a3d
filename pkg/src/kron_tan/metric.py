"""Edge impedances and the metric of the complete space.

The edge metric ``z(p)`` is a square operator over edges.  Pulled back by the
connectivity it becomes the metric ``g = C^T z C`` over sources and meshes;
chords (couplings between meshes that share no edge) are then added to the
mesh block.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

import numpy as np

from .errors import AssemblyError, SingularFrequencyError
from .topology import ConnectivityMatrix

__all__ = [
    "ImpedanceTerm",
    "ImpedanceExpr",
    "EdgeMetric",
    "MeshMetric",
    "MutualInductance",
    "DirectImpedance",
    "evaluate_edge_metric",
    "chord_matrix",
    "assemble_complete_metric",
    "isometry_check",
]


class ImpedanceTerm(Protocol):
    def evaluate(self, omega: float) -> complex: ...


Gain = complex | float | Callable[[complex], complex]


@dataclass(frozen=True)
class ImpedanceExpr:
    """``z(p) = R + L p + S / p + sum(gain(p) * exp(-tau p))`` at ``p = j omega``.

    ``S`` is the elastance ``1/C``; ``S = 0`` means no capacitor.  A delay
    gain is either a constant or a callable of ``p``.
    """

    R: float = 0.0
    L: float = 0.0
    S: float = 0.0
    delay_terms: tuple[tuple[Gain, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "delay_terms", tuple((g, float(t)) for g, t in self.delay_terms))
        for _, tau in self.delay_terms:
            if tau < 0:
                raise ValueError("delays must be non-negative")

    @classmethod
    def capacitor(cls, C: float) -> "ImpedanceExpr":
        return cls(S=1.0 / C)

    @classmethod
    def delay(cls, gain: Gain, tau: float) -> "ImpedanceExpr":
        return cls(delay_terms=((gain, tau),))

    def __add__(self, other):
        if not isinstance(other, ImpedanceExpr):
            return NotImplemented
        return ImpedanceExpr(
            self.R + other.R,
            self.L + other.L,
            self.S + other.S,
            self.delay_terms + other.delay_terms,
        )

    def evaluate(self, omega: float) -> complex:
        p = 1j * omega
        z = self.R + p * self.L
        if self.S:
            if omega == 0:
                raise SingularFrequencyError("capacitive edge evaluated at omega = 0")
            z += self.S / p
        for gain, tau in self.delay_terms:
            g = gain(p) if callable(gain) else gain
            z += g * cmath.exp(-p * tau)
        return complex(z)

    __call__ = evaluate


@dataclass(frozen=True)
class EdgeMetric:
    """Sparse description of the edge impedance operator.

    ``entries`` holds ``(row, col, term)`` triples; terms sharing a position
    add up.  Diagonal entries are intrinsic edge impedances, off-diagonal ones
    edge-space couplings such as transmission-line ports.
    """

    n_edges: int
    entries: tuple[tuple[int, int, ImpedanceTerm], ...] = ()

    def __post_init__(self):
        for r, c, _ in self.entries:
            if not (0 <= r < self.n_edges and 0 <= c < self.n_edges):
                raise AssemblyError(f"edge metric entry ({r}, {c}) is outside {self.n_edges} edges")

    @classmethod
    def diagonal(cls, impedances: Sequence[ImpedanceTerm]) -> "EdgeMetric":
        return cls(len(impedances), tuple((a, a, z) for a, z in enumerate(impedances)))

    def with_entries(self, extra) -> "EdgeMetric":
        return EdgeMetric(self.n_edges, self.entries + tuple(extra))

    def terms_at(self, row: int, col: int):
        return [t for r, c, t in self.entries if r == row and c == col]

    def self_inductance(self, edge: int) -> float:
        return sum(t.L for t in self.terms_at(edge, edge) if isinstance(t, ImpedanceExpr))

    def evaluate(self, omega: float) -> np.ndarray:
        z = np.zeros((self.n_edges, self.n_edges), dtype=complex)
        for r, c, term in self.entries:
            z[r, c] += term.evaluate(omega)
        return z


def evaluate_edge_metric(m: EdgeMetric, omega: float) -> np.ndarray:
    return m.evaluate(omega)


@dataclass(frozen=True, eq=False)
class MeshMetric:
    """Metric of the complete space at one frequency.

    Blocks follow the column order of the connectivity (sources, then
    meshes): ``A`` source/source, ``B`` source/mesh, ``E`` mesh/source and
    ``D`` mesh/mesh.
    """

    matrix: np.ndarray = field(repr=False)
    n_sources: int
    omega: float

    @property
    def n_meshes(self) -> int:
        return self.matrix.shape[0] - self.n_sources

    @property
    def A(self):
        return self.matrix[: self.n_sources, : self.n_sources]

    @property
    def B(self):
        return self.matrix[: self.n_sources, self.n_sources :]

    @property
    def E(self):
        return self.matrix[self.n_sources :, : self.n_sources]

    @property
    def D(self):
        return self.matrix[self.n_sources :, self.n_sources :]


@dataclass(frozen=True)
class MutualInductance:
    """Magnetic coupling ``-u p`` between two meshes (named by closing edge)."""

    mesh_i: int
    mesh_j: int
    u: float

    @property
    def meshes(self):
        return (self.mesh_i, self.mesh_j)

    def entries(self, omega):
        z = -1j * omega * self.u
        return [(self.mesh_i, self.mesh_j, z), (self.mesh_j, self.mesh_i, z)]


@dataclass(frozen=True)
class DirectImpedance:
    """Arbitrary one-way coupling: adds ``impedance(p)`` at (mesh_i, mesh_j) only."""

    mesh_i: int
    mesh_j: int
    impedance: ImpedanceTerm

    @property
    def meshes(self):
        return (self.mesh_i, self.mesh_j)

    def entries(self, omega):
        return [(self.mesh_i, self.mesh_j, self.impedance.evaluate(omega))]


def chord_matrix(chords, closing_edges: Sequence[int], omega: float) -> np.ndarray:
    """Mesh-by-mesh matrix of chord contributions.

    Chords name meshes by their closing edge; ``closing_edges`` gives the mesh
    order.
    """
    index = {c: m for m, c in enumerate(closing_edges)}
    out = np.zeros((len(closing_edges), len(closing_edges)), dtype=complex)
    for chord in chords:
        for i, j, value in chord.entries(omega):
            try:
                out[index[i], index[j]] += value
            except KeyError:
                bad = i if i not in index else j
                raise AssemblyError(f"chord {chord!r} references edge {bad}, which closes no mesh") from None
    return out


def _check_mutual(chord, z: EdgeMetric, meshes_by_edge):
    for m in chord.meshes:
        if not any(z.self_inductance(a) > 0 for a, _ in meshes_by_edge[m]):
            raise AssemblyError(
                f"mutual inductance on mesh closed by edge {m}, which has no self-inductance"
            )


def assemble_complete_metric(
    z: EdgeMetric,
    C: ConnectivityMatrix,
    chords=(),
    omega: float = 0.0,
    meshes=None,
) -> MeshMetric:
    """``g = C^T z(j omega) C`` plus chord contributions on the mesh block.

    ``meshes`` (a :class:`~kron_tan.topology.MeshBasis`) is only needed to
    check that mutually coupled meshes carry a self-inductance.
    """
    if z.n_edges != C.matrix.shape[0]:
        raise AssemblyError(
            f"edge metric has {z.n_edges} edges but the connectivity has {C.matrix.shape[0]} rows"
        )
    cn = C.natural
    g = cn.T @ z.evaluate(omega) @ cn
    if chords:
        if meshes is not None:
            by_edge = dict(zip(meshes.closing_edges, meshes.meshes))
            for chord in chords:
                if isinstance(chord, MutualInductance):
                    _check_mutual(chord, z, by_edge)
        ns = C.n_sources
        g[ns:, ns:] += chord_matrix(chords, C.closing_edges, omega)
    return MeshMetric(g, C.n_sources, omega)


def _as_matrix(metric, omega):
    g = metric(omega)
    return g.matrix if isinstance(g, MeshMetric) else np.asarray(g, dtype=complex)


def isometry_check(metric_a, metric_b, omegas, rtol: float = 1e-10):
    """Compare two metric families entrywise over sampled frequencies.

    ``metric_a`` and ``metric_b`` map ``omega`` to a matrix (or
    :class:`MeshMetric`).  Returns ``(agree, max_relative_deviation)``.
    """
    worst = 0.0
    for w in omegas:
        ga, gb = _as_matrix(metric_a, w), _as_matrix(metric_b, w)
        if ga.shape != gb.shape:
            raise AssemblyError(f"metrics of shapes {ga.shape} and {gb.shape} cannot be compared")
        scale = max(np.max(np.abs(ga)), np.max(np.abs(gb)), np.finfo(float).tiny)
        worst = max(worst, float(np.max(np.abs(ga - gb))) / scale)
    return worst <= rtol, worst

"""Cell complexes of dimension two specialised to graphs with face cycles.

Vertices are 0-cells, oriented edges 1-cells and faces 2-cells whose boundary
is an explicit signed cycle of edges.  Indices are dense and 0-based; the
netlist layer converts to and from 1-based ids.

Chains carry complex coefficients (currents are phasors), cochains are the
dual objects (potentials, emfs).  Both are stored densely: a missing cell
simply has coefficient zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ComplexError, DegreeError

__all__ = [
    "CellComplex",
    "Chain",
    "Cochain",
    "incidence_matrix",
    "face_matrix",
    "boundary",
    "coboundary",
    "pairing",
    "kcl_residual",
    "mesh_voltage_sum",
]


@dataclass(frozen=True)
class CellComplex:
    """Vertices, oriented edges and faces.

    Parameters
    ----------
    n_vertices : int
        Number of 0-cells, indexed ``0 .. n_vertices - 1``.
    edges : sequence of (tail, head)
        Edge ``a`` carries current from ``edges[a][0]`` to ``edges[a][1]``.
    faces : sequence of sequences of (edge, sign)
        Each face is an ordered, closed walk of signed edges.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    faces: tuple[tuple[tuple[int, int], ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(t), int(h)) for t, h in self.edges))
        object.__setattr__(
            self, "faces", tuple(tuple((int(a), int(s)) for a, s in f) for f in self.faces)
        )
        if self.n_vertices < 0:
            raise ComplexError("negative vertex count")
        for a, (t, h) in enumerate(self.edges):
            if not (0 <= t < self.n_vertices and 0 <= h < self.n_vertices):
                raise ComplexError(f"edge {a} references a missing vertex")
            if t == h:
                raise ComplexError(f"edge {a} is a self-loop")
        for f, cycle in enumerate(self.faces):
            self._check_face(f, cycle)

    def _check_face(self, f, cycle):
        if not cycle:
            raise ComplexError(f"face {f} has an empty boundary")
        seen = set()
        start = cursor = None
        for a, s in cycle:
            if not 0 <= a < self.n_edges:
                raise ComplexError(f"face {f} references missing edge {a}")
            if s not in (1, -1):
                raise ComplexError(f"face {f}: sign of edge {a} must be +1 or -1")
            if a in seen:
                raise ComplexError(f"face {f} uses edge {a} twice")
            seen.add(a)
            t, h = self.edges[a]
            if s < 0:
                t, h = h, t
            if start is None:
                start = t
            elif t != cursor:
                raise ComplexError(f"face {f} is not a connected walk at edge {a}")
            cursor = h
        if cursor != start:
            raise ComplexError(f"face {f} does not close")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def n_cells(self, degree: int) -> int:
        if degree == 0:
            return self.n_vertices
        if degree == 1:
            return self.n_edges
        if degree == 2:
            return self.n_faces
        raise DegreeError(f"no cells of degree {degree}")

    def with_faces(self, faces) -> "CellComplex":
        """Return a copy whose face set is replaced by ``faces``."""
        return CellComplex(self.n_vertices, self.edges, tuple(faces))

    @cached_property
    def incidence(self) -> np.ndarray:
        m = np.zeros((self.n_vertices, self.n_edges), dtype=np.int64)
        for a, (t, h) in enumerate(self.edges):
            m[h, a] = 1
            m[t, a] = -1
        m.setflags(write=False)
        return m

    @cached_property
    def face_boundaries(self) -> np.ndarray:
        m = np.zeros((self.n_edges, self.n_faces), dtype=np.int64)
        for f, cycle in enumerate(self.faces):
            for a, s in cycle:
                m[a, f] = s
        m.setflags(write=False)
        return m


@dataclass(frozen=True, eq=False)
class Chain:
    """Formal complex combination of cells of one degree."""

    degree: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.degree not in (0, 1, 2):
            raise DegreeError(f"chains have degree 0, 1 or 2, got {self.degree}")
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))

    @classmethod
    def zero(cls, cx: CellComplex, degree: int):
        return cls(degree, np.zeros(cx.n_cells(degree), dtype=complex))

    @classmethod
    def unit(cls, cx: CellComplex, degree: int, index: int):
        c = np.zeros(cx.n_cells(degree), dtype=complex)
        c[index] = 1.0
        return cls(degree, c)

    @classmethod
    def from_dict(cls, cx: CellComplex, degree: int, coefficients: dict):
        c = np.zeros(cx.n_cells(degree), dtype=complex)
        for idx, value in coefficients.items():
            c[idx] += value
        return cls(degree, c)

    def __add__(self, other):
        if type(other) is not type(self) or other.degree != self.degree:
            return NotImplemented
        return type(self)(self.degree, self.values + other.values)

    def __sub__(self, other):
        if type(other) is not type(self) or other.degree != self.degree:
            return NotImplemented
        return type(self)(self.degree, self.values - other.values)

    def __mul__(self, alpha):
        return type(self)(self.degree, alpha * self.values)

    __rmul__ = __mul__

    def is_zero(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.values) <= atol))


class Cochain(Chain):
    """Linear functional on chains of the same degree (potential, emf)."""


def _check_size(cx: CellComplex, c: Chain):
    if c.values.shape != (cx.n_cells(c.degree),):
        raise ComplexError(
            f"{type(c).__name__} of degree {c.degree} has {c.values.size} coefficients, "
            f"complex has {cx.n_cells(c.degree)} cells"
        )


def incidence_matrix(cx: CellComplex) -> np.ndarray:
    """Vertex-by-edge incidence: +1 at the head (current enters), -1 at the tail."""
    return cx.incidence


def face_matrix(cx: CellComplex) -> np.ndarray:
    """Edge-by-face matrix of signed face boundaries."""
    return cx.face_boundaries


def boundary(cx: CellComplex, c: Chain) -> Chain:
    """Boundary operator, lowering the degree by one."""
    if isinstance(c, Cochain):
        raise DegreeError("boundary acts on chains; use coboundary for cochains")
    _check_size(cx, c)
    if c.degree == 1:
        return Chain(0, cx.incidence @ c.values)
    if c.degree == 2:
        return Chain(1, cx.face_boundaries @ c.values)
    raise DegreeError("the boundary of a vertex chain is not represented (degree -1)")


def coboundary(cx: CellComplex, v: Cochain) -> Cochain:
    """Coboundary, the transpose of :func:`boundary`.

    For a vertex potential ``V`` this returns the edge cochain
    ``U[a] = V[head(a)] - V[tail(a)]``.
    """
    _check_size(cx, v)
    if v.degree == 0:
        return Cochain(1, cx.incidence.T @ v.values)
    if v.degree == 1:
        return Cochain(2, cx.face_boundaries.T @ v.values)
    raise DegreeError("no 3-cells: the coboundary of a face cochain is undefined")


def pairing(v: Cochain, c: Chain) -> complex:
    """Duality product ``<v|c>`` (bilinear, no conjugation)."""
    if v.degree != c.degree:
        raise DegreeError(f"cannot pair a degree-{v.degree} cochain with a degree-{c.degree} chain")
    return complex(v.values @ c.values)


def kcl_residual(cx: CellComplex, i: Chain) -> Chain:
    """Net current entering each vertex; zero everywhere iff KCL holds."""
    if i.degree != 1:
        raise DegreeError("currents are chains of degree 1")
    return boundary(cx, i)


def mesh_voltage_sum(cx: CellComplex, v: Cochain, face: int) -> complex:
    """Sum of potential differences around ``face``; zero up to rounding."""
    if v.degree != 0:
        raise DegreeError("potentials are cochains of degree 0")
    u = coboundary(cx, v)
    return pairing(u, boundary(cx, Chain.unit(cx, 2, face)))

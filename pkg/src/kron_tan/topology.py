"""Spanning trees, fundamental meshes and the block connectivity matrix.

Every closing edge (edge outside the tree) closes exactly one fundamental
cycle with the tree; those cycles are the meshes.  With tree edges numbered
first, the connectivity ``i = C @ [J; k]`` has the block form

    C = [[Q, L],
         [0, I]]

where ``J`` are current sources living on tree edges and ``k`` mesh currents.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .cell_complex import CellComplex, Chain
from .errors import ComplexError, DegreeError, SourcePlacementError

__all__ = [
    "SpanningTree",
    "MeshBasis",
    "ConnectivityMatrix",
    "CompleteDecomposition",
    "build_spanning_tree",
    "build_mesh_basis",
    "build_connectivity",
    "decompose_current",
]


def _adjacency(cx: CellComplex):
    adj = [[] for _ in range(cx.n_vertices)]
    for a, (t, h) in enumerate(cx.edges):
        adj[t].append((a, h))
        adj[h].append((a, t))
    return adj


@dataclass(frozen=True)
class SpanningTree:
    """A spanning forest together with the parent links used to walk it.

    ``parent_edge[v]`` is the tree edge joining ``v`` to its parent, or -1 for
    the root of a component.
    """

    tree_edges: tuple[int, ...]
    closing_edges: tuple[int, ...]
    n_components: int
    parent_edge: tuple[int, ...] = field(repr=False)
    parent: tuple[int, ...] = field(repr=False)
    depth: tuple[int, ...] = field(repr=False)

    @property
    def n_meshes(self) -> int:
        return len(self.closing_edges)

    @classmethod
    def from_edges(cls, cx: CellComplex, tree_edges) -> "SpanningTree":
        """Validate a user-chosen tree and index it for path queries."""
        chosen = set(int(a) for a in tree_edges)
        for a in chosen:
            if not 0 <= a < cx.n_edges:
                raise ComplexError(f"tree edge {a} does not exist")
        adj = [[(a, w) for a, w in nbrs if a in chosen] for nbrs in _adjacency(cx)]
        tree = _walk(cx, adj)
        if set(tree.tree_edges) != chosen:
            raise ComplexError("the chosen tree edges contain a cycle")
        full = _walk(cx, _adjacency(cx))
        if tree.n_components != full.n_components:
            raise ComplexError("the chosen tree edges do not span every component")
        return tree


def _walk(cx: CellComplex, adj) -> SpanningTree:
    # breadth first, lowest vertex id first, incident edges in ascending id
    n = cx.n_vertices
    parent_edge = [-1] * n
    parent = [-1] * n
    depth = [0] * n
    seen = [False] * n
    tree = []
    components = 0
    for root in range(n):
        if seen[root]:
            continue
        components += 1
        seen[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for a, w in sorted(adj[v]):
                if not seen[w]:
                    seen[w] = True
                    parent_edge[w] = a
                    parent[w] = v
                    depth[w] = depth[v] + 1
                    tree.append(a)
                    queue.append(w)
    tree_set = set(tree)
    closing = tuple(a for a in range(cx.n_edges) if a not in tree_set)
    return SpanningTree(
        tree_edges=tuple(sorted(tree)),
        closing_edges=closing,
        n_components=components,
        parent_edge=tuple(parent_edge),
        parent=tuple(parent),
        depth=tuple(depth),
    )


def build_spanning_tree(cx: CellComplex) -> SpanningTree:
    """Deterministic breadth-first spanning forest of ``cx``."""
    return _walk(cx, _adjacency(cx))


def _tree_path(cx: CellComplex, tree: SpanningTree, src: int, dst: int):
    """Signed tree edges of the walk from ``src`` to ``dst``."""
    up, down = [], []
    u, v = src, dst
    while tree.depth[u] > tree.depth[v]:
        up.append((tree.parent_edge[u], u))
        u = tree.parent[u]
    while tree.depth[v] > tree.depth[u]:
        down.append((tree.parent_edge[v], v))
        v = tree.parent[v]
    while u != v:
        if tree.parent[u] < 0 or tree.parent[v] < 0:
            raise ComplexError(f"vertices {src} and {dst} lie in different components")
        up.append((tree.parent_edge[u], u))
        down.append((tree.parent_edge[v], v))
        u, v = tree.parent[u], tree.parent[v]
    path = []
    for a, child in up:
        # walking from child towards its parent
        path.append((a, 1 if cx.edges[a][0] == child else -1))
    for a, child in reversed(down):
        # walking from the parent down to child
        path.append((a, 1 if cx.edges[a][1] == child else -1))
    return path


@dataclass(frozen=True)
class MeshBasis:
    """Fundamental meshes, one per closing edge, in ascending closing-edge order.

    ``complex`` is the input complex with the meshes registered as its faces,
    so face ``m`` is mesh ``m``.
    """

    complex: CellComplex
    closing_edges: tuple[int, ...]

    @property
    def n_meshes(self) -> int:
        return len(self.closing_edges)

    @property
    def meshes(self):
        return self.complex.faces

    def mesh_of(self, closing_edge: int) -> int:
        try:
            return self.closing_edges.index(closing_edge)
        except ValueError:
            raise ComplexError(f"edge {closing_edge} is not a closing edge") from None

    def column(self, m: int) -> np.ndarray:
        return self.complex.face_boundaries[:, m]


def build_mesh_basis(cx: CellComplex, tree: SpanningTree) -> MeshBasis:
    faces = []
    for c in tree.closing_edges:
        t, h = cx.edges[c]
        faces.append(((c, 1), *_tree_path(cx, tree, h, t)))
    return MeshBasis(cx.with_faces(faces), tree.closing_edges)


@dataclass(frozen=True, eq=False)
class ConnectivityMatrix:
    """Block connectivity of the complete space.

    ``matrix`` has rows ordered ``tree_edges + closing_edges`` and columns
    ``source_edges + meshes``; ``natural`` is the same map with rows in edge
    id order, so that edge currents are ``natural @ [J; k]``.
    """

    tree_edges: tuple[int, ...]
    closing_edges: tuple[int, ...]
    source_edges: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    @property
    def n_sources(self) -> int:
        return len(self.source_edges)

    @property
    def n_meshes(self) -> int:
        return len(self.closing_edges)

    @property
    def edge_order(self) -> tuple[int, ...]:
        return self.tree_edges + self.closing_edges

    @property
    def Q(self) -> np.ndarray:
        return self.matrix[: len(self.tree_edges), : self.n_sources]

    @property
    def L(self) -> np.ndarray:
        return self.matrix[: len(self.tree_edges), self.n_sources :]

    @property
    def natural(self) -> np.ndarray:
        out = np.empty_like(self.matrix)
        out[list(self.edge_order)] = self.matrix
        return out


def build_connectivity(cx: CellComplex, tree: SpanningTree, meshes: MeshBasis, source_edges=()):
    sources = tuple(int(s) for s in source_edges)
    if len(set(sources)) != len(sources):
        raise SourcePlacementError("a tree edge can carry at most one source column")
    tree_set = set(tree.tree_edges)
    for s in sources:
        if s not in tree_set:
            raise SourcePlacementError(
                f"current source on edge {s}: sources must sit on spanning-tree edges"
            )
    row = {a: r for r, a in enumerate(tree.tree_edges + tree.closing_edges)}
    ns = len(sources)
    c = np.zeros((cx.n_edges, ns + meshes.n_meshes), dtype=np.int64)
    for j, s in enumerate(sources):
        c[row[s], j] = 1
    for m, cycle in enumerate(meshes.meshes):
        for a, sign in cycle:
            c[row[a], ns + m] = sign
    c.setflags(write=False)
    return ConnectivityMatrix(tree.tree_edges, tree.closing_edges, sources, c)


@dataclass(frozen=True, eq=False)
class CompleteDecomposition:
    """``i = sum_f beta_f d(f) + sum_t theta_t |t>`` over a tree and its meshes."""

    mesh_coefficients: np.ndarray
    tree_coefficients: np.ndarray
    tree_edges: tuple[int, ...]

    def reconstruct(self, meshes: MeshBasis) -> Chain:
        values = meshes.complex.face_boundaries @ self.mesh_coefficients
        values = values.astype(complex)
        values[list(self.tree_edges)] += self.tree_coefficients
        return Chain(1, values)


def decompose_current(i: Chain, tree: SpanningTree, meshes: MeshBasis) -> CompleteDecomposition:
    if i.degree != 1:
        raise DegreeError("only edge chains can be split into mesh and tree parts")
    beta = i.values[list(meshes.closing_edges)].copy()
    rest = i.values - meshes.complex.face_boundaries @ beta
    theta = rest[list(tree.tree_edges)]
    return CompleteDecomposition(beta, theta, tree.tree_edges)

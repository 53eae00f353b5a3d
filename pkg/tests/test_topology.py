import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_connected_complex
from kron_tan import (
    CellComplex,
    Chain,
    SpanningTree,
    build_connectivity,
    build_mesh_basis,
    build_spanning_tree,
    decompose_current,
)
from kron_tan.errors import ComplexError, DegreeError, SourcePlacementError

FIG1 = CellComplex(3, [(1, 0), (0, 1), (0, 2), (2, 1), (2, 1)])


def test_figure1_tree_and_meshes():
    tree = build_spanning_tree(FIG1)
    assert tree.tree_edges == (0, 2)
    assert tree.closing_edges == (1, 3, 4)
    assert tree.n_components == 1
    basis = build_mesh_basis(FIG1, tree)
    assert basis.meshes == (((1, 1), (0, 1)), ((3, 1), (0, 1), (2, 1)), ((4, 1), (0, 1), (2, 1)))
    assert basis.mesh_of(3) == 1
    with pytest.raises(ComplexError):
        basis.mesh_of(0)


def test_closing_edge_has_plus_one_in_its_own_mesh():
    rng = np.random.default_rng(9)
    for _ in range(50):
        cx = random_connected_complex(rng, max_edges=20)
        basis = build_mesh_basis(cx, build_spanning_tree(cx))
        for m, c in enumerate(basis.closing_edges):
            col = basis.column(m)
            assert col[c] == 1
            assert all(col[o] == 0 for o in basis.closing_edges if o != c)


def test_connectivity_block_form():
    tree = build_spanning_tree(FIG1)
    basis = build_mesh_basis(FIG1, tree)
    conn = build_connectivity(basis.complex, tree, basis, source_edges=[2])
    assert conn.edge_order == (0, 2, 1, 3, 4)
    assert conn.matrix.shape == (5, 4)
    assert np.array_equal(conn.Q, [[0], [1]])
    assert np.array_equal(conn.L, [[1, 1, 1], [0, 1, 1]])
    assert np.array_equal(conn.matrix[2:, :1], np.zeros((3, 1)))
    assert np.array_equal(conn.matrix[2:, 1:], np.eye(3))
    assert np.array_equal(conn.natural[conn.edge_order, :], conn.matrix)


def test_source_on_closing_edge_is_rejected():
    tree = build_spanning_tree(FIG1)
    basis = build_mesh_basis(FIG1, tree)
    with pytest.raises(SourcePlacementError, match="tree edges"):
        build_connectivity(basis.complex, tree, basis, source_edges=[1])
    with pytest.raises(SourcePlacementError):
        build_connectivity(basis.complex, tree, basis, source_edges=[0, 0])


def test_pinned_tree():
    tree = SpanningTree.from_edges(FIG1, [1, 3])
    assert tree.tree_edges == (1, 3)
    assert tree.closing_edges == (0, 2, 4)
    with pytest.raises(ComplexError, match="cycle"):
        SpanningTree.from_edges(FIG1, [0, 1])
    with pytest.raises(ComplexError, match="span"):
        SpanningTree.from_edges(FIG1, [0])
    with pytest.raises(ComplexError, match="exist"):
        SpanningTree.from_edges(FIG1, [7])


def test_forest_for_disjoint_circuits():
    cx = CellComplex(4, [(0, 1), (1, 0), (2, 3), (3, 2)])
    tree = build_spanning_tree(cx)
    assert tree.n_components == 2
    assert tree.tree_edges == (0, 2)
    assert build_mesh_basis(cx, tree).n_meshes == 2


def test_isolated_vertex_is_its_own_component():
    cx = CellComplex(3, [(0, 1), (1, 0)])
    tree = build_spanning_tree(cx)
    assert tree.n_components == 2
    assert tree.n_meshes == 2 - 3 + 2


def test_determinism():
    rng = np.random.default_rng(5)
    cx = random_connected_complex(rng, max_edges=40)
    a, b = build_spanning_tree(cx), build_spanning_tree(cx)
    assert a == b
    ma, mb = build_mesh_basis(cx, a), build_mesh_basis(cx, b)
    assert ma.meshes == mb.meshes
    ca = build_connectivity(ma.complex, a, ma)
    cb = build_connectivity(mb.complex, b, mb)
    assert np.array_equal(ca.matrix, cb.matrix)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_tree_invariants(seed):
    rng = np.random.default_rng(seed)
    cx = random_connected_complex(rng, max_edges=30)
    tree = build_spanning_tree(cx)
    assert len(tree.tree_edges) == cx.n_vertices - tree.n_components
    assert set(tree.tree_edges).isdisjoint(tree.closing_edges)
    assert set(tree.tree_edges) | set(tree.closing_edges) == set(range(cx.n_edges))
    # acyclic: the tree alone, re-walked, keeps every edge
    assert SpanningTree.from_edges(cx, tree.tree_edges).tree_edges == tree.tree_edges


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_decomposition_round_trip(seed):
    rng = np.random.default_rng(seed)
    cx = random_connected_complex(rng, max_edges=30)
    tree = build_spanning_tree(cx)
    basis = build_mesh_basis(cx, tree)
    i = Chain(1, rng.normal(size=cx.n_edges) + 1j * rng.normal(size=cx.n_edges))
    d = decompose_current(i, tree, basis)
    assert np.allclose(d.reconstruct(basis).values, i.values, rtol=0, atol=1e-12 * np.max(np.abs(i.values)))


def test_tree_coefficients_encode_injection():
    # current entering along edge 0 only: KCL broken, theta carries it
    cx = CellComplex(2, [(0, 1), (0, 1)])
    tree = build_spanning_tree(cx)
    basis = build_mesh_basis(cx, tree)
    d = decompose_current(Chain(1, [1.0, 0.0]), tree, basis)
    assert d.tree_coefficients[0] == 1.0
    assert d.mesh_coefficients[0] == 0.0


def test_decompose_rejects_vertex_chain():
    tree = build_spanning_tree(FIG1)
    with pytest.raises(DegreeError):
        decompose_current(Chain.zero(FIG1, 0), tree, build_mesh_basis(FIG1, tree))

import numpy as np
import pytest

from kron_tan import (
    CellComplex,
    DirectImpedance,
    EdgeMetric,
    ImpedanceExpr,
    MutualInductance,
    assemble_complete_metric,
    build_connectivity,
    build_mesh_basis,
    build_spanning_tree,
    chord_matrix,
    isometry_check,
    load_deck,
)
from kron_tan.errors import AssemblyError, SingularFrequencyError


def _loop(cx, sources=()):
    tree = build_spanning_tree(cx)
    basis = build_mesh_basis(cx, tree)
    return basis, build_connectivity(basis.complex, tree, basis, sources)


def test_impedance_expression():
    z = ImpedanceExpr(R=2.0, L=1e-3, S=1e6)
    w = 1e4
    assert z.evaluate(w) == pytest.approx(2.0 + 1j * w * 1e-3 + 1e6 / (1j * w))
    assert z(w) == z.evaluate(w)


def test_capacitor_and_sum():
    z = ImpedanceExpr(R=1.0) + ImpedanceExpr.capacitor(1e-6)
    assert z.S == pytest.approx(1e6)
    assert z.evaluate(1e3) == pytest.approx(1 - 1j * 1e3)


def test_delay_terms_with_constant_and_callable_gain():
    z = ImpedanceExpr.delay(3.0, 1e-9) + ImpedanceExpr.delay(lambda p: 2 * p, 0.0)
    w = 2e8
    expected = 3.0 * np.exp(-1j * w * 1e-9) + 2 * 1j * w
    assert z.evaluate(w) == pytest.approx(expected)
    with pytest.raises(ValueError):
        ImpedanceExpr.delay(1.0, -1.0)


def test_capacitor_at_dc_is_singular_but_resistor_is_fine():
    with pytest.raises(SingularFrequencyError):
        ImpedanceExpr(S=1.0).evaluate(0.0)
    assert ImpedanceExpr(R=5.0).evaluate(0.0) == 5.0


def test_single_rc_loop_metric():
    # one mesh of a resistor and a capacitor: g = R + 1/(C p)
    cx = CellComplex(2, [(0, 1), (1, 0)])
    basis, conn = _loop(cx)
    z = EdgeMetric.diagonal([ImpedanceExpr(R=10.0), ImpedanceExpr.capacitor(1e-6)])
    g = assemble_complete_metric(z, conn, omega=1e3)
    assert g.matrix.shape == (1, 1)
    assert g.D[0, 0] == pytest.approx(10 - 1j * 1e3)


def test_block_split_with_sources():
    cx = CellComplex(2, [(0, 1), (0, 1), (1, 0)])
    basis, conn = _loop(cx, sources=[0])
    z = EdgeMetric.diagonal([ImpedanceExpr(R=r) for r in (1.0, 2.0, 3.0)])
    g = assemble_complete_metric(z, conn, omega=1.0)
    assert g.n_sources == 1 and g.n_meshes == 2
    assert np.allclose(g.A, [[1.0]])
    assert np.allclose(g.matrix, g.matrix.T)
    assert np.allclose(g.E, g.B.T)


def test_transformer_metric_closed_form():
    problem = load_deck("transformer")
    for w in (1e3, 3e4):
        p = 1j * w
        expected = [[10 + 1e-3 * p + 1 / (1e-6 * p), -5e-4 * p], [-5e-4 * p, 20 + 2e-3 * p + 1 / (2e-6 * p)]]
        assert np.allclose(problem.metric(w).D, expected, rtol=1e-14)


def test_mutual_needs_self_inductance():
    cx = CellComplex(4, [(0, 1), (1, 0), (2, 3), (3, 2)])
    basis, conn = _loop(cx)
    z = EdgeMetric.diagonal([ImpedanceExpr(R=1.0)] * 4)
    with pytest.raises(AssemblyError, match="self-inductance"):
        assemble_complete_metric(z, conn, [MutualInductance(1, 3, 1e-3)], 1.0, basis)


def test_chord_on_tree_edge_is_rejected():
    with pytest.raises(AssemblyError, match="closes no mesh"):
        chord_matrix([MutualInductance(0, 1, 1e-3)], (1, 3), 1.0)


def test_dimension_mismatch():
    cx = CellComplex(2, [(0, 1), (1, 0)])
    _, conn = _loop(cx)
    with pytest.raises(AssemblyError):
        assemble_complete_metric(EdgeMetric.diagonal([ImpedanceExpr(R=1.0)] * 3), conn, omega=1.0)
    with pytest.raises(AssemblyError):
        EdgeMetric(2, ((0, 5, ImpedanceExpr()),))


def test_direct_impedance_is_one_way():
    m = chord_matrix([DirectImpedance(3, 1, ImpedanceExpr(R=7.0))], (1, 3), 1.0)
    assert np.array_equal(m, [[0, 0], [7, 0]])


def test_edge_metric_helpers():
    z = EdgeMetric.diagonal([ImpedanceExpr(R=1.0, L=2e-3)]).with_entries([(0, 0, ImpedanceExpr(L=1e-3))])
    assert len(z.terms_at(0, 0)) == 2
    assert z.self_inductance(0) == pytest.approx(3e-3)


def test_isometry_check_detects_difference():
    a = lambda w: np.array([[1.0 + w]])
    b = lambda w: np.array([[1.0 + w * (1 + 1e-6)]])
    ok, dev = isometry_check(a, a, [1.0, 2.0])
    assert ok and dev == 0
    ok, dev = isometry_check(a, b, [1.0, 2.0])
    assert not ok and dev > 1e-7
    with pytest.raises(AssemblyError):
        isometry_check(a, lambda w: np.eye(2), [1.0])

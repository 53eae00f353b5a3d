"""Random graph and deck generators shared by the test modules."""
import numpy as np

from kron_tan import CellComplex, EdgeMetric, ImpedanceExpr, NetworkProblem, build_spanning_tree


def random_connected_complex(rng, max_edges=50, max_vertices=None, min_extra=0):
    """Connected multigraph with random orientations and a shuffled edge order."""
    top = max_vertices or max_edges
    n = int(rng.integers(2, min(top, max_edges) + 1))
    edges = [(int(rng.integers(0, v)), v) for v in range(1, n)]
    extra = int(rng.integers(min(min_extra, max_edges - len(edges)), max_edges - len(edges) + 1))
    for _ in range(extra):
        a, b = rng.choice(n, size=2, replace=False)
        edges.append((int(a), int(b)))
    edges = [(h, t) if rng.random() < 0.5 else (t, h) for t, h in edges]
    order = rng.permutation(len(edges))
    return CellComplex(n, [edges[k] for k in order])


def random_rlc_problem(rng, max_edges=12, max_sources=3):
    """Connected RLC network with random emfs and up to ``max_sources`` current sources."""
    cx = random_connected_complex(rng, max_edges=max_edges, max_vertices=7, min_extra=1)
    terms = []
    for _ in range(cx.n_edges):
        R = float(rng.uniform(0.5, 100))
        L = float(rng.uniform(1e-4, 1e-2)) if rng.random() < 0.5 else 0.0
        S = 1.0 / float(rng.uniform(1e-7, 1e-4)) if rng.random() < 0.4 else 0.0
        terms.append(ImpedanceExpr(R=R, L=L, S=S))
    emfs = np.where(rng.random(cx.n_edges) < 0.4, rng.normal(size=cx.n_edges) + 1j * rng.normal(size=cx.n_edges), 0)
    tree = build_spanning_tree(cx)
    n_src = int(rng.integers(0, min(max_sources, len(tree.tree_edges)) + 1))
    src_edges = rng.choice(tree.tree_edges, size=n_src, replace=False) if n_src else []
    jsources = {int(s): complex(rng.normal(), rng.normal()) for s in src_edges}
    return NetworkProblem.build(cx, EdgeMetric.diagonal(terms), (), emfs, jsources)

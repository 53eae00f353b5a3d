"""``kron-tan`` command line: ``tree``, ``check`` and ``solve``."""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import KronError
from .netlist import load_netlist, write_csv, write_svg
from .nodal_oracle import solve_problem_nodal
from .solver import FrequencyGrid, run_sweep


def _topology_report(problem) -> str:
    cx, tree, conn = problem.complex, problem.tree, problem.connectivity
    nv, ne, nr = cx.n_vertices, cx.n_edges, tree.n_components
    one = lambda xs: " ".join(str(a + 1) for a in xs) or "(none)"
    lines = [
        f"vertices N={nv}  edges B={ne}  components R={nr}",
        f"meshes M = B - N + R = {ne} - {nv} + {nr} = {ne - nv + nr}",
        f"tree edges: {one(tree.tree_edges)}",
        f"closing edges: {one(tree.closing_edges)}",
        problem.mesh_labels(),
        f"current sources on: {one(conn.source_edges)}",
        "",
        "C = [[Q, L], [0, I]]",
        "rows: tree " + one(conn.tree_edges) + " | closing " + one(conn.closing_edges),
        "cols: sources " + one(conn.source_edges) + " | meshes " + one(conn.closing_edges),
    ]
    nt, ns = len(conn.tree_edges), conn.n_sources
    for r, row in enumerate(conn.matrix):
        cells = [f"{int(v):+d}" if v else " 0" for v in row.real]
        left, right = " ".join(cells[:ns]), " ".join(cells[ns:])
        lines.append(f"  {conn.edge_order[r] + 1:>4} | {left} | {right}")
        if r == nt - 1 and nt < len(conn.matrix):
            lines.append("  " + "-" * 6 + "+" + "-" * (3 * ns + 1) + "+" + "-" * (3 * problem.meshes.n_meshes + 1))
    return "\n".join(lines)


def _oracle_deviation(problem, sol) -> float:
    worst = 0.0
    for n, w in enumerate(sol.omegas):
        if n in sol.errors:
            continue
        ref = solve_problem_nodal(problem, w).edge_currents
        scale = max(np.linalg.norm(ref), np.finfo(float).tiny)
        worst = max(worst, float(np.linalg.norm(sol.edge_currents[n] - ref) / scale))
    return worst


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kron-tan", description="Mesh-space network solver over cell complexes.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, text in (("tree", "print spanning tree, meshes and C"), ("check", "validate a netlist")):
        p = sub.add_parser(name, help=text)
        p.add_argument("netlist")
    p = sub.add_parser("solve", help="frequency sweep to CSV")
    p.add_argument("--netlist", required=True)
    p.add_argument("--fmin", type=float, required=True, help="Hz")
    p.add_argument("--fmax", type=float, required=True, help="Hz")
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--log", action="store_true", help="logarithmic spacing")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--svg", help="optional magnitude plot")
    p.add_argument("--oracle", action="store_true", help="compare edge currents with nodal analysis")
    p.add_argument("--workers", type=int, default=1)
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command in ("tree", "check"):
            problem = load_netlist(args.netlist)
            if args.command == "check":
                print(f"{args.netlist}: ok")
            print(_topology_report(problem))
            return 0
        problem = load_netlist(args.netlist)
        make = FrequencyGrid.logarithmic if args.log else FrequencyGrid.linear
        grid = make(args.fmin, args.fmax, args.points)
        sol = run_sweep(problem, grid, workers=args.workers)
        write_csv(sol, args.out)
        if args.svg:
            write_svg(sol, args.svg)
        print(problem.mesh_labels())
        print(f"wrote {len(sol)} points to {args.out}")
        for n, msg in sorted(sol.errors.items()):
            print(f"warning: f={sol.freqs_hz[n]:.6g} Hz: {msg}", file=sys.stderr)
        if args.oracle:
            print(f"oracle max relative deviation: {_oracle_deviation(problem, sol):.3e}")
        return 0
    except (KronError, OSError, ValueError) as exc:
        print(f"kron-tan: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

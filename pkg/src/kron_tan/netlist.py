"""Text netlists, CSV sweep output and SVG plots.

Grammar (one stanza per line, ``#`` starts a comment, ids are 1-based)::

    vertex <id>
    edge <id> <tail> <head> [R=<ohm>] [L=<H>] [C=<F>] [emf=<V>[@<deg>]]
    jsource <tree-edge> <A>[@<deg>]
    mutual <mesh_i> <mesh_j> u=<H>
    branin <edgeL> <edgeR> Zc=<ohm> tau=<s>
    aperture <edge> we=<m> b=<m>
    farfield <mesh_t> <mesh_r> R11=<ohm> R22=<ohm> At=<m2> Ar=<m2> r=<m>
    reflection <mesh> G=<1> R=<m> sigma=<1> Rr=<ohm> [phase=+1|-1]
    probe <name> edge|mesh <id> current|voltage
    probe <name> se <reference> <probe>
    tree <edge> [<edge> ...]

A mesh is named by its closing edge: the edge outside the spanning tree
that closes it.  Meshes are therefore listed in ascending closing-edge order,
and ``kron-tan tree`` prints which edges close which meshes.  ``tree`` pins
the spanning tree; without it a breadth-first tree is used.

Emfs drive current from tail to head.  An edge ``voltage`` probe reports the
potential of the head minus the tail; a mesh ``voltage`` is the emf that
chords induce in that mesh.
"""
from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, field, fields, replace
from importlib import resources

import numpy as np

from .cell_complex import CellComplex
from .couplings import ApertureModel, BraninLine, FarFieldLink, ReflectionLink
from .errors import ComplexError, DomainError, KronError, NetlistError, SourcePlacementError
from .metric import EdgeMetric, ImpedanceExpr, MutualInductance
from .solver import NetworkProblem, Probe

__all__ = [
    "Netlist",
    "read_netlist",
    "parse_netlist",
    "format_netlist",
    "load_netlist",
    "write_csv",
    "csv_text",
    "write_svg",
    "deck_names",
    "deck_path",
    "load_deck",
]


@dataclass(frozen=True)
class EdgeSpec:
    id: int
    tail: int
    head: int
    R: float = 0.0
    L: float = 0.0
    C: float | None = None
    emf: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class Netlist:
    """Declarative content of a netlist file (1-based ids throughout)."""

    vertices: tuple[int, ...] = ()
    edges: tuple[EdgeSpec, ...] = ()
    jsources: tuple[tuple[int, float, float], ...] = ()
    mutuals: tuple[tuple[int, int, float], ...] = ()
    branins: tuple[tuple[int, int, float, float], ...] = ()
    apertures: tuple[tuple[int, float, float], ...] = ()
    farfields: tuple[tuple[int, int, float, float, float, float, float], ...] = ()
    reflections: tuple[tuple[int, float, float, float, float, int], ...] = ()
    probes: tuple[tuple[str, str, object, str], ...] = ()
    tree: tuple[int, ...] | None = None
    lines: dict = field(default_factory=dict, compare=False, repr=False)

    def build(self) -> NetworkProblem:
        return _build(self)


_KEYS = {
    "edge": ({"R", "L", "C", "emf"}, set()),
    "mutual": ({"u"}, {"u"}),
    "branin": ({"Zc", "tau"}, {"Zc", "tau"}),
    "aperture": ({"we", "b"}, {"we", "b"}),
    "farfield": ({"R11", "R22", "At", "Ar", "r"}, {"R11", "R22", "At", "Ar", "r"}),
    "reflection": ({"G", "R", "sigma", "Rr", "phase"}, {"G", "R", "sigma", "Rr"}),
}


def _number(text, lineno, what):
    try:
        return float(text)
    except ValueError:
        raise NetlistError(f"{what}: {text!r} is not a number", lineno) from None


def _int(text, lineno, what):
    try:
        value = int(text)
    except ValueError:
        raise NetlistError(f"{what}: {text!r} is not an integer id", lineno) from None
    if value < 1:
        raise NetlistError(f"{what}: ids start at 1", lineno)
    return value


def _phasor(text, lineno, what):
    mag, _, deg = text.partition("@")
    return _number(mag, lineno, what), (_number(deg, lineno, what) if deg else 0.0)


def _params(stanza, tokens, lineno):
    allowed, required = _KEYS[stanza]
    out = {}
    for tok in tokens:
        key, eq, value = tok.partition("=")
        if not eq:
            raise NetlistError(f"{stanza}: expected key=value, got {tok!r}", lineno)
        if key not in allowed:
            raise NetlistError(f"{stanza}: unknown parameter {key!r}", lineno)
        if key in out:
            raise NetlistError(f"{stanza}: parameter {key!r} given twice", lineno)
        out[key] = value
    missing = required - out.keys()
    if missing:
        raise NetlistError(f"{stanza}: missing {', '.join(sorted(missing))}", lineno)
    return out


def _positional(stanza, tokens, n, lineno):
    if len(tokens) < n:
        raise NetlistError(f"{stanza}: expected {n} positional fields", lineno)
    return tokens[:n], tokens[n:]


def read_netlist(text: str) -> Netlist:
    """Parse netlist text into a :class:`Netlist` (no topology yet)."""
    acc = {f.name: [] for f in fields(Netlist) if f.name not in ("tree", "lines")}
    lines = {}
    tree = None
    names = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        stanza, *tokens = line.split()
        key = None
        if stanza == "vertex":
            if len(tokens) != 1:
                raise NetlistError("vertex: expected exactly one id", lineno)
            acc["vertices"].append(_int(tokens[0], lineno, "vertex"))
            key = ("vertex", acc["vertices"][-1])
        elif stanza == "edge":
            (eid, t, h), rest = _positional("edge", tokens, 3, lineno)
            p = _params("edge", rest, lineno)
            spec = EdgeSpec(
                _int(eid, lineno, "edge"),
                _int(t, lineno, "edge tail"),
                _int(h, lineno, "edge head"),
                _number(p.get("R", "0"), lineno, "R"),
                _number(p.get("L", "0"), lineno, "L"),
                _number(p["C"], lineno, "C") if "C" in p else None,
                _phasor(p.get("emf", "0"), lineno, "emf"),
            )
            if spec.C is not None and spec.C <= 0:
                raise NetlistError("edge: C must be positive", lineno)
            acc["edges"].append(spec)
            key = ("edge", spec.id)
        elif stanza == "jsource":
            if len(tokens) != 2:
                raise NetlistError("jsource: expected <edge> <amps>", lineno)
            acc["jsources"].append((_int(tokens[0], lineno, "jsource"), *_phasor(tokens[1], lineno, "jsource")))
        elif stanza == "mutual":
            (i, j), rest = _positional("mutual", tokens, 2, lineno)
            p = _params("mutual", rest, lineno)
            acc["mutuals"].append((_int(i, lineno, "mutual"), _int(j, lineno, "mutual"), _number(p["u"], lineno, "u")))
        elif stanza == "branin":
            (a, b), rest = _positional("branin", tokens, 2, lineno)
            p = _params("branin", rest, lineno)
            acc["branins"].append(
                (_int(a, lineno, "branin"), _int(b, lineno, "branin"),
                 _number(p["Zc"], lineno, "Zc"), _number(p["tau"], lineno, "tau"))
            )
        elif stanza == "aperture":
            (a,), rest = _positional("aperture", tokens, 1, lineno)
            p = _params("aperture", rest, lineno)
            we, b = _number(p["we"], lineno, "we"), _number(p["b"], lineno, "b")
            if not (b > 0 and 0 < we / b < 1):
                raise NetlistError(f"aperture: ratio we/b must lie in (0, 1)", lineno)
            acc["apertures"].append((_int(a, lineno, "aperture"), we, b))
        elif stanza == "farfield":
            (t, r), rest = _positional("farfield", tokens, 2, lineno)
            p = _params("farfield", rest, lineno)
            acc["farfields"].append(
                (_int(t, lineno, "farfield"), _int(r, lineno, "farfield"),
                 *(_number(p[k], lineno, k) for k in ("R11", "R22", "At", "Ar", "r")))
            )
        elif stanza == "reflection":
            (m,), rest = _positional("reflection", tokens, 1, lineno)
            p = _params("reflection", rest, lineno)
            phase = p.get("phase", "+1")
            if phase not in ("+1", "1", "-1"):
                raise NetlistError("reflection: phase must be +1 or -1", lineno)
            acc["reflections"].append(
                (_int(m, lineno, "reflection"),
                 *(_number(p[k], lineno, k) for k in ("G", "R", "sigma", "Rr")),
                 -1 if phase == "-1" else 1)
            )
        elif stanza == "probe":
            if len(tokens) != 4:
                raise NetlistError("probe: expected <name> edge|mesh <id> current|voltage or <name> se <ref> <probe>", lineno)
            name, kind, a, b = tokens
            if name in names:
                raise NetlistError(f"probe: duplicate name {name!r}", lineno)
            names.add(name)
            if kind in ("edge", "mesh"):
                if b not in ("current", "voltage"):
                    raise NetlistError(f"probe: quantity must be current or voltage, got {b!r}", lineno)
                acc["probes"].append((name, kind, _int(a, lineno, "probe"), b))
            elif kind == "se":
                for ref in (a, b):
                    if ref not in names:
                        raise NetlistError(f"probe: {ref!r} must be declared before the se probe", lineno)
                acc["probes"].append((name, "se", (a, b), "db"))
            else:
                raise NetlistError(f"probe: kind must be edge, mesh or se, got {kind!r}", lineno)
        elif stanza == "tree":
            if tree is not None:
                raise NetlistError("tree: declared twice", lineno)
            tree = tuple(_int(t, lineno, "tree") for t in tokens)
        else:
            raise NetlistError(f"unknown stanza {stanza!r}", lineno)
        if key is not None:
            if key in lines:
                raise NetlistError(f"duplicate {key[0]} id {key[1]}", lineno)
            lines[key] = lineno
        elif stanza == "tree":
            lines[("tree", 0)] = lineno
        else:
            lines[(stanza, len(acc[stanza + "s"]) - 1)] = lineno
    nl = Netlist(
        vertices=tuple(sorted(acc["vertices"])),
        edges=tuple(sorted(acc["edges"], key=lambda e: e.id)),
        **{k: tuple(v) for k, v in acc.items() if k not in ("vertices", "edges")},
        tree=tree,
        lines=lines,
    )
    _validate(nl)
    return nl


def _line(nl, key):
    return nl.lines.get(key)


def _validate(nl: Netlist):
    for name, ids in (("vertex", nl.vertices), ("edge", [e.id for e in nl.edges])):
        if list(ids) != list(range(1, len(ids) + 1)):
            missing = sorted(set(range(1, max(ids, default=0) + 1)) - set(ids))
            raise NetlistError(f"{name} ids must run from 1 without gaps; missing {missing}")
    nv, ne = len(nl.vertices), len(nl.edges)
    for e in nl.edges:
        for v in (e.tail, e.head):
            if v > nv:
                raise NetlistError(f"edge {e.id}: vertex {v} is not declared", _line(nl, ("edge", e.id)))
        if e.tail == e.head:
            raise NetlistError(f"edge {e.id}: self-loops are not allowed", _line(nl, ("edge", e.id)))

    def check_edge(stanza, n, a):
        if a > ne:
            raise NetlistError(f"{stanza}: edge {a} is not declared", _line(nl, (stanza, n)))

    for n, (a, *_) in enumerate(nl.jsources):
        check_edge("jsource", n, a)
    for n, (a, b, *_) in enumerate(nl.branins):
        check_edge("branin", n, a)
        check_edge("branin", n, b)
        if a == b:
            raise NetlistError("branin: the two port edges must differ", _line(nl, ("branin", n)))
    for n, (a, *_) in enumerate(nl.apertures):
        check_edge("aperture", n, a)
    for n, (_, kind, target, _) in enumerate(nl.probes):
        if kind == "edge":
            check_edge("probe", n, target)
    for a in nl.tree or ():
        if a > ne:
            raise NetlistError(f"tree: edge {a} is not declared", _line(nl, ("tree", 0)))


def _build(nl: Netlist) -> NetworkProblem:
    try:
        cx = CellComplex(len(nl.vertices), [(e.tail - 1, e.head - 1) for e in nl.edges])
    except ComplexError as exc:
        raise NetlistError(str(exc)) from None
    terms = []
    emfs = np.zeros(len(nl.edges), dtype=complex)
    for e in nl.edges:
        a = e.id - 1
        terms.append((a, a, ImpedanceExpr(R=e.R, L=e.L, S=0.0 if e.C is None else 1.0 / e.C)))
        emfs[a] = e.emf[0] * cmath.exp(1j * math.radians(e.emf[1]))
    for n, (a, we, b) in enumerate(nl.apertures):
        terms.append((a - 1, a - 1, ApertureModel(we, b).as_impedance()))
    for n, (a, b, zc, tau) in enumerate(nl.branins):
        try:
            terms.extend(BraninLine(a - 1, b - 1, zc, tau).edge_terms())
        except DomainError as exc:
            raise NetlistError(f"branin: {exc}", _line(nl, ("branin", n))) from None
    metric = EdgeMetric(len(nl.edges), tuple(terms))

    jsources = {}
    for a, mag, deg in nl.jsources:
        jsources[a - 1] = jsources.get(a - 1, 0) + mag * cmath.exp(1j * math.radians(deg))

    chords = []
    chord_lines = []
    try:
        for n, (i, j, u) in enumerate(nl.mutuals):
            chords.append(MutualInductance(i - 1, j - 1, u))
            chord_lines.append(("mutual", n))
        for n, (t, r, r11, r22, at, ar, dist) in enumerate(nl.farfields):
            chords.append(FarFieldLink(t - 1, r - 1, r11, r22, at, ar, dist))
            chord_lines.append(("farfield", n))
        for n, (m, G, R, sigma, rr, phase) in enumerate(nl.reflections):
            chords.append(ReflectionLink(m - 1, G, R, sigma, rr, phase))
            chord_lines.append(("reflection", n))
    except DomainError as exc:
        raise NetlistError(str(exc), _line(nl, chord_lines[-1] if chord_lines else None)) from None

    probes = []
    for name, kind, target, quantity in nl.probes:
        probes.append(Probe(name, kind, target if kind == "se" else target - 1, quantity))

    tree = None if nl.tree is None else [a - 1 for a in nl.tree]
    try:
        problem = NetworkProblem.build(cx, metric, chords, emfs, jsources, probes, tree, netlist=nl)
    except SourcePlacementError as exc:
        bad = next((n for n, (a, *_) in enumerate(nl.jsources) if a - 1 not in (tree or _bfs_tree_edges(cx))), 0)
        raise NetlistError(f"jsource: {exc}", _line(nl, ("jsource", bad))) from None
    except ComplexError as exc:
        raise NetlistError(f"tree: {exc}", _line(nl, ("tree", 0))) from None

    closing = set(problem.meshes.closing_edges)
    for chord, key in zip(chords, chord_lines):
        for m in chord.meshes:
            if m not in closing:
                raise NetlistError(
                    f"{key[0]}: edge {m + 1} does not close a mesh (closing edges: "
                    f"{', '.join(str(c + 1) for c in sorted(closing)) or 'none'})",
                    _line(nl, key),
                )
    for n, (_, kind, target, _) in enumerate(nl.probes):
        if kind == "mesh" and target - 1 not in closing:
            raise NetlistError(f"probe: edge {target} does not close a mesh", _line(nl, ("probe", n)))
    for n, (i, j, _) in enumerate(nl.mutuals):
        for m in (i - 1, j - 1):
            cycle = problem.meshes.meshes[problem.meshes.mesh_of(m)]
            if not any(metric.self_inductance(a) > 0 for a, _ in cycle):
                raise NetlistError(f"mutual: mesh {m + 1} has no self-inductance", _line(nl, ("mutual", n)))
    return problem


def _bfs_tree_edges(cx):
    from .topology import build_spanning_tree

    return build_spanning_tree(cx).tree_edges


def parse_netlist(text: str) -> NetworkProblem:
    """Parse and validate netlist text into a solvable problem."""
    return read_netlist(text).build()


def load_netlist(path) -> NetworkProblem:
    with open(path, encoding="utf-8") as fh:
        return parse_netlist(fh.read())


def _f(x) -> str:
    return repr(float(x) + 0.0)


def _ph(mag, deg) -> str:
    return _f(mag) if deg == 0 else f"{_f(mag)}@{_f(deg)}"


def format_netlist(nl: Netlist) -> str:
    """Canonical text for ``nl``; ``read_netlist(format_netlist(nl)) == nl``."""
    out = [f"vertex {v}" for v in nl.vertices]
    for e in nl.edges:
        parts = [f"edge {e.id} {e.tail} {e.head}"]
        if e.R:
            parts.append(f"R={_f(e.R)}")
        if e.L:
            parts.append(f"L={_f(e.L)}")
        if e.C is not None:
            parts.append(f"C={_f(e.C)}")
        if e.emf != (0.0, 0.0):
            parts.append(f"emf={_ph(*e.emf)}")
        out.append(" ".join(parts))
    if nl.tree is not None:
        out.append("tree " + " ".join(str(a) for a in nl.tree))
    out += [f"jsource {a} {_ph(m, d)}" for a, m, d in nl.jsources]
    out += [f"mutual {i} {j} u={_f(u)}" for i, j, u in nl.mutuals]
    out += [f"branin {a} {b} Zc={_f(z)} tau={_f(t)}" for a, b, z, t in nl.branins]
    out += [f"aperture {a} we={_f(w)} b={_f(b)}" for a, w, b in nl.apertures]
    out += [
        f"farfield {t} {r} R11={_f(a)} R22={_f(b)} At={_f(c)} Ar={_f(d)} r={_f(x)}"
        for t, r, a, b, c, d, x in nl.farfields
    ]
    out += [
        f"reflection {m} G={_f(g)} R={_f(R)} sigma={_f(s)} Rr={_f(rr)} phase={'+1' if ph > 0 else '-1'}"
        for m, g, R, s, rr, ph in nl.reflections
    ]
    for name, kind, target, q in nl.probes:
        if kind == "se":
            out.append(f"probe {name} se {target[0]} {target[1]}")
        else:
            out.append(f"probe {name} {kind} {target} {q}")
    return "\n".join(out) + "\n"


# -- output ------------------------------------------------------------------


def csv_text(sol) -> str:
    names = list(sol.observables)
    header = ["freq_hz"] + [f"{n}_{part}" for n in names for part in ("re", "im")]
    rows = [",".join(header)]
    for n, f in enumerate(sol.freqs_hz):
        cells = [_f(f)]
        for name in names:
            v = sol.observables[name][n]
            cells += [_f(v.real), _f(v.imag)]
        rows.append(",".join(cells))
    return "\n".join(rows) + "\n"


def write_csv(sol, path):
    """Write one row per frequency: ``freq_hz`` then re/im of each probe."""
    if len(sol) == 0:
        raise ValueError("nothing to write: empty solution")
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text(sol))
    except OSError as exc:
        raise OSError(f"cannot write CSV to {os.fspath(path)}: {exc.strerror or exc}") from exc


def write_svg(sol, path, title=None):
    """Log-frequency magnitude plot of every probe (SE probes in dB)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if len(sol) == 0:
        raise ValueError("nothing to plot: empty solution")
    fig, (ax_mag, ax_db) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    kinds = {p.name: p.kind for p in sol.problem.probes}
    for name, values in sol.observables.items():
        if kinds.get(name) == "se":
            ax_db.semilogx(sol.freqs_hz, values.real, label=name)
        else:
            ax_mag.loglog(sol.freqs_hz, np.abs(values), label=name)
    ax_mag.set_ylabel("magnitude (A or V)")
    ax_db.set_ylabel("SE (dB)")
    ax_db.set_xlabel("frequency (Hz)")
    for ax in (ax_mag, ax_db):
        ax.grid(True, which="both", alpha=0.3)
        if ax.get_legend_handles_labels()[0]:
            ax.legend(loc="best", fontsize="small")
    fig.suptitle(title or sol.problem.mesh_labels(), fontsize="small")
    try:
        fig.savefig(path, format="svg")
    except OSError as exc:
        raise OSError(f"cannot write SVG to {os.fspath(path)}: {exc.strerror or exc}") from exc
    finally:
        plt.close(fig)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    head, sep, rest = text.partition("?>")
    comment = f"\n<!-- {sol.problem.mesh_labels()} -->"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(head + sep + comment + rest if sep else comment + text)


# -- shipped decks -------------------------------------------------------------


def deck_names():
    return sorted(p.name[:-4] for p in resources.files("kron_tan.decks").iterdir() if p.name.endswith(".net"))


def deck_path(name: str):
    p = resources.files("kron_tan.decks") / f"{name}.net"
    if not p.is_file():
        raise FileNotFoundError(f"no shipped deck named {name!r}; available: {', '.join(deck_names())}")
    return p


def load_deck(name: str) -> NetworkProblem:
    return parse_netlist(deck_path(name).read_text(encoding="utf-8"))

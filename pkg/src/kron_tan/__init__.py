"""Frequency-domain network analysis in Kron's complete space.

A network is a cell complex of vertices and oriented edges.  A spanning tree
splits the edges into tree edges and closing edges; each closing edge defines
a mesh.  Edge impedances pulled back through the connectivity give the metric
``g = C^T z C`` that is solved for mesh currents at each frequency.
"""
from .cell_complex import (
    CellComplex,
    Chain,
    Cochain,
    boundary,
    coboundary,
    face_matrix,
    incidence_matrix,
    kcl_residual,
    mesh_voltage_sum,
    pairing,
)
from .couplings import (
    SPEED_OF_LIGHT,
    ApertureModel,
    BraninLine,
    BraninTensor,
    FarFieldLink,
    ReflectionLink,
    branin_two_port,
    cascade_coupling,
    friis_coupling_impedance,
    gupta_aperture_impedance,
    reflection_coupling,
)
from .errors import *  # noqa: F401,F403
from .metric import (
    DirectImpedance,
    EdgeMetric,
    ImpedanceExpr,
    MeshMetric,
    MutualInductance,
    assemble_complete_metric,
    chord_matrix,
    evaluate_edge_metric,
    isometry_check,
)
from .netlist import (
    Netlist,
    deck_names,
    deck_path,
    format_netlist,
    load_deck,
    load_netlist,
    parse_netlist,
    read_netlist,
    write_csv,
    write_svg,
)
from .nodal_oracle import NodalSolution, solve_nodal, solve_problem_nodal
from .solver import (
    FrequencyGrid,
    NetworkProblem,
    Probe,
    SourceVector,
    SweepSolution,
    mesh_emfs_from_edges,
    power_balance,
    run_sweep,
    shielding_effectiveness,
    solve_complete,
)
from .topology import (
    CompleteDecomposition,
    ConnectivityMatrix,
    MeshBasis,
    SpanningTree,
    build_connectivity,
    build_mesh_basis,
    build_spanning_tree,
    decompose_current,
)

__version__ = "0.1.0"

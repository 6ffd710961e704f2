"""Mass-spring model of a lattice block or muscle interior.

Element types:
  * axial springs on the 8 center-to-corner branches of every cell,
    k_a = E A / l with A = pi p^2 / 4;
  * bending springs on the cell edges (adjacent corner pairs) carrying the
    branch transverse stiffness k_b = 3 C_b E I / l^3 with I = pi p^4 / 64
    (see the module docstring of psm.sim.energy for why the penalty lives on
    distances rather than on per-branch deflection vectors);
  * one-sided "stopper" springs on every cell edge that engage when the
    local cell dimension (adjacent-corner distance) reaches 2p, representing
    branch-on-branch contact;
  * a center-to-corner-centroid tether per cell carrying the welded-joint
    S-bend stiffness of the branch star (8 * 12 E I / l^3), which blocks
    center snap-through without stiffening uniform deformation;
  * frictionless tendons along node chains with commanded length and a
    tension cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..errors import ParameterError
from ..generator.graph import FACE_MINUS, FACE_PLUS, LatticeGraph, fill_lattice
from ..generator.muscle_spec import BranchSpec, MuscleSpec, Profile
from ..lattice import Axis, LatticeParams, MaterialModel

TPU_DENSITY = 1.21e-6  # kg/mm^3


@dataclass
class TendonRoute:
    """Wire as a via-node chain with commanded length and capped tension."""

    nodes: list[int]
    k_w: float = 200.0  # N/mm, wire plus series elasticity
    f_max: float = 300.0  # N, motor-unit tension cap

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise ParameterError("tendon needs at least 2 via nodes")
        if not self.f_max > 0:
            raise ParameterError("tension cap must be positive")
        if not self.k_w > 0:
            raise ParameterError("tendon stiffness must be positive")


@dataclass
class Plate:
    """One-sided rigid plane orthogonal to an axis.

    side = +1 blocks nodes above `position` (a descending upper platen),
    side = -1 blocks nodes below it (a floor).
    """

    axis: int
    position: float
    side: int = 1
    stiffness: float = 1000.0  # N/mm penalty


@dataclass
class LoadCase:
    plates: list[Plate] = field(default_factory=list)
    point_loads: dict[int, np.ndarray] = field(default_factory=dict)
    gravity: np.ndarray | None = None  # m/s^2, force = mass_kg * gravity -> N
    tendon_commands: dict[int, float] = field(default_factory=dict)


@dataclass
class EquilibriumState:
    positions: np.ndarray
    residual: float  # max free-node force norm (N)
    energy: float  # N mm
    success: bool
    iterations: int
    plate_reactions: list[float] = field(default_factory=list)  # N along each plate normal
    tendon_tensions: list[float] = field(default_factory=list)  # N
    fixed_reaction: np.ndarray = field(default_factory=lambda: np.zeros(3))  # N


@dataclass
class LatticeModel:
    params: LatticeParams
    material: MaterialModel
    nodes: np.ndarray  # rest positions (N, 3) mm
    fixed: np.ndarray  # (N,) bool
    axial_pairs: np.ndarray  # (B, 2)
    axial_k: np.ndarray  # (B,) N/mm
    axial_rest: np.ndarray  # (B,) mm
    bend_pairs: np.ndarray  # (E, 2)
    bend_k: np.ndarray
    bend_rest: np.ndarray
    stopper_pairs: np.ndarray  # (S, 2) adjacent-corner node ids
    stopper_gap: np.ndarray  # (S,) mm, = 2p
    stopper_k: np.ndarray  # (S,) N/mm
    tether_centers: np.ndarray  # (C,) center node per cell
    tether_corners: np.ndarray  # (C, 8) its corners
    tether_k: np.ndarray  # (C,) N/mm
    node_mass: np.ndarray  # (N,) kg
    tendons: list[TendonRoute] = field(default_factory=list)
    length_probes: tuple[int, int] | None = None  # anchor pair for muscle length
    graph: LatticeGraph | None = None

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    def copy(self) -> "LatticeModel":
        import copy as _copy

        return _copy.deepcopy(self)

    def face_nodes(self, axis, side: int, tol: float = 1e-6) -> np.ndarray:
        """Node ids on the min (side=-1) or max (side=+1) face along an axis."""
        a = Axis.parse(axis)
        coord = self.nodes[:, a]
        ref = coord.max() if side > 0 else coord.min()
        return np.nonzero(np.abs(coord - ref) < tol)[0]

    def extent(self, axis) -> float:
        a = Axis.parse(axis)
        return float(self.nodes[:, a].max() - self.nodes[:, a].min())

    def rest_length(self) -> float:
        if self.length_probes is not None:
            i, j = self.length_probes
            return float(np.linalg.norm(self.nodes[i] - self.nodes[j]))
        return self.extent(Axis.X)


def branch_stiffnesses(params: LatticeParams, material: MaterialModel) -> tuple[float, float]:
    """(k_a, k_b) of one branch: axial rod and cantilever-tip transverse."""
    l = params.half_branch_length
    area = np.pi * params.p**2 / 4.0
    inertia = np.pi * params.p**4 / 64.0
    k_a = material.elastic_modulus * area / l
    k_b = 3.0 * material.bend_coefficient * material.elastic_modulus * inertia / l**3
    return float(k_a), float(k_b)


def stopper_stiffness(params: LatticeParams, material: MaterialModel, axis: int) -> float:
    """Bulk compaction stiffness of one cell beyond branch contact.

    Modeled as the contacted material column: a slab of the full transverse
    cell area and thickness 2p at the elastic modulus, E * A_trans / (2p).
    """
    dims = params.dims
    a_trans = dims[(axis + 1) % 3] * dims[(axis + 2) % 3]
    return float(material.elastic_modulus * a_trans / (2.0 * params.p))


def _block_graph(params: LatticeParams, counts: tuple[int, int, int]) -> LatticeGraph:
    nx, ny, nz = counts
    if min(counts) < 1:
        raise ParameterError("cell counts must be >= 1 per axis")
    X, Y, Z = nx * params.x, ny * params.y, nz * params.z
    branch = BranchSpec(
        np.array([[0.0, Y / 2, Z / 2], [X, Y / 2, Z / 2]]), Profile("rect", size=(Y, Z))
    )
    spec = MuscleSpec("block", params, [branch], skin_thickness=0.0)
    return fill_lattice(spec)


def assemble(
    params: LatticeParams,
    material: MaterialModel,
    cell_counts: tuple[int, int, int] | None = None,
    graph: LatticeGraph | None = None,
    density: float = TPU_DENSITY,
) -> LatticeModel:
    """Build the solver model from cell counts or a generated lattice graph."""
    if graph is None:
        if cell_counts is None:
            raise ParameterError("need cell_counts or a lattice graph")
        graph = _block_graph(params, cell_counts)

    k_a, k_b = branch_stiffnesses(params, material)
    nodes = np.array(graph.nodes, dtype=float)
    pairs = np.array(graph.branch_pairs, dtype=int)
    rest = np.linalg.norm(nodes[pairs[:, 0]] - nodes[pairs[:, 1]], axis=1)

    edge_pairs, edge_axes = graph.edges()
    edge_rest = np.linalg.norm(nodes[edge_pairs[:, 0]] - nodes[edge_pairs[:, 1]], axis=1)

    # contact stoppers live on the same edges, one per unique edge
    gaps = np.full(len(edge_pairs), 2.0 * params.p)
    kcs = np.array([stopper_stiffness(params, material, a) for a in edge_axes])

    tether_centers = np.array([cell.center for cell in graph.cells], dtype=int)
    tether_corners = np.array([cell.corners for cell in graph.cells], dtype=int)
    k_t = 8.0 * 12.0 * material.bend_coefficient * material.elastic_modulus * (
        np.pi * params.p**4 / 64.0
    ) / params.half_branch_length**3

    # branch graph connectivity (corner sharing through centers)
    n = len(nodes)
    adj = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    ncomp, _ = connected_components(adj, directed=False)
    if ncomp != 1:
        raise ParameterError(f"lattice graph is disconnected ({ncomp} components)")

    volume = float(np.pi * (params.p / 2.0) ** 2 * rest.sum())
    mass = np.full(n, density * volume / n)

    return LatticeModel(
        params=params,
        material=material,
        nodes=nodes,
        fixed=np.zeros(n, dtype=bool),
        axial_pairs=pairs,
        axial_k=np.full(len(pairs), k_a),
        axial_rest=rest,
        bend_pairs=edge_pairs,
        bend_k=np.full(len(edge_pairs), k_b),
        bend_rest=edge_rest,
        stopper_pairs=edge_pairs.copy(),
        stopper_gap=gaps,
        stopper_k=kcs,
        tether_centers=tether_centers,
        tether_corners=tether_corners,
        tether_k=np.full(len(tether_centers), k_t),
        node_mass=mass,
        graph=graph,
    )

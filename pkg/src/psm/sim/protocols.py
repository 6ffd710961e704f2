"""Measurement protocols: plate compression sweeps and tendon contraction."""

from __future__ import annotations

import numpy as np

from ..curves import CurveSeries
from ..errors import ParameterError, SolverError
from ..lattice import Axis, LatticeParams, MaterialModel
from .model import LatticeModel, LoadCase, Plate, TendonRoute, assemble, branch_stiffnesses
from .solve import DEFAULT_TOL, solve_equilibrium


def virtual_compression(
    model: LatticeModel,
    axis,
    max_strain: float = 0.9,
    steps: int = 45,
    tol: float = DEFAULT_TOL,
    plate_stiffness: float = 1000.0,
) -> CurveSeries:
    """Displacement-controlled rigid-plate compression with warm starts.

    The bottom face sticks to the lower platen (fully fixed); the upper
    platen is a one-sided penalty plane stepped downward.  Emits nominal
    strain against nominal stress (reaction over the undeformed
    cross-section).
    """
    if not 0 < max_strain < 1:
        raise ParameterError("max_strain must be in (0, 1)")
    a = Axis.parse(axis)
    work = model.copy()
    lo = float(work.nodes[:, a].min())
    hi = float(work.nodes[:, a].max())
    height = hi - lo
    others = [ax for ax in range(3) if ax != a]
    area = work.extent(others[0]) * work.extent(others[1])

    work.fixed = work.fixed | np.isclose(work.nodes[:, a], lo, atol=1e-6)
    floor = Plate(axis=int(a), position=lo, side=-1, stiffness=plate_stiffness)

    rows = [(0.0, 0.0)]
    x = work.nodes.copy()
    for k in range(1, steps + 1):
        eps = max_strain * k / steps
        plate = Plate(axis=int(a), position=hi - eps * height, side=1, stiffness=plate_stiffness)
        state = solve_equilibrium(work, LoadCase(plates=[plate, floor]), warm_start=x, tol=tol)
        if not state.success:
            raise SolverError(
                f"compression step {k}/{steps} (strain {eps:.3f}) did not converge: "
                f"residual {state.residual:.2e} N",
                state=state,
            )
        x = state.positions
        rows.append((eps, state.plate_reactions[0] / area))
    return CurveSeries(("strain", "stress_mpa"), np.array(rows))


def virtual_contraction(
    model: LatticeModel,
    steps: int = 30,
    max_command_strain: float = 0.85,
    external_load: LoadCase | None = None,
    tol: float = DEFAULT_TOL,
    keep_states: bool = False,
):
    """Step the commanded wire length down and track the achieved length.

    Emits (commanded length, achieved muscle length, tendon tension) per
    step; contraction proceeds until the command floor, the tension cap, or
    stopper saturation.  With keep_states=True the equilibrium states are
    returned alongside the curve.
    """
    if not model.tendons:
        raise ParameterError("model has no tendon routes")
    base = external_load or LoadCase()
    work = model
    x = work.nodes.copy()
    rest_len = work.rest_length()

    chain = np.asarray(work.tendons[0].nodes, dtype=int)
    path0 = float(
        np.linalg.norm(np.diff(work.nodes[chain], axis=0), axis=1).sum()
    )

    rows = []
    states = []
    for k in range(steps + 1):
        l_cmd = path0 * (1.0 - max_command_strain * k / steps)
        load = LoadCase(
            plates=base.plates,
            point_loads=base.point_loads,
            gravity=base.gravity,
            tendon_commands={ti: l_cmd for ti in range(len(work.tendons))},
        )
        state = solve_equilibrium(work, load, warm_start=x, tol=tol)
        if not state.success:
            raise SolverError(
                f"contraction step {k}/{steps} (command {l_cmd:.1f} mm) did not converge: "
                f"residual {state.residual:.2e} N",
                state=state,
            )
        x = state.positions
        if work.length_probes is not None:
            i, j = work.length_probes
            achieved = float(np.linalg.norm(x[i] - x[j]))
        else:
            achieved = float(x[:, 0].max() - x[:, 0].min())
        tension = max(state.tendon_tensions) if state.tendon_tensions else 0.0
        rows.append((l_cmd, achieved, tension))
        if keep_states:
            states.append(state)
    series = CurveSeries(
        ("commanded_mm", "achieved_mm", "tension_n"),
        np.array(rows),
        meta={"rest_length": rest_len},
    )
    return (series, states) if keep_states else series


def straight_muscle_model(
    params: LatticeParams,
    material: MaterialModel,
    cell_counts: tuple[int, int, int],
    endpoint_margin: float = 5.0,
    k_w: float = 200.0,
    f_max: float = 300.0,
    fix_start: bool = True,
) -> LatticeModel:
    """Block lattice with rigid end anchors and a central tendon.

    The anchors stand in for the dense endpoint blocks: one node at each
    outer face center, tied to the adjacent corner plane with stiff springs.
    Muscle length is measured anchor to anchor (lattice plus both margins),
    matching how a printed muscle is measured between its attachment faces.
    """
    model = assemble(params, material, cell_counts=cell_counts)
    graph = model.graph
    nx, ny, nz = cell_counts
    k_a, _ = branch_stiffnesses(params, material)
    k_tie = 10.0 * k_a

    centers = {cell.index: cell.center for cell in graph.cells}
    j_mid, k_mid = (ny - 1) // 2, (nz - 1) // 2
    chain_nodes = [centers[(i, j_mid, k_mid)] for i in range(nx)]

    lo_face = model.face_nodes(Axis.X, -1)
    hi_face = model.face_nodes(Axis.X, +1)
    y_c = float(model.nodes[:, 1].mean())
    z_c = float(model.nodes[:, 2].mean())
    x_lo = float(model.nodes[:, 0].min()) - endpoint_margin
    x_hi = float(model.nodes[:, 0].max()) + endpoint_margin

    nodes = np.vstack([model.nodes, [[x_lo, y_c, z_c], [x_hi, y_c, z_c]]])
    anchor_lo = len(nodes) - 2
    anchor_hi = len(nodes) - 1

    tie_pairs = [(anchor_lo, int(n)) for n in lo_face] + [(anchor_hi, int(n)) for n in hi_face]
    tie_pairs = np.array(tie_pairs, dtype=int)
    tie_rest = np.linalg.norm(nodes[tie_pairs[:, 0]] - nodes[tie_pairs[:, 1]], axis=1)

    model.nodes = nodes
    model.fixed = np.concatenate([model.fixed, [False, False]])
    model.node_mass = np.concatenate([model.node_mass, [model.node_mass.mean()] * 2])
    model.axial_pairs = np.vstack([model.axial_pairs, tie_pairs])
    model.axial_k = np.concatenate([model.axial_k, np.full(len(tie_pairs), k_tie)])
    model.axial_rest = np.concatenate([model.axial_rest, tie_rest])
    model.tendons = [TendonRoute([anchor_lo, *chain_nodes, anchor_hi], k_w=k_w, f_max=f_max)]
    model.length_probes = (anchor_lo, anchor_hi)
    if fix_start:
        model.fixed[anchor_lo] = True
        model.fixed[lo_face] = True
    return model

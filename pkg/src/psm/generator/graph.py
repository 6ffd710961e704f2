"""Lattice layout: occupancy grids plus the node/branch graph.

Cells are laid out in rectified (s, u, v) space per branch with one grid cell
per pattern unit, kept iff their center lies inside the envelope profile and
outside every endpoint region, then mapped to world space through the
parallel-transport frames.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import GenerationError
from ..lattice import CORNER_SIGNS, LatticeParams
from .frames import FrameField
from .muscle_spec import MuscleSpec

# corner index sets per local axis, following CORNER_SIGNS bit order
FACE_MINUS = [
    [i for i in range(8) if not (i >> a) & 1] for a in range(3)
]
FACE_PLUS = [
    [i for i in range(8) if (i >> a) & 1] for a in range(3)
]


@dataclass(frozen=True)
class LatticeCell:
    branch: int
    index: tuple[int, int, int]
    center: int  # node id
    corners: tuple[int, ...]  # 8 node ids in CORNER_SIGNS order
    rect_center: tuple[float, float, float]


@dataclass
class LatticeGraph:
    """Node/branch graph of the patterned interior, with per-branch occupancy."""

    params: LatticeParams
    nodes: np.ndarray  # (N, 3) world positions
    rect_nodes: np.ndarray  # (N, 3) branch-local rectified (s, u, v)
    node_branch: np.ndarray  # (N,) owning branch per node
    branch_pairs: np.ndarray  # (B, 2) node ids, center -> corner
    cells: list[LatticeCell]
    occupancy: list[np.ndarray]  # per branch, bool (n_s, n_u, n_v)
    grid_offsets: list[tuple[float, float, float]]  # rect origin of cell (0,0,0)
    frames: list[FrameField] = field(default_factory=list)

    @property
    def cell_counts(self) -> tuple[int, int, int]:
        """Grid dimensions of the first branch (equals floor(dim/cell) for boxes)."""
        return tuple(self.occupancy[0].shape)

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Unique adjacent-corner pairs and their local axis (0=s, 1=u, 2=v).

        These are the cell edges; the simulator hangs the branch transverse
        stiffness on them.
        """
        seen = {}
        for cell in self.cells:
            for a in range(3):
                for lo in FACE_MINUS[a]:
                    pair = (cell.corners[lo], cell.corners[lo | (1 << a)])
                    key = (min(pair), max(pair))
                    seen.setdefault(key, a)
        if not seen:
            return np.zeros((0, 2), dtype=int), np.zeros(0, dtype=int)
        pairs = np.array(sorted(seen.keys()), dtype=int)
        axes = np.array([seen[tuple(p)] for p in pairs], dtype=int)
        return pairs, axes


def _nearest_branch(point: np.ndarray, frames: list[FrameField]) -> int:
    best, best_d = 0, np.inf
    for bi, ff in enumerate(frames):
        d = ff.distance_to(point)
        if d < best_d - 1e-9:
            best, best_d = bi, d
    return best


def fill_lattice(spec: MuscleSpec) -> LatticeGraph:
    """Lay out pattern cells for every branch of the spec.

    Raises GenerationError when no cell fits inside the envelope.
    """
    params = spec.params
    cx, cy, cz = params.x, params.y, params.z
    frames = [b.frames(max_step=min(params.dims) / 2.0) for b in spec.branches]

    node_ids: dict[tuple, int] = {}
    nodes: list[np.ndarray] = []
    rect_nodes: list[tuple[float, float, float]] = []
    node_branch: list[int] = []
    pairs: list[tuple[int, int]] = []
    cells: list[LatticeCell] = []
    occupancy: list[np.ndarray] = []
    offsets: list[tuple[float, float, float]] = []

    def node_at(key, bi, rect) -> int:
        nid = node_ids.get(key)
        if nid is None:
            nid = len(nodes)
            node_ids[key] = nid
            nodes.append(frames[bi].map_point(np.asarray(rect, dtype=float)))
            rect_nodes.append(tuple(rect))
            node_branch.append(bi)
        return nid

    multi = len(spec.branches) > 1
    for bi, branch in enumerate(spec.branches):
        ff = frames[bi]
        u_min, u_max, v_min, v_max = branch.profile.bounds
        L, U, V = ff.length, u_max - u_min, v_max - v_min
        n_s = int(np.floor(L / cx + 1e-9))
        n_u = int(np.floor(U / cy + 1e-9))
        n_v = int(np.floor(V / cz + 1e-9))
        occ = np.zeros((max(n_s, 0), max(n_u, 0), max(n_v, 0)), dtype=bool)
        s_off = (L - n_s * cx) / 2.0
        u_off = u_min + (U - n_u * cy) / 2.0
        v_off = v_min + (V - n_v * cz) / 2.0
        occupancy.append(occ)
        offsets.append((s_off, u_off, v_off))
        if occ.size == 0:
            continue

        branch_eps = [ep for ep in spec.endpoints if ep.branch == bi]
        for i in range(n_s):
            for j in range(n_u):
                for k in range(n_v):
                    rc = (
                        s_off + (i + 0.5) * cx,
                        u_off + (j + 0.5) * cy,
                        v_off + (k + 0.5) * cz,
                    )
                    if not branch.profile.contains(rc[1], rc[2]):
                        continue
                    if any(ep.contains_s(rc[0]) for ep in branch_eps):
                        continue
                    if multi:
                        world_c = ff.map_point(np.asarray(rc))
                        if _nearest_branch(world_c, frames) != bi:
                            continue
                    occ[i, j, k] = True
                    center_id = node_at(("m", bi, i, j, k), bi, rc)
                    corner_ids = []
                    for ci in range(8):
                        di = (i + ((ci >> 0) & 1), j + ((ci >> 1) & 1), k + ((ci >> 2) & 1))
                        rect = (
                            s_off + di[0] * cx,
                            u_off + di[1] * cy,
                            v_off + di[2] * cz,
                        )
                        nid = node_at(("c", bi, *di), bi, rect)
                        corner_ids.append(nid)
                        pairs.append((center_id, nid))
                    cells.append(LatticeCell(bi, (i, j, k), center_id, tuple(corner_ids), rc))

    if not cells:
        raise GenerationError("envelope too small for cell size: zero cells kept")

    return LatticeGraph(
        params=params,
        nodes=np.array(nodes),
        rect_nodes=np.array(rect_nodes),
        node_branch=np.array(node_branch, dtype=int),
        branch_pairs=np.array(pairs, dtype=int),
        cells=cells,
        occupancy=occupancy,
        grid_offsets=offsets,
        frames=frames,
    )

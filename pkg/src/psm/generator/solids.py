"""Printable solids for the four muscle parts.

Everything is expressed with two stamp primitives: capsules (branches, skin
ribs, conduit sleeves, drills) and oriented boxes (endpoint blocks).  Curved
muscles get their solids by mapping rectified endpoints through the frame
field and re-meshing straight primitives between the mapped points.
"""

from __future__ import annotations

import numpy as np

from ..errors import GenerationError, SpecError
from .graph import LatticeGraph
from .muscle_spec import MuscleSpec, WireRoute
from .sdf import Capsule, OrientedBox

SLEEVE_HALF_WIDTH_FACTOR = 1.0  # sleeve half-width = factor * p
MAX_CHORD = 5.0  # mm, curved rib/sleeve subdivision


def lattice_solids(graph: LatticeGraph) -> list[Capsule]:
    """One capsule per center-to-corner branch, diameter p."""
    r = graph.params.p / 2.0
    a = graph.nodes[graph.branch_pairs[:, 0]]
    b = graph.nodes[graph.branch_pairs[:, 1]]
    return [Capsule(a[i], b[i], r) for i in range(len(graph.branch_pairs))]


def _map_polyline(ff, rect_a, rect_b, max_chord=MAX_CHORD):
    """World chords approximating the rectified segment a->b."""
    rect_a = np.asarray(rect_a, dtype=float)
    rect_b = np.asarray(rect_b, dtype=float)
    span_s = abs(rect_b[0] - rect_a[0])
    n = max(1, int(np.ceil(span_s / max_chord)))
    ts = np.linspace(0.0, 1.0, n + 1)
    return np.array([ff.map_point(rect_a + (rect_b - rect_a) * t) for t in ts])


def skin_solids(spec: MuscleSpec, graph: LatticeGraph) -> list[Capsule]:
    """Perforated outer surface as a capsule rib grid.

    Ribs run along the cell-boundary lines of the top/bottom-most occupied
    cell of each (s, v) column, one opening per cell footprint, so the skin
    carries the lattice period and stays attached to the corner nodes.
    """
    if spec.skin_thickness == 0.0:
        return []
    if spec.skin_thickness < spec.min_feature:
        raise SpecError("skin_thickness below min_feature")
    r = spec.skin_thickness / 2.0
    cx, cy, cz = spec.params.x, spec.params.y, spec.params.z
    out: list[Capsule] = []
    for bi, occ in enumerate(graph.occupancy):
        if occ.size == 0:
            continue
        ff = graph.frames[bi]
        s_off, u_off, v_off = graph.grid_offsets[bi]
        n_s, n_u, n_v = occ.shape
        seen: set[tuple] = set()

        def rib(rect_a, rect_b):
            key = (tuple(np.round(rect_a, 6)), tuple(np.round(rect_b, 6)))
            if key in seen:
                return
            seen.add(key)
            pts = _map_polyline(ff, rect_a, rect_b)
            for p0, p1 in zip(pts[:-1], pts[1:]):
                out.append(Capsule(p0, p1, r))

        for i in range(n_s):
            for k in range(n_v):
                col = np.nonzero(occ[i, :, k])[0]
                if len(col) == 0:
                    continue
                s0, s1 = s_off + i * cx, s_off + (i + 1) * cx
                v0, v1 = v_off + k * cz, v_off + (k + 1) * cz
                planes = (
                    u_off + (col.max() + 1) * cy - r,  # top, inset inward
                    u_off + col.min() * cy + r,  # bottom
                )
                for u in planes:
                    rib((s0, u, v0), (s1, u, v0))
                    rib((s0, u, v1), (s1, u, v1))
                    rib((s0, u, v0), (s0, u, v1))
                    rib((s1, u, v0), (s1, u, v1))
    return out


def _route_rect_s(point: np.ndarray, graph: LatticeGraph) -> tuple[int, float]:
    """Owning branch and rectified arclength of a route sample."""
    best_bi, best_d = 0, np.inf
    for bi, ff in enumerate(graph.frames):
        d = ff.distance_to(point)
        if d < best_d:
            best_bi, best_d = bi, d
    return best_bi, graph.frames[best_bi].rect_s_of(point)


def conduit_solids(
    spec: MuscleSpec, graph: LatticeGraph
) -> tuple[list[Capsule], list[Capsule]]:
    """Sleeve solids plus lumen drills for every wire route.

    Sleeves sit only where the route crosses a cell mid plane, where the
    branches converge on the center node, so every sleeve is bonded to the
    lattice; the wide windows in between keep the conduit from stiffening the
    contraction direction.  The lumen drill runs end to end and is extended
    past both route ends so the wire can exit through the endpoint blocks.
    """
    sleeves: list[Capsule] = []
    drills: list[Capsule] = []
    cx = spec.params.x
    half_w = SLEEVE_HALF_WIDTH_FACTOR * spec.params.p
    for wire in spec.wires:
        pts, arc = _densify(wire.via_points, step=1.0)
        # rectified s per sample for the mid-plane crossing test
        rect_s = np.empty(len(pts))
        for i, p in enumerate(pts):
            bi, s = _route_rect_s(p, graph)
            s_off = graph.grid_offsets[bi][0]
            rect_s[i] = s - s_off
        crossings = []
        idx = np.floor((rect_s - 0.5 * cx) / cx + 1e-9)
        for i in range(1, len(pts)):
            if idx[i] != idx[i - 1]:
                crossings.append(0.5 * (arc[i] + arc[i - 1]))
        for t_c in crossings:
            seg = _slice_polyline(pts, arc, t_c - half_w, t_c + half_w)
            for p0, p1 in zip(seg[:-1], seg[1:]):
                sleeves.append(Capsule(p0, p1, wire.conduit_outer_r))
        drills.extend(_lumen_drill(wire, pts, extension=4.0 * cx))
    return sleeves, drills


def _densify(points: np.ndarray, step: float) -> tuple[np.ndarray, np.ndarray]:
    out = [points[0]]
    for a, b in zip(points[:-1], points[1:]):
        n = max(1, int(np.ceil(np.linalg.norm(b - a) / step)))
        for k in range(1, n + 1):
            out.append(a + (b - a) * (k / n))
    pts = np.array(out)
    arc = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(pts, axis=0), axis=1))])
    return pts, arc


def _slice_polyline(pts: np.ndarray, arc: np.ndarray, t0: float, t1: float) -> np.ndarray:
    t0 = max(t0, 0.0)
    t1 = min(t1, float(arc[-1]))
    if t1 <= t0:
        return pts[:1]
    mask = (arc >= t0) & (arc <= t1)
    inner = pts[mask]
    start = _point_at(pts, arc, t0)
    end = _point_at(pts, arc, t1)
    return np.vstack([[start], inner, [end]])


def _point_at(pts: np.ndarray, arc: np.ndarray, t: float) -> np.ndarray:
    i = int(np.clip(np.searchsorted(arc, t) - 1, 0, len(arc) - 2))
    span = arc[i + 1] - arc[i]
    f = 0.0 if span == 0 else (t - arc[i]) / span
    return pts[i] + (pts[i + 1] - pts[i]) * f


def _lumen_drill(wire: WireRoute, pts: np.ndarray, extension: float) -> list[Capsule]:
    d0 = pts[0] - pts[1]
    d0 = d0 / np.linalg.norm(d0)
    d1 = pts[-1] - pts[-2]
    d1 = d1 / np.linalg.norm(d1)
    chain = np.vstack([[pts[0] + d0 * extension], pts, [pts[-1] + d1 * extension]])
    return [
        Capsule(a, b, wire.conduit_inner_r)
        for a, b in zip(chain[:-1], chain[1:])
        if np.linalg.norm(b - a) > 1e-9
    ]


def endpoint_solids(
    spec: MuscleSpec, graph: LatticeGraph
) -> tuple[list[OrientedBox], list[Capsule]]:
    """Dense attachment blocks and their anchor-hole drills.

    Blocks fill the endpoint span over the full cross-section and always
    reach p/2 past the nearest kept corner plane, so block and lattice fuse
    even when the region swallowed whole cell columns.
    """
    blocks: list[OrientedBox] = []
    holes: list[Capsule] = []
    grow = spec.params.p / 2.0
    cx = spec.params.x
    for ep in spec.endpoints:
        ff = graph.frames[ep.branch]
        profile = spec.branches[ep.branch].profile
        u_min, u_max, v_min, v_max = profile.bounds
        s0, s1 = ep.s0, ep.s1
        occ = graph.occupancy[ep.branch]
        kept = np.nonzero(occ.any(axis=(1, 2)))[0]
        s_off = graph.grid_offsets[ep.branch][0]
        if s0 <= 1e-6:
            if len(kept):
                s1 = max(s1, s_off + kept.min() * cx)
            s1 += grow
        if ep.s1 >= ff.length - 1e-6:
            if len(kept):
                s0 = min(s0, s_off + (kept.max() + 1) * cx)
            s0 -= grow
        s_mid = 0.5 * (s0 + s1)
        origin, rot = ff.frame_at(s_mid)
        u_c, v_c = 0.5 * (u_min + u_max), 0.5 * (v_min + v_max)
        center = origin + rot[:, 1] * u_c + rot[:, 2] * v_c
        half = np.array([(s1 - s0) / 2.0, (u_max - u_min) / 2.0, (v_max - v_min) / 2.0])
        blocks.append(OrientedBox(center, rot, half))
        # anchor hole through the block along the local u or v axis, shifted
        # along the other cross axis to clear a central wire lumen
        axis = rot[:, 1] if ep.anchor_axis == "u" else rot[:, 2]
        perp = rot[:, 2] if ep.anchor_axis == "u" else rot[:, 1]
        reach = half[1] if ep.anchor_axis == "u" else half[2]
        hole_c = center + perp * ep.anchor_offset
        holes.append(
            Capsule(hole_c - axis * (reach + 2.0), hole_c + axis * (reach + 2.0), ep.anchor_r)
        )
    return blocks, holes

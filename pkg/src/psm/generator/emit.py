"""End-to-end mesh emission: parts -> boolean union -> checks -> artifact."""

from __future__ import annotations

import numpy as np

from ..errors import GenerationError
from .graph import LatticeGraph, fill_lattice
from .mesh import PatternedMesh, TriangleMesh
from .muscle_spec import MuscleSpec
from .sdf import SdfGrid
from .solids import conduit_solids, endpoint_solids, lattice_solids, skin_solids

DEFAULT_RESOLUTION = 0.4  # mm voxel for the union field


def mesh_from_solids(
    solids, subtractors=(), resolution: float = DEFAULT_RESOLUTION, margin: float = 2.0
) -> tuple[TriangleMesh, SdfGrid]:
    """Union the solids, carve the subtractors, extract the surface."""
    if not solids:
        raise GenerationError("nothing to mesh")
    grid = SdfGrid.around(solids, resolution, margin=margin)
    for s in solids:
        grid.add(s)
    for s in subtractors:
        grid.subtract(s)
    verts, faces = grid.extract()
    return TriangleMesh(verts, faces).ensure_outward(), grid


def _walk_clearance(grid: SdfGrid, pts: np.ndarray) -> float:
    """Smallest distance-to-material along a point chain."""
    return float(grid.sample(pts).min())


def emit_mesh(
    spec: MuscleSpec,
    resolution: float = DEFAULT_RESOLUTION,
    graph: LatticeGraph | None = None,
) -> tuple[PatternedMesh, dict]:
    """Generate the printable mesh and its manifest for a validated spec.

    Raises GenerationError when a lumen ends up blocked or an anchor hole
    closed; the manifest echoes parameters, per-part solid counts, and the
    measured lumen clearances.
    """
    spec.validate()
    if graph is None:
        graph = fill_lattice(spec)

    lattice = lattice_solids(graph)
    skin = skin_solids(spec, graph)
    sleeves, drills = conduit_solids(spec, graph)
    blocks, anchor_holes = endpoint_solids(spec, graph)

    solids = lattice + skin + sleeves + blocks
    mesh, grid = mesh_from_solids(solids, drills + anchor_holes, resolution)

    # lumen continuity: ray walk along each route, clearance within a voxel of
    # the drilled radius
    lumens = []
    for wi, wire in enumerate(spec.wires):
        pts = _densify_route(wire.via_points, step=resolution)
        clearance = _walk_clearance(grid, pts)
        # within a voxel and a half of the drilled radius, but a lumen that
        # lost more than half its clearance to voxelization is unprintable
        needed = max(wire.conduit_inner_r - 1.5 * resolution, 0.5 * wire.conduit_inner_r)
        if clearance < needed:
            raise GenerationError(
                f"lumen {wi} blocked: clearance {clearance:.3f} mm < {needed:.3f} mm"
            )
        lumens.append({"wire": wi, "length": wire.length, "min_clearance": round(clearance, 4)})

    for ei, hole in enumerate(anchor_holes):
        ts = np.linspace(0.15, 0.85, 15)[:, None]
        pts = hole.a + (hole.b - hole.a) * ts
        clearance = _walk_clearance(grid, pts)
        if clearance < hole.r - 1.5 * resolution:
            raise GenerationError(f"anchor hole {ei} closed: clearance {clearance:.3f} mm")

    provenance = {
        "lattice": len(lattice),
        "skin": len(skin),
        "conduits": len(sleeves),
        "endpoints": len(blocks),
    }
    patterned = PatternedMesh(mesh, graph.cell_counts, provenance)
    manifest = {
        "name": spec.name,
        "params": {"x": spec.params.x, "y": spec.params.y, "z": spec.params.z, "p": spec.params.p},
        "cell_counts": list(graph.cell_counts),
        "cells_kept": len(graph.cells),
        "provenance": provenance,
        "lumens": lumens,
        "resolution": resolution,
        "triangles": mesh.n_faces,
        "volume_mm3": round(mesh.volume(), 3),
        "skin_thickness": spec.skin_thickness,
        "min_feature": spec.min_feature,
    }
    return patterned, manifest


def _densify_route(points: np.ndarray, step: float) -> np.ndarray:
    out = [points[0]]
    for a, b in zip(points[:-1], points[1:]):
        n = max(1, int(np.ceil(np.linalg.norm(b - a) / step)))
        for k in range(1, n + 1):
            out.append(a + (b - a) * (k / n))
    return np.array(out)

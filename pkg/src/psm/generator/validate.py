"""Printability report: watertightness, orientation, components, wall thickness."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mesh import TriangleMesh


@dataclass
class MeshReport:
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks[name] = bool(ok)
        self.details[name] = detail

    def summary(self) -> str:
        lines = []
        for name, ok in self.checks.items():
            mark = "PASS" if ok else "FAIL"
            detail = self.details.get(name, "")
            lines.append(f"{mark}  {name}" + (f": {detail}" if detail else ""))
        return "\n".join(lines)


def _ray_hits(origins, dirs, tris, t_max=np.inf):
    """Smallest positive hit distance per ray against all triangles.

    Plain Moeller-Trumbore, one ray at a time against the full soup; callers
    keep the ray count small.
    """
    v0, v1, v2 = tris[:, 0], tris[:, 1], tris[:, 2]
    e1 = v1 - v0
    e2 = v2 - v0
    out = np.full(len(origins), np.inf)
    for ri in range(len(origins)):
        o, d = origins[ri], dirs[ri]
        pvec = np.cross(d, e2)
        det = np.einsum("ij,ij->i", e1, pvec)
        ok = np.abs(det) > 1e-12
        inv = np.where(ok, 1.0 / np.where(ok, det, 1.0), 0.0)
        tvec = o - v0
        u = np.einsum("ij,ij->i", tvec, pvec) * inv
        qvec = np.cross(tvec, e1)
        v = np.einsum("ij,j->i", qvec, d) * inv
        t = np.einsum("ij,ij->i", e2, qvec) * inv
        hit = ok & (u >= -1e-9) & (v >= -1e-9) & (u + v <= 1 + 1e-9) & (t > 1e-9) & (t < t_max)
        if np.any(hit):
            out[ri] = float(t[hit].min())
    return out


def min_thickness_estimate(mesh: TriangleMesh, n_samples: int = 200, seed: int = 0) -> float:
    """Inward ray-cast thickness over area-weighted sampled faces.

    Approximates the largest inscribed sphere locally: the distance from a
    surface point straight through the wall to the opposite surface.
    """
    tris = mesh.triangle_points()
    if len(tris) == 0:
        return 0.0
    areas = np.linalg.norm(np.cross(tris[:, 1] - tris[:, 0], tris[:, 2] - tris[:, 0]), axis=1)
    total = areas.sum()
    if total <= 0:
        return 0.0
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(tris), size=min(n_samples, len(tris)), replace=False, p=areas / total)
    normals = mesh.face_normals()[picks]
    centroids = tris[picks].mean(axis=1)
    origins = centroids - normals * 1e-6
    hits = _ray_hits(origins, -normals, tris)
    hits = hits[np.isfinite(hits)]
    return float(hits.min()) if len(hits) else 0.0


def validate_mesh(
    mesh: TriangleMesh,
    min_feature: float = 0.8,
    thickness_samples: int = 200,
    seed: int = 0,
) -> MeshReport:
    """Run every printability check; failures land in the report, not as errors."""
    report = MeshReport()
    report.record(
        "watertight",
        mesh.is_watertight(),
        f"{mesh.n_faces} faces",
    )
    report.record("oriented", mesh.is_orientation_consistent())
    ncomp = mesh.component_count()
    report.record("single_component", ncomp == 1, f"{ncomp} component(s)")
    vol = mesh.volume()
    report.record("positive_volume", vol > 0, f"volume {vol:.1f} mm^3")
    thick = min_thickness_estimate(mesh, n_samples=thickness_samples, seed=seed)
    report.record(
        "min_feature",
        thick >= min_feature * 0.95,
        f"thinnest sampled wall {thick:.3f} mm vs limit {min_feature} mm",
    )
    return report

"""Signed-distance stamping grid with marching-cubes surface extraction.

Solids are stamped one by one into a shared voxel grid (union = pointwise
min), subtractors afterwards (difference = max against the negated hole
distance).  Each stamp only touches the voxels inside the primitive's padded
bounding box, so grids with millions of voxels stay cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from skimage import measure

from ..errors import GenerationError

FAR = 1.0e3  # "very outside" initial distance (mm)


@dataclass(frozen=True)
class Capsule:
    a: np.ndarray
    b: np.ndarray
    r: float

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.minimum(self.a, self.b) - self.r
        hi = np.maximum(self.a, self.b) + self.r
        return lo, hi

    def distance(self, pts: np.ndarray) -> np.ndarray:
        ba = self.b - self.a
        denom = float(ba @ ba)
        pa = pts - self.a
        if denom < 1e-18:
            return np.linalg.norm(pa, axis=-1) - self.r
        h = np.clip((pa @ ba) / denom, 0.0, 1.0)
        return np.linalg.norm(pa - h[..., None] * ba, axis=-1) - self.r


@dataclass(frozen=True)
class OrientedBox:
    center: np.ndarray
    axes: np.ndarray  # (3, 3), columns are the local axes
    half: np.ndarray  # (3,) half extents

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        reach = np.abs(self.axes) @ self.half
        return self.center - reach, self.center + reach

    def distance(self, pts: np.ndarray) -> np.ndarray:
        local = (pts - self.center) @ self.axes  # project onto columns
        q = np.abs(local) - self.half
        outside = np.linalg.norm(np.maximum(q, 0.0), axis=-1)
        inside = np.minimum(np.max(q, axis=-1), 0.0)
        return outside + inside


def solids_bounds(solids) -> tuple[np.ndarray, np.ndarray]:
    los, his = zip(*(s.bounds for s in solids))
    return np.min(los, axis=0), np.max(his, axis=0)


class SdfGrid:
    """Uniform voxel grid holding the running signed distance field."""

    def __init__(self, lo: np.ndarray, hi: np.ndarray, resolution: float):
        if resolution <= 0:
            raise GenerationError("voxel resolution must be positive")
        self.res = float(resolution)
        self.lo = np.asarray(lo, dtype=float)
        shape = np.ceil((np.asarray(hi, dtype=float) - self.lo) / self.res).astype(int) + 1
        self.shape = tuple(int(n) for n in shape)
        self.data = np.full(self.shape, FAR, dtype=np.float32)
        self._coords = [
            self.lo[a] + np.arange(self.shape[a], dtype=np.float64) * self.res for a in range(3)
        ]

    @classmethod
    def around(cls, solids, resolution: float, margin: float = 2.0) -> "SdfGrid":
        lo, hi = solids_bounds(solids)
        pad = margin + 2 * resolution
        return cls(lo - pad, hi + pad, resolution)

    def _window(self, lo: np.ndarray, hi: np.ndarray, pad: float):
        i0 = np.floor((lo - pad - self.lo) / self.res).astype(int)
        i1 = np.ceil((hi + pad - self.lo) / self.res).astype(int) + 1
        i0 = np.clip(i0, 0, np.array(self.shape))
        i1 = np.clip(i1, 0, np.array(self.shape))
        if np.any(i0 >= i1):
            return None
        sl = tuple(slice(a, b) for a, b in zip(i0, i1))
        pts = np.stack(
            np.meshgrid(
                self._coords[0][sl[0]],
                self._coords[1][sl[1]],
                self._coords[2][sl[2]],
                indexing="ij",
            ),
            axis=-1,
        )
        return sl, pts

    def add(self, solid) -> None:
        win = self._window(*solid.bounds, pad=2 * self.res)
        if win is None:
            return
        sl, pts = win
        self.data[sl] = np.minimum(self.data[sl], solid.distance(pts).astype(np.float32))

    def subtract(self, solid) -> None:
        win = self._window(*solid.bounds, pad=2 * self.res)
        if win is None:
            return
        sl, pts = win
        self.data[sl] = np.maximum(self.data[sl], -solid.distance(pts).astype(np.float32))

    def sample(self, pts: np.ndarray) -> np.ndarray:
        """Trilinear interpolation of the field at world points."""
        pts = np.asarray(pts, dtype=float).reshape(-1, 3)
        g = (pts - self.lo) / self.res
        g = np.clip(g, 0, np.array(self.shape) - 1.000001)
        i = np.floor(g).astype(int)
        f = g - i
        out = np.zeros(len(pts))
        for dx in (0, 1):
            for dy in (0, 1):
                for dz in (0, 1):
                    w = (
                        (f[:, 0] if dx else 1 - f[:, 0])
                        * (f[:, 1] if dy else 1 - f[:, 1])
                        * (f[:, 2] if dz else 1 - f[:, 2])
                    )
                    out += w * self.data[i[:, 0] + dx, i[:, 1] + dy, i[:, 2] + dz]
        return out

    def extract(self):
        """Zero level set as (vertices, faces) with outward-consistent winding."""
        if not (self.data.min() < 0 < self.data.max()):
            raise GenerationError("field has no zero crossing; nothing to mesh")
        verts, faces, _, _ = measure.marching_cubes(self.data, level=0.0)
        verts = self.lo + verts * self.res
        return verts, faces

"""Minimal-twist frames along a muscle spine.

Local x follows the spine tangent (wire/contraction direction), local y stays
aligned with the muscle surface normal, local z completes the right-handed
frame.  Frames are propagated by parallel transport so curved spines pick up
no spurious twist.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import SpecError

_GLOBAL_Y = np.array([0.0, 1.0, 0.0])
_GLOBAL_Z = np.array([0.0, 0.0, 1.0])


def _rotate_about(v: np.ndarray, axis: np.ndarray, angle: float) -> np.ndarray:
    # Rodrigues rotation; axis must be unit length
    c, s = np.cos(angle), np.sin(angle)
    return v * c + np.cross(axis, v) * s + axis * np.dot(axis, v) * (1.0 - c)


@dataclass
class FrameField:
    """Per-sample origins and orthonormal (x, y, z) axes along a spine."""

    origins: np.ndarray  # (n, 3)
    x_axes: np.ndarray  # (n, 3) tangents
    y_axes: np.ndarray  # (n, 3)
    z_axes: np.ndarray  # (n, 3)
    arclengths: np.ndarray  # (n,), 0 at the spine start

    @property
    def length(self) -> float:
        return float(self.arclengths[-1])

    def _locate(self, s: float) -> tuple[int, float]:
        s = float(np.clip(s, 0.0, self.length))
        i = int(np.searchsorted(self.arclengths, s, side="right") - 1)
        i = min(max(i, 0), len(self.arclengths) - 2)
        span = self.arclengths[i + 1] - self.arclengths[i]
        t = 0.0 if span == 0 else (s - self.arclengths[i]) / span
        return i, t

    def frame_at(self, s: float) -> tuple[np.ndarray, np.ndarray]:
        """Origin and 3x3 rotation (columns = local x, y, z) at arclength s.

        Axes are linearly interpolated between samples and re-orthonormalized,
        which is exact for straight spines and second-order for curved ones.
        """
        i, t = self._locate(s)
        o = (1 - t) * self.origins[i] + t * self.origins[i + 1]
        x = (1 - t) * self.x_axes[i] + t * self.x_axes[i + 1]
        y = (1 - t) * self.y_axes[i] + t * self.y_axes[i + 1]
        x = x / np.linalg.norm(x)
        y = y - np.dot(y, x) * x
        y = y / np.linalg.norm(y)
        z = np.cross(x, y)
        return o, np.column_stack([x, y, z])

    def map_point(self, rect: np.ndarray) -> np.ndarray:
        """World position of rectified point (s, u, v)."""
        o, rot = self.frame_at(rect[0])
        return o + rot[:, 1] * rect[1] + rot[:, 2] * rect[2]

    def map_points(self, rect: np.ndarray) -> np.ndarray:
        rect = np.asarray(rect, dtype=float)
        return np.array([self.map_point(r) for r in rect.reshape(-1, 3)]).reshape(rect.shape)

    def rect_s_of(self, point: np.ndarray) -> float:
        """Arclength of the spine point nearest to a world point (projection
        onto the polyline; the approximate inverse of the sweep)."""
        p = np.asarray(point, dtype=float)
        a = self.origins[:-1]
        seg = self.origins[1:] - a
        denom = np.einsum("ij,ij->i", seg, seg)
        denom[denom == 0] = 1.0
        t = np.clip(np.einsum("ij,ij->i", p - a, seg) / denom, 0.0, 1.0)
        closest = a + t[:, None] * seg
        d = np.linalg.norm(closest - p, axis=1)
        i = int(np.argmin(d))
        return float(self.arclengths[i] + t[i] * (self.arclengths[i + 1] - self.arclengths[i]))

    def distance_to(self, point: np.ndarray) -> float:
        """Distance from a world point to the spine polyline."""
        p = np.asarray(point, dtype=float)
        a = self.origins[:-1]
        seg = self.origins[1:] - a
        denom = np.einsum("ij,ij->i", seg, seg)
        denom[denom == 0] = 1.0
        t = np.clip(np.einsum("ij,ij->i", p - a, seg) / denom, 0.0, 1.0)
        closest = a + t[:, None] * seg
        return float(np.linalg.norm(closest - p, axis=1).min())


def _initial_normal(tangent: np.ndarray) -> np.ndarray:
    ref = _GLOBAL_Y if abs(np.dot(tangent, _GLOBAL_Y)) < 0.9 else _GLOBAL_Z
    y = ref - np.dot(ref, tangent) * tangent
    n = np.linalg.norm(y)
    if n < 1e-12:
        raise SpecError("cannot seed a frame normal for this tangent")
    return y / n


def build_frames(spine, max_step: float | None = None) -> FrameField:
    """Parallel-transport frame field over a polyline spine.

    max_step, when given, resamples each spine segment so no two consecutive
    frames are farther apart than that (keeps swept solids tight on curves).
    """
    pts = np.asarray(spine, dtype=float).reshape(-1, 3)
    if len(pts) < 2:
        raise SpecError("spine needs at least 2 points")
    seg = np.diff(pts, axis=0)
    seg_len = np.linalg.norm(seg, axis=1)
    if np.any(seg_len < 1e-9):
        raise SpecError("spine has consecutive duplicate points")

    if max_step is not None:
        dense = [pts[0]]
        for a, b, L in zip(pts[:-1], pts[1:], seg_len):
            n = max(1, int(np.ceil(L / max_step)))
            for k in range(1, n + 1):
                dense.append(a + (b - a) * (k / n))
        pts = np.array(dense)
        seg = np.diff(pts, axis=0)
        seg_len = np.linalg.norm(seg, axis=1)

    tangents = np.empty_like(pts)
    tangents[0] = seg[0] / seg_len[0]
    tangents[-1] = seg[-1] / seg_len[-1]
    if len(pts) > 2:
        mid = seg[:-1] / seg_len[:-1, None] + seg[1:] / seg_len[1:, None]
        norms = np.linalg.norm(mid, axis=1)
        if np.any(norms < 1e-9):
            raise SpecError("spine doubles back on itself (180 degree turn)")
        tangents[1:-1] = mid / norms[:, None]

    y_axes = np.empty_like(pts)
    y_axes[0] = _initial_normal(tangents[0])
    for i in range(1, len(pts)):
        t_prev, t_cur = tangents[i - 1], tangents[i]
        axis = np.cross(t_prev, t_cur)
        s = np.linalg.norm(axis)
        c = float(np.dot(t_prev, t_cur))
        if s < 1e-14:
            y = y_axes[i - 1]
        else:
            y = _rotate_about(y_axes[i - 1], axis / s, np.arctan2(s, c))
        y = y - np.dot(y, t_cur) * t_cur
        y_axes[i] = y / np.linalg.norm(y)

    z_axes = np.cross(tangents, y_axes)
    arclen = np.concatenate([[0.0], np.cumsum(seg_len)])
    return FrameField(pts, tangents, y_axes, z_axes, arclen)

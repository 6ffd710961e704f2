"""Parallel-transport frame field."""

import numpy as np
import pytest

from psm.errors import SpecError
from psm.generator.frames import build_frames


def test_straight_spine_gives_global_frames():
    ff = build_frames([[0, 0, 0], [100, 0, 0]])
    assert np.allclose(ff.x_axes, [1, 0, 0])
    assert np.allclose(ff.y_axes, [0, 1, 0])
    assert np.allclose(ff.z_axes, [0, 0, 1])
    o, rot = ff.frame_at(37.0)
    assert np.allclose(o, [37, 0, 0])
    assert np.allclose(rot, np.eye(3))


def test_planar_arc_rotates_without_twist():
    # quarter circle in the xy plane, radius 50: tangent turns +X -> +Y
    theta = np.linspace(0, np.pi / 2, 91)
    spine = np.column_stack([50 * np.sin(theta), 50 * (1 - np.cos(theta)), np.zeros_like(theta)])
    ff = build_frames(spine)
    # end tangent equals the last chord direction (half a step short of +Y)
    half = (theta[1] - theta[0]) / 2
    assert np.allclose(ff.x_axes[-1], [np.sin(half), np.cos(half), 0], atol=1e-9)
    # in-plane rotation only: the out-of-plane axis never twists
    assert np.allclose(ff.z_axes @ np.array([0, 0, 1]), 1.0, atol=1e-12)
    assert np.allclose(ff.y_axes[-1], [-np.cos(half), np.sin(half), 0], atol=1e-9)


def test_helix_twist_per_step_is_negligible():
    # per-step twist about the tangent, measured against scipy's minimal
    # rotation between consecutive tangents, must vanish
    from scipy.spatial.transform import Rotation

    t = np.linspace(0, 4 * np.pi, 81)
    spine = np.column_stack([20 * np.cos(t), 20 * np.sin(t), 5 * t])
    ff = build_frames(spine)
    worst = 0.0
    for i in range(1, len(ff.origins)):
        t0, t1 = ff.x_axes[i - 1], ff.x_axes[i]
        axis = np.cross(t0, t1)
        s = np.linalg.norm(axis)
        rot = Rotation.from_rotvec(axis / s * np.arctan2(s, float(np.dot(t0, t1))))
        y_expected = rot.apply(ff.y_axes[i - 1])
        # twist = angle between expected and actual normals about t1
        cos_tw = np.clip(np.dot(y_expected, ff.y_axes[i]), -1, 1)
        worst = max(worst, float(np.arccos(cos_tw)))
    assert worst < 1e-6


def test_duplicate_points_rejected():
    with pytest.raises(SpecError):
        build_frames([[0, 0, 0], [0, 0, 0], [10, 0, 0]])


def test_too_short_rejected():
    with pytest.raises(SpecError):
        build_frames([[0, 0, 0]])


def test_map_round_trip_straight():
    ff = build_frames([[0, 5, 5], [80, 5, 5]])
    w = ff.map_point(np.array([12.0, 3.0, -2.0]))
    assert np.allclose(w, [12, 8, 3])


def test_resampling_preserves_length():
    ff = build_frames([[0, 0, 0], [30, 0, 0], [30, 40, 0]], max_step=2.5)
    assert ff.length == pytest.approx(70.0, abs=1e-9)
    assert np.all(np.diff(ff.arclengths) <= 2.5 + 1e-9)


def test_frame_orthonormal_on_curve():
    theta = np.linspace(0, 1.2, 40)
    spine = np.column_stack([60 * np.sin(theta), np.zeros_like(theta), 60 * (1 - np.cos(theta))])
    ff = build_frames(spine)
    for i in range(0, len(ff.origins), 7):
        rot = np.column_stack([ff.x_axes[i], ff.y_axes[i], ff.z_axes[i]])
        assert np.allclose(rot @ rot.T, np.eye(3), atol=1e-9)
        assert np.linalg.det(rot) == pytest.approx(1.0, abs=1e-9)

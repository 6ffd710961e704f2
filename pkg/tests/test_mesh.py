"""TriangleMesh topology, STL round trip, SDF extraction, validator."""

import struct

import numpy as np
import pytest

from psm.errors import MeshError
from psm.generator.mesh import TriangleMesh
from psm.generator.sdf import Capsule, OrientedBox, SdfGrid
from psm.generator.validate import validate_mesh


def unit_cube() -> TriangleMesh:
    v = np.array(
        [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0], [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1]],
        dtype=float,
    )
    f = np.array(
        [
            [0, 2, 1], [0, 3, 2],  # bottom (z=0), outward -z
            [4, 5, 6], [4, 6, 7],  # top
            [0, 1, 5], [0, 5, 4],  # y=0
            [2, 3, 7], [2, 7, 6],  # y=1
            [1, 2, 6], [1, 6, 5],  # x=1
            [3, 0, 4], [3, 4, 7],  # x=0
        ]
    )
    return TriangleMesh(v, f)


class TestTopology:
    def test_cube_passes_everything(self):
        cube = unit_cube()
        assert cube.is_watertight()
        assert cube.is_orientation_consistent()
        assert cube.component_count() == 1
        assert cube.volume() == pytest.approx(1.0)
        assert cube.area() == pytest.approx(6.0)

    def test_missing_face_breaks_watertightness(self):
        cube = unit_cube()
        cube.faces = cube.faces[:-1]
        assert not cube.is_watertight()

    def test_two_cubes_two_components(self):
        a = unit_cube()
        b = unit_cube()
        b.vertices = b.vertices + 5.0
        both = TriangleMesh(
            np.vstack([a.vertices, b.vertices]),
            np.vstack([a.faces, b.faces + len(a.vertices)]),
        )
        assert both.is_watertight()
        assert both.component_count() == 2

    def test_flipped_face_breaks_orientation(self):
        cube = unit_cube()
        cube.faces[0] = cube.faces[0, ::-1]
        assert not cube.is_orientation_consistent()

    def test_canonical_order_is_winding_preserving(self):
        cube = unit_cube()
        vol = cube.volume()
        cube.canonical_order()
        assert cube.volume() == pytest.approx(vol)
        # deterministic: reordering twice is a fixed point
        f1 = cube.faces.copy()
        cube.canonical_order()
        assert np.array_equal(f1, cube.faces)


class TestStl:
    def test_round_trip(self, tmp_path):
        cube = unit_cube()
        path = tmp_path / "cube.stl"
        cube.write_stl(path)
        back = TriangleMesh.read_stl(path)
        assert back.n_faces == 12
        assert back.volume() == pytest.approx(1.0, rel=1e-6)
        assert back.is_watertight()

    def test_truncated_file_reports_offset(self, tmp_path):
        cube = unit_cube()
        path = tmp_path / "cube.stl"
        cube.write_stl(path)
        raw = path.read_bytes()
        bad = tmp_path / "bad.stl"
        bad.write_bytes(raw[: len(raw) - 25])
        with pytest.raises(MeshError, match="byte"):
            TriangleMesh.read_stl(bad)

    def test_garbage_header_rejected(self, tmp_path):
        bad = tmp_path / "junk.stl"
        bad.write_bytes(b"\x00" * 40)
        with pytest.raises(MeshError):
            TriangleMesh.read_stl(bad)

    def test_byte_identical_rewrites(self, tmp_path):
        cube = unit_cube()
        p1, p2 = tmp_path / "a.stl", tmp_path / "b.stl"
        cube.write_stl(p1)
        cube.write_stl(p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_ascii_stl_accepted(self, tmp_path):
        path = tmp_path / "tri.stl"
        path.write_text(
            "solid t\n facet normal 0 0 1\n  outer loop\n"
            "   vertex 0 0 0\n   vertex 1 0 0\n   vertex 0 1 0\n"
            "  endloop\n endfacet\nendsolid t\n"
        )
        mesh = TriangleMesh.read_stl(path)
        assert mesh.n_faces == 1

    def test_triangle_count_mismatch(self, tmp_path):
        bad = tmp_path / "count.stl"
        bad.write_bytes(b"\0" * 80 + struct.pack("<I", 7) + b"\0" * 50)
        with pytest.raises(MeshError, match="corrupt"):
            TriangleMesh.read_stl(bad)


class TestSdfExtraction:
    def test_capsule_volume_close_to_analytic(self):
        cap = Capsule(np.array([0.0, 0, 0]), np.array([10.0, 0, 0]), 2.0)
        grid = SdfGrid.around([cap], resolution=0.25)
        grid.add(cap)
        mesh = TriangleMesh(*grid.extract()).ensure_outward()
        analytic = np.pi * 2**2 * 10 + 4 / 3 * np.pi * 2**3
        assert mesh.volume() == pytest.approx(analytic, rel=0.02)
        assert mesh.is_watertight()
        assert mesh.component_count() == 1

    def test_union_of_overlapping_capsules_is_one_component(self):
        a = Capsule(np.array([0.0, 0, 0]), np.array([8.0, 0, 0]), 1.5)
        b = Capsule(np.array([4.0, -3, 0]), np.array([4.0, 6, 0]), 1.5)
        grid = SdfGrid.around([a, b], resolution=0.3)
        grid.add(a)
        grid.add(b)
        mesh = TriangleMesh(*grid.extract()).ensure_outward()
        assert mesh.is_watertight()
        assert mesh.component_count() == 1

    def test_subtract_drills_a_hole(self):
        box = OrientedBox(np.zeros(3), np.eye(3), np.array([5.0, 5.0, 2.0]))
        hole = Capsule(np.array([0.0, 0, -5]), np.array([0.0, 0, 5]), 1.5)
        grid = SdfGrid.around([box], resolution=0.25)
        grid.add(box)
        grid.subtract(hole)
        mesh = TriangleMesh(*grid.extract()).ensure_outward()
        drilled = 10 * 10 * 4 - np.pi * 1.5**2 * 4
        assert mesh.volume() == pytest.approx(drilled, rel=0.03)
        # hole axis must be air
        assert np.all(grid.sample(np.array([[0, 0, z] for z in np.linspace(-1.9, 1.9, 9)])) > 0)

    def test_oriented_box_rotation(self):
        rot = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]], dtype=float)
        box = OrientedBox(np.array([1.0, 2.0, 3.0]), rot, np.array([4.0, 1.0, 1.0]))
        grid = SdfGrid.around([box], resolution=0.2)
        grid.add(box)
        mesh = TriangleMesh(*grid.extract()).ensure_outward()
        assert mesh.volume() == pytest.approx(8 * 2 * 2, rel=0.03)


class TestValidator:
    def test_cube_report_passes(self):
        report = validate_mesh(unit_cube(), min_feature=0.8)
        assert report.passed, report.summary()

    def test_open_box_fails_watertight(self):
        cube = unit_cube()
        cube.faces = cube.faces[:-2]
        report = validate_mesh(cube, min_feature=0.8)
        assert not report.checks["watertight"]

    def test_disjoint_fails_component_count(self):
        a, b = unit_cube(), unit_cube()
        b.vertices = b.vertices + 3.0
        mesh = TriangleMesh(
            np.vstack([a.vertices, b.vertices]), np.vstack([a.faces, b.faces + 8])
        )
        report = validate_mesh(mesh, min_feature=0.8)
        assert not report.checks["single_component"]
        assert report.checks["watertight"]

    def test_thin_wall_fails_min_feature(self):
        # 0.4 mm plate is below the 0.8 mm limit
        v = unit_cube().vertices * np.array([10.0, 10.0, 0.4])
        plate = TriangleMesh(v, unit_cube().faces)
        report = validate_mesh(plate, min_feature=0.8)
        assert not report.checks["min_feature"]

    def test_thick_wall_passes_min_feature(self):
        v = unit_cube().vertices * np.array([10.0, 10.0, 2.0])
        plate = TriangleMesh(v, unit_cube().faces)
        report = validate_mesh(plate, min_feature=0.8)
        assert report.checks["min_feature"], report.summary()

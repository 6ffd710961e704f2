"""Unit-cell parameter model and two-phase stress law."""

import math

import numpy as np
import pytest

from psm.errors import ParameterError
from psm.lattice import (
    Axis,
    LatticeParams,
    MaterialModel,
    axis_response,
    bending_strain_limit,
    branch_force,
    nominal_stress,
    unit_cell,
)

A = LatticeParams(15, 10, 30, 2)
MAT = MaterialModel()


class TestParams:
    def test_positive_required(self):
        with pytest.raises(ParameterError):
            LatticeParams(0, 10, 30, 2)
        with pytest.raises(ParameterError):
            LatticeParams(15, 10, 30, -1)

    def test_bending_phase_required(self):
        # 2p >= min dim leaves no bending phase
        with pytest.raises(ParameterError):
            LatticeParams(15, 4, 30, 2)
        with pytest.raises(ParameterError):
            LatticeParams(15, 3, 30, 2)

    def test_suitability_rule(self):
        assert A.muscle_suitable
        assert not LatticeParams(10, 15, 30, 2).muscle_suitable
        assert LatticeParams(10, 10, 10, 1).muscle_suitable  # equality allowed

    def test_material_validation(self):
        with pytest.raises(ParameterError):
            MaterialModel(elastic_modulus=-1)
        with pytest.raises(ParameterError):
            MaterialModel(compression_multiplier=0.0)
        with pytest.raises(ParameterError):
            MaterialModel(compression_multiplier=1.5)


class TestStrainLimit:
    @pytest.mark.parametrize(
        "params, axis, expected",
        [
            (A, Axis.X, 1 - 4 / 15),  # 0.7333...
            (A, Axis.Y, 0.6),
            ((15, 5, 30, 2), Axis.Y, 0.2),
            ((15, 10, 30, 2.5), Axis.Y, 0.5),
        ],
    )
    def test_formula(self, params, axis, expected):
        if not isinstance(params, LatticeParams):
            params = LatticeParams(*params)
        assert bending_strain_limit(params, axis) == pytest.approx(expected, abs=1e-12)

    def test_exactness_and_range(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            d = rng.uniform(5, 40, size=3)
            p = rng.uniform(0.5, 0.49 * d.min())
            params = LatticeParams(*d, p)
            for ax in Axis:
                lim = bending_strain_limit(params, ax)
                assert lim == 1.0 - 2.0 * p / d[ax]
                assert 0.0 < lim < 1.0

    def test_region_grows_with_dimension(self):
        base = bending_strain_limit(A, Axis.X)
        assert bending_strain_limit(LatticeParams(20, 10, 30, 2), Axis.X) > base


class TestUnitCell:
    def test_half_branch_lengths(self):
        assert unit_cell(A).half_branch_length == pytest.approx(17.5, abs=1e-12)
        cube = unit_cell(LatticeParams(10, 10, 10, 1))
        assert cube.half_branch_length == pytest.approx(math.sqrt(300) / 2, abs=1e-12)
        d = unit_cell(LatticeParams(20, 10, 30, 2))
        assert d.half_branch_length == pytest.approx(math.sqrt(1400) / 2, abs=1e-9)

    def test_branches_equal_length(self):
        cell = unit_cell(A, center=(3.0, -2.0, 11.0))
        seg = cell.branch_segments
        assert seg.shape == (8, 2, 3)
        lengths = np.linalg.norm(seg[:, 1] - seg[:, 0], axis=1)
        assert np.allclose(lengths, 17.5, atol=1e-12)

    def test_corners_span_cell(self):
        cell = unit_cell(A)
        ext = cell.corners.max(axis=0) - cell.corners.min(axis=0)
        assert np.allclose(ext, [15, 10, 30])


class TestBranchForce:
    def test_zero_at_rest(self):
        for ax in Axis:
            assert branch_force(A, MAT, ax, 0.0) == 0.0

    def test_p_monotone(self):
        thick = LatticeParams(15, 10, 30, 2.5)
        for ax in Axis:
            assert branch_force(thick, MAT, ax, 0.3) > branch_force(A, MAT, ax, 0.3)

    def test_axis_ordering_follows_dims(self):
        fx = branch_force(A, MAT, Axis.X, 0.3)
        fy = branch_force(A, MAT, Axis.Y, 0.3)
        fz = branch_force(A, MAT, Axis.Z, 0.3)
        assert fz > fx > fy

    def test_monotone_in_strain(self):
        eps = np.linspace(0, bending_strain_limit(A, Axis.Y), 50)
        f = [branch_force(A, MAT, Axis.Y, e) for e in eps]
        assert all(b >= a for a, b in zip(f, f[1:]))

    def test_rejects_compression_phase(self):
        with pytest.raises(ParameterError):
            branch_force(A, MAT, Axis.Y, 0.7)


class TestNominalStress:
    def test_direct_area_arithmetic(self):
        # force 1 N over the (y, z) = (10, 30) transverse area
        f = branch_force(A, MAT, Axis.X, 0.3)
        assert nominal_stress(A, MAT, Axis.X, 0.3) == pytest.approx(f / 300.0, rel=1e-12)

    def test_ordering_at_shared_strain(self):
        sx = nominal_stress(A, MAT, Axis.X, 0.3)
        sy = nominal_stress(A, MAT, Axis.Y, 0.3)
        sz = nominal_stress(A, MAT, Axis.Z, 0.3)
        assert sz > sx > sy

    def test_ordering_matches_dims_generally(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            d = rng.uniform(8, 40, size=3)
            if len(set(np.round(d, 6))) < 3:
                continue
            params = LatticeParams(*d, 1.5)
            eps = 0.9 * min(bending_strain_limit(params, ax) for ax in Axis)
            s = [nominal_stress(params, MAT, ax, eps) for ax in Axis]
            assert np.argsort(s).tolist() == np.argsort(d).tolist()

    def test_p_grid_monotone(self):
        for ax in Axis:
            stresses = [
                nominal_stress(LatticeParams(15, 10, 30, p), MAT, ax, 0.3)
                for p in np.linspace(1.5, 2.5, 11)
            ]
            assert all(b > a for a, b in zip(stresses, stresses[1:]))

    def test_continuity_at_knee(self):
        for ax in Axis:
            lim = bending_strain_limit(A, ax)
            lo = nominal_stress(A, MAT, ax, lim - 1e-12)
            hi = nominal_stress(A, MAT, ax, lim + 1e-12)
            assert abs(hi - lo) < 1e-9

    def test_stiffening_after_knee(self):
        lim = bending_strain_limit(A, Axis.Y)  # 0.6
        h = 0.05
        pre = (
            nominal_stress(A, MAT, Axis.Y, 0.55) - nominal_stress(A, MAT, Axis.Y, 0.55 - h)
        ) / h
        post = (
            nominal_stress(A, MAT, Axis.Y, 0.65 + h) - nominal_stress(A, MAT, Axis.Y, 0.65)
        ) / h
        assert post > pre
        # post-knee slope vs pre-knee secant, default material
        secant = nominal_stress(A, MAT, Axis.Y, lim) / lim
        assert MAT.compression_multiplier * MAT.elastic_modulus / secant >= 5.0

    def test_rejects_full_compaction(self):
        with pytest.raises(ParameterError):
            nominal_stress(A, MAT, Axis.X, 1.0)


class TestAxisResponse:
    def test_knee_recorded(self):
        resp = axis_response(A, MAT, Axis.Y)
        assert resp.eps_limit == pytest.approx(0.6, abs=1e-12)
        resp_e = axis_response(LatticeParams(15, 5, 30, 2), MAT, Axis.Y)
        assert resp_e.eps_limit == pytest.approx(0.2, abs=1e-12)

    def test_monotone_stress(self):
        for ax in Axis:
            resp = axis_response(A, MAT, ax, n_samples=181)
            assert np.all(np.diff(resp.stress) >= -1e-15)

    def test_curves_sorted_by_dimension(self):
        responses = {ax: axis_response(A, MAT, ax, n_samples=61) for ax in Axis}
        shared = min(r.eps_limit for r in responses.values())
        grid = responses[Axis.X].strain
        mask = (grid > 0) & (grid < shared)
        sx, sy, sz = (responses[ax].stress[mask] for ax in Axis)
        assert np.all(sz > sx) and np.all(sx > sy)

    def test_sample_count_validated(self):
        with pytest.raises(ParameterError):
            axis_response(A, MAT, Axis.X, n_samples=1)

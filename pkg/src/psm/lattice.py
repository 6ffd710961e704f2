"""Unit-cell parameter model and the analytic two-phase anisotropic stress law.

A cell is an x*y*z box (mm) with a center node joined to its 8 corners by
branches of diameter p.  Compressing the cell along one axis first bows the
branches (soft, "bending" regime) until opposing branches touch at strain
1 - 2p/d, after which bulk material compaction takes over (stiff,
"compression" regime).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .curves import CurveSeries
from .errors import ParameterError

STRAIN_CAP = 0.9  # nominal-strain compaction limit for sampled responses


class Axis(enum.IntEnum):
    X = 0
    Y = 1
    Z = 2

    @classmethod
    def parse(cls, v) -> "Axis":
        if isinstance(v, Axis):
            return v
        if isinstance(v, int):
            return cls(v)
        name = str(v).strip().upper()
        if name in cls.__members__:
            return cls[name]
        raise ParameterError(f"unknown axis {v!r}")


@dataclass(frozen=True)
class LatticeParams:
    """Unit-cell dimensions x, y, z and branch diameter p, all in mm."""

    x: float
    y: float
    z: float
    p: float

    def __post_init__(self):
        for name in ("x", "y", "z", "p"):
            v = getattr(self, name)
            if not (v > 0.0) or not math.isfinite(v):
                raise ParameterError(f"{name} must be strictly positive, got {v}")
        if not (2.0 * self.p < min(self.x, self.y, self.z)):
            raise ParameterError(
                f"2p = {2 * self.p} must be < min(x, y, z) = {min(self.x, self.y, self.z)}; "
                "otherwise an axis has no bending phase"
            )

    @property
    def dims(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def dim(self, axis) -> float:
        return self.dims[Axis.parse(axis)]

    @property
    def muscle_suitable(self) -> bool:
        """Soft on the contact face, contractile along x, shape-retaining in z."""
        return self.y <= self.x <= self.z

    @property
    def half_branch_length(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2) / 2.0


@dataclass(frozen=True)
class MaterialModel:
    """Constitutive constants for the printed elastomer.

    elastic_modulus is in MPa; bend_coefficient scales the branch bending law;
    compression_multiplier sets the post-contact stiffening slope as a
    fraction of the elastic modulus.
    """

    elastic_modulus: float = 26.0
    bend_coefficient: float = 1.0
    compression_multiplier: float = 0.3

    def __post_init__(self):
        if not self.elastic_modulus > 0:
            raise ParameterError("elastic_modulus must be > 0")
        if not self.bend_coefficient > 0:
            raise ParameterError("bend_coefficient must be > 0")
        if not 0 < self.compression_multiplier <= 1:
            raise ParameterError("compression_multiplier must be in (0, 1]")


# corner sign patterns in a fixed order: bit 0 -> x, bit 1 -> y, bit 2 -> z
CORNER_SIGNS = np.array(
    [[2 * ((i >> a) & 1) - 1 for a in range(3)] for i in range(8)], dtype=float
)


@dataclass(frozen=True)
class UnitCellGeometry:
    """Center node plus the 8 center-to-corner branch segments of one cell."""

    params: LatticeParams
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))

    @property
    def half_branch_length(self) -> float:
        return self.params.half_branch_length

    @property
    def corner_offsets(self) -> np.ndarray:
        d = np.array(self.params.dims) / 2.0
        return CORNER_SIGNS * d

    @property
    def corners(self) -> np.ndarray:
        return self.center + self.corner_offsets

    @property
    def branch_segments(self) -> np.ndarray:
        """(8, 2, 3) array of (center, corner) endpoint pairs."""
        c = np.broadcast_to(self.center, (8, 3))
        return np.stack([c, self.corners], axis=1)


def unit_cell(params: LatticeParams, center=(0.0, 0.0, 0.0)) -> UnitCellGeometry:
    return UnitCellGeometry(params, np.asarray(center, dtype=float))


def bending_strain_limit(params: LatticeParams, axis) -> float:
    """Largest nominal strain before opposing branches touch: 1 - 2p/d."""
    d = params.dim(axis)
    return 1.0 - 2.0 * params.p / d


def branch_deflection(params: LatticeParams, axis, eps: float) -> float:
    """Branch shortening when the cell is compressed to strain eps along axis.

    The half-diagonal vector (x, y, z)/2 has its axis component scaled by
    (1 - eps); the deflection is the drop in its length.
    """
    ax = Axis.parse(axis)
    v = np.array(params.dims) / 2.0
    v[ax] *= 1.0 - eps
    return params.half_branch_length - float(np.linalg.norm(v))


def branch_force(params: LatticeParams, material: MaterialModel, axis, eps: float) -> float:
    """Repulsive force of one cell under uniaxial bending-phase compression (N)."""
    limit = bending_strain_limit(params, axis)
    if not 0.0 <= eps <= limit + 1e-12:
        raise ParameterError(
            f"eps = {eps} outside bending phase [0, {limit:.6f}] for axis {Axis.parse(axis).name}"
        )
    l = params.half_branch_length
    k = 8.0 * material.bend_coefficient * material.elastic_modulus * params.p**4 / l**3
    return k * branch_deflection(params, axis, eps)


def _transverse_area(params: LatticeParams, ax: Axis) -> float:
    dims = params.dims
    return dims[(ax + 1) % 3] * dims[(ax + 2) % 3]


def nominal_stress(params: LatticeParams, material: MaterialModel, axis, eps: float) -> float:
    """Average nominal stress (MPa) of the two-phase law at strain eps.

    Bending phase: cell force over the undeformed transverse area.
    Compression phase: continues from the phase boundary with slope
    compression_multiplier * elastic_modulus.
    """
    if not 0.0 <= eps < 1.0:
        raise ParameterError(f"eps = {eps} outside [0, 1); full compaction is not modeled")
    ax = Axis.parse(axis)
    limit = bending_strain_limit(params, ax)
    area = _transverse_area(params, ax)
    if eps <= limit:
        return branch_force(params, material, ax, eps) / area
    sigma_knee = branch_force(params, material, ax, limit) / area
    return sigma_knee + material.compression_multiplier * material.elastic_modulus * (eps - limit)


@dataclass(frozen=True)
class AxisResponse:
    """Sampled (strain, nominal stress MPa) curve for one compression axis."""

    axis: Axis
    eps_limit: float
    samples: CurveSeries

    @property
    def strain(self) -> np.ndarray:
        return self.samples.col("strain")

    @property
    def stress(self) -> np.ndarray:
        return self.samples.col("stress_mpa")


def axis_response(
    params: LatticeParams,
    material: MaterialModel,
    axis,
    n_samples: int = 91,
) -> AxisResponse:
    """Uniformly sample the two-phase law on [0, STRAIN_CAP]."""
    if n_samples < 2:
        raise ParameterError("n_samples must be >= 2")
    ax = Axis.parse(axis)
    eps = np.linspace(0.0, STRAIN_CAP, n_samples)
    sig = np.array([nominal_stress(params, material, ax, e) for e in eps])
    series = CurveSeries(("strain", "stress_mpa"), np.column_stack([eps, sig]))
    return AxisResponse(ax, bending_strain_limit(params, ax), series)

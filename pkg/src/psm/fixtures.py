"""Canonical inputs: sweep conditions A-F and the four reference muscles."""

from __future__ import annotations

import numpy as np

from .errors import SpecError
from .generator.frames import build_frames
from .generator.muscle_spec import (
    BranchSpec,
    EndpointRegion,
    MuscleSpec,
    Profile,
    WireRoute,
    box_muscle,
)
from .lattice import LatticeParams

# reference condition A, with B/C varying branch thickness and D/E/F varying
# one cell dimension each
CONDITIONS: dict[str, LatticeParams] = {
    "A": LatticeParams(15, 10, 30, 2),
    "B": LatticeParams(15, 10, 30, 1.5),
    "C": LatticeParams(15, 10, 30, 2.5),
    "D": LatticeParams(20, 10, 30, 2),
    "E": LatticeParams(15, 5, 30, 2),
    "F": LatticeParams(15, 10, 20, 2),
}

# measurement blocks: 3 x 3 x 2 pattern units
BLOCK_COUNTS = (3, 3, 2)


def condition_block(name: str, counts: tuple[int, int, int] = BLOCK_COUNTS) -> MuscleSpec:
    """Bare inner-structure block for one sweep condition (pure lattice)."""
    params = CONDITIONS[name.upper()]
    nx, ny, nz = counts
    X, Y, Z = nx * params.x, ny * params.y, nz * params.z
    branch = BranchSpec(
        np.array([[0.0, Y / 2, Z / 2], [X, Y / 2, Z / 2]]), Profile("rect", size=(Y, Z))
    )
    return MuscleSpec(
        name=f"cond{name.upper()}_block",
        params=params,
        branches=[branch],
        skin_thickness=0.0,
    )


def _center_wire(size, s0: float, s1: float, inner_r=1.0, outer_r=2.0, v_world=None) -> WireRoute:
    X, Y, Z = size
    z = Z / 2 if v_world is None else v_world
    return WireRoute(np.array([[s0, Y / 2, z], [s1, Y / 2, z]]), inner_r, outer_r)


def muscle1() -> MuscleSpec:
    """Simple single muscle: 250 x 30 x 50 box, one wire down the middle."""
    size = (250.0, 30.0, 50.0)
    wire = _center_wire(size, 2.5, 247.5)
    return box_muscle("muscle1", CONDITIONS["A"], size, wires=[wire])


def muscle2() -> MuscleSpec:
    """Wide sheet-like muscle with two independently driven wires."""
    size = (150.0, 30.0, 120.0)
    # wire rows sit on cell-center lines: v = +/-15 -> z = 45 / 75
    wires = [
        _center_wire(size, 2.5, 147.5, v_world=45.0),
        _center_wire(size, 2.5, 147.5, v_world=75.0),
    ]
    return box_muscle("muscle2", CONDITIONS["A"], size, wires=wires)


def muscle3() -> MuscleSpec:
    """Joint-covering muscle: round cross-section swept over a quarter arc."""
    params = CONDITIONS["A"]
    radius = 200.0 / np.pi  # arc length exactly 100 mm over 90 degrees
    theta = np.linspace(0.0, np.pi / 2, 61)
    spine = np.column_stack(
        [radius * np.sin(theta), np.full_like(theta, 15.0), radius * (1 - np.cos(theta))]
    )
    ngon = 20
    ang = np.linspace(0, 2 * np.pi, ngon, endpoint=False)
    profile = Profile("polygon", polygon=np.column_stack([21 * np.cos(ang), 21 * np.sin(ang)]))
    branch = BranchSpec(spine, profile)
    ff = build_frames(spine)
    L = ff.length
    endpoints = [EndpointRegion(0, 0.0, 5.0), EndpointRegion(0, L - 5.0, L)]
    # two wires on the +/- u cell-center rows, sampled along the arc
    wires = []
    for u in (-5.0, 5.0):
        s_samples = np.linspace(2.5, L - 2.5, 25)
        via = np.array([ff.map_point(np.array([s, u, 0.0])) for s in s_samples])
        wires.append(WireRoute(via))
    return MuscleSpec(
        name="muscle3",
        params=params,
        branches=[branch],
        wires=wires,
        endpoints=endpoints,
    )


def muscle4() -> MuscleSpec:
    """Branched muscle: two straight arms sharing a root, contracting separately."""
    params = CONDITIONS["A"]
    root = np.array([0.0, 15.0, 40.0])
    ang = np.deg2rad(12.0)
    length = 140.0
    dirs = [
        np.array([np.cos(ang), 0.0, np.sin(ang)]),
        np.array([np.cos(ang), 0.0, -np.sin(ang)]),
    ]
    branches = [
        BranchSpec(np.array([root, root + d * length]), Profile("rect", size=(30.0, 40.0)))
        for d in dirs
    ]
    endpoints = []
    wires = []
    for bi, d in enumerate(dirs):
        endpoints.append(EndpointRegion(bi, 0.0, 5.0, anchor_offset=7.5))
        endpoints.append(EndpointRegion(bi, length - 5.0, length, anchor_offset=7.5))
        wires.append(WireRoute(np.array([root + d * 2.5, root + d * (length - 2.5)])))
    return MuscleSpec(
        name="muscle4",
        params=params,
        branches=branches,
        wires=wires,
        endpoints=endpoints,
    )


MUSCLES = {"muscle1": muscle1, "muscle2": muscle2, "muscle3": muscle3, "muscle4": muscle4}


def fixture_spec(name: str) -> MuscleSpec:
    """Fixture by name: muscle1..muscle4 or condA..condF blocks."""
    key = name.lower()
    if key in MUSCLES:
        return MUSCLES[key]()
    if key.startswith("cond") and key[4:].upper() in CONDITIONS:
        return condition_block(key[4:])
    raise SpecError(
        f"unknown fixture {name!r}; have {sorted(MUSCLES)} and cond{{A..F}}"
    )

"""Total potential energy and its analytic gradient.

Every structural term is a function of inter-node distances only, so the
energy of a load-free model is exactly invariant under rigid translation and
rotation.  A per-branch penalty on the transverse deflection vector would
break that invariance (the deflection needs a reference direction), and every
objective collinearity measure vanishes on the lattice's soft per-cell-affine
mode; hanging the transverse stiffness k_b on the cell-edge distances resists
exactly that mode and keeps the force field conservative.

Energies are N mm, forces N, positions mm.
"""

from __future__ import annotations

import numpy as np

from .model import LatticeModel, LoadCase


def _spring_terms(x, pairs, k, rest, grad):
    if len(pairs) == 0:
        return 0.0
    d = x[pairs[:, 0]] - x[pairs[:, 1]]
    lengths = np.linalg.norm(d, axis=1)
    stretch = lengths - rest
    energy = 0.5 * float(k @ stretch**2)
    safe = np.where(lengths > 1e-12, lengths, 1.0)
    f = (k * stretch / safe)[:, None] * d
    np.add.at(grad, pairs[:, 0], f)
    np.add.at(grad, pairs[:, 1], -f)
    return energy


def _stopper_terms(model: LatticeModel, x, grad):
    """One-sided contact springs on cell edges, engaged below the 2p gap."""
    if len(model.stopper_gap) == 0:
        return 0.0
    pairs = model.stopper_pairs
    d = x[pairs[:, 0]] - x[pairs[:, 1]]
    dim = np.linalg.norm(d, axis=1)
    pen = model.stopper_gap - dim
    engaged = pen > 0
    if not np.any(engaged):
        return 0.0
    k = model.stopper_k[engaged]
    pen = pen[engaged]
    energy = 0.5 * float(k @ pen**2)
    unit = d[engaged] / np.where(dim[engaged] > 1e-12, dim[engaged], 1.0)[:, None]
    f = (-k * pen)[:, None] * unit
    np.add.at(grad, pairs[engaged, 0], f)
    np.add.at(grad, pairs[engaged, 1], -f)
    return energy


def _tether_terms(model: LatticeModel, x, grad):
    """Quadratic tie between each center node and its corner centroid."""
    if len(model.tether_centers) == 0:
        return 0.0
    centroid = x[model.tether_corners].mean(axis=1)
    dev = x[model.tether_centers] - centroid
    k = model.tether_k
    energy = 0.5 * float(k @ np.einsum("ij,ij->i", dev, dev))
    f = k[:, None] * dev
    np.add.at(grad, model.tether_centers, f)
    np.add.at(grad, model.tether_corners.ravel(), np.repeat(-f / 8.0, 8, axis=0))
    return energy


def _plate_terms(load: LoadCase, x, grad):
    energy = 0.0
    reactions = []
    for plate in load.plates:
        coord = x[:, plate.axis]
        pen = np.maximum(plate.side * (coord - plate.position), 0.0)
        energy += 0.5 * plate.stiffness * float(pen @ pen)
        grad[:, plate.axis] += plate.stiffness * pen * plate.side
        reactions.append(plate.stiffness * float(pen.sum()))
    return energy, reactions


def _tendon_terms(model: LatticeModel, load: LoadCase, x, grad):
    energy = 0.0
    tensions = []
    for ti, tendon in enumerate(model.tendons):
        chain = np.asarray(tendon.nodes, dtype=int)
        seg = x[chain[1:]] - x[chain[:-1]]
        lengths = np.linalg.norm(seg, axis=1)
        path = float(lengths.sum())
        l_cmd = load.tendon_commands.get(ti, path)
        s = path - l_cmd
        k, cap = tendon.k_w, tendon.f_max
        s_cap = cap / k
        if s <= 0:
            tension = 0.0
        elif s <= s_cap:
            tension = k * s
            energy += 0.5 * k * s * s
        else:
            tension = cap
            energy += cap * s - cap * cap / (2 * k)
        tensions.append(tension)
        if tension > 0:
            unit = seg / np.where(lengths > 1e-12, lengths, 1.0)[:, None]
            np.add.at(grad, chain[1:], tension * unit)
            np.add.at(grad, chain[:-1], -tension * unit)
    return energy, tensions


def total_energy_and_grad(model: LatticeModel, x: np.ndarray, load: LoadCase):
    """Energy (N mm), gradient (N per DOF), plate reactions, tendon tensions."""
    x = x.reshape(model.n_nodes, 3)
    grad = np.zeros_like(x)
    energy = _spring_terms(x, model.axial_pairs, model.axial_k, model.axial_rest, grad)
    energy += _spring_terms(x, model.bend_pairs, model.bend_k, model.bend_rest, grad)
    energy += _stopper_terms(model, x, grad)
    energy += _tether_terms(model, x, grad)
    e_plate, reactions = _plate_terms(load, x, grad)
    energy += e_plate
    e_tendon, tensions = _tendon_terms(model, load, x, grad)
    energy += e_tendon
    for node, force in load.point_loads.items():
        f = np.asarray(force, dtype=float)
        energy -= float(f @ x[node])
        grad[node] -= f
    if load.gravity is not None:
        weight = model.node_mass[:, None] * np.asarray(load.gravity, dtype=float)[None, :]
        energy -= float((weight * x).sum())
        grad -= weight
    return energy, grad, reactions, tensions


def total_energy(model: LatticeModel, x: np.ndarray, load: LoadCase) -> float:
    return total_energy_and_grad(model, x, load)[0]


def residual_force(model: LatticeModel, grad: np.ndarray) -> float:
    """Largest force norm (N) on any free node; forces are -gradient."""
    free = ~model.fixed
    if not np.any(free):
        return 0.0
    return float(np.linalg.norm(grad[free], axis=1).max())

"""Equilibrium by first-order energy minimization, plus the gradient checker."""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize

from .energy import residual_force, total_energy_and_grad
from .model import EquilibriumState, LatticeModel, LoadCase

DEFAULT_TOL = 1e-3  # N, max residual force per free node
DEFAULT_MAX_ITER = 50_000


def solve_equilibrium(
    model: LatticeModel,
    load: LoadCase,
    warm_start: np.ndarray | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> EquilibriumState:
    """Minimize total energy over the free nodes (L-BFGS line-search descent).

    Returns a state with success=False (best iterate and residual included)
    instead of raising when the iteration budget runs out.
    """
    x0 = model.nodes if warm_start is None else warm_start
    x0 = np.array(x0, dtype=float).reshape(model.n_nodes, 3)
    free = ~model.fixed
    free_idx = np.nonzero(free)[0]
    x_full = x0.copy()
    x_full[model.fixed] = model.nodes[model.fixed] if warm_start is None else x0[model.fixed]

    evals = 0

    def fun(flat):
        nonlocal evals
        evals += 1
        x_full[free_idx] = flat.reshape(-1, 3)
        e, g, _, _ = total_energy_and_grad(model, x_full, load)
        return e, g[free_idx].ravel()

    if len(free_idx) == 0:
        e, g, reactions, tensions = total_energy_and_grad(model, x_full, load)
        return EquilibriumState(x_full, 0.0, e, True, 0, reactions, tensions, -g[model.fixed].sum(axis=0))

    flat0 = x_full[free_idx].ravel()
    best = flat0
    nit = 0
    # component-wise bound tol/2 guarantees the per-node force norm is < tol
    for attempt in range(3):
        res = minimize(
            fun,
            best,
            jac=True,
            method="L-BFGS-B",
            options={
                "maxiter": max_iter,
                "maxfun": 2 * max_iter,
                "gtol": tol / 2.0,
                "ftol": 1e-16,
                "maxcor": 20,
            },
        )
        best = res.x
        nit += int(res.nit)
        x_full[free_idx] = best.reshape(-1, 3)
        e, g, reactions, tensions = total_energy_and_grad(model, x_full, load)
        if residual_force(model, g) <= tol:
            break

    resid = residual_force(model, g)
    return EquilibriumState(
        positions=x_full.copy(),
        residual=resid,
        energy=e,
        success=resid <= tol,
        iterations=nit,
        plate_reactions=reactions,
        tendon_tensions=tensions,
        fixed_reaction=-g[model.fixed].sum(axis=0) if np.any(model.fixed) else np.zeros(3),
    )


def gradient_check(
    model: LatticeModel,
    load: LoadCase | None = None,
    x: np.ndarray | None = None,
    h: float = 1e-4,
    n_configs: int = 20,
    perturbation: float = 0.1,
    seed: int = 0,
    max_dofs: int = 300,
) -> float:
    """Worst relative mismatch between analytic forces and central differences.

    Evaluates at n_configs randomly perturbed configurations around x (rest
    positions by default).  Relative error is the max component error over
    the max force magnitude per configuration.
    """
    load = load or LoadCase()
    base = model.nodes if x is None else np.asarray(x, dtype=float)
    rng = np.random.default_rng(seed)
    worst = 0.0
    n_dof = model.n_nodes * 3
    for _ in range(n_configs):
        xc = base + rng.uniform(-perturbation, perturbation, size=base.shape)
        _, g, _, _ = total_energy_and_grad(model, xc, load)
        g = g.ravel()
        dofs = (
            np.arange(n_dof)
            if n_dof <= max_dofs
            else rng.choice(n_dof, size=max_dofs, replace=False)
        )
        fd = np.empty(len(dofs))
        flat = xc.ravel()
        for col, dof in enumerate(dofs):
            x_plus = flat.copy()
            x_plus[dof] += h
            x_minus = flat.copy()
            x_minus[dof] -= h
            e_plus, _, _, _ = total_energy_and_grad(model, x_plus.reshape(-1, 3), load)
            e_minus, _, _, _ = total_energy_and_grad(model, x_minus.reshape(-1, 3), load)
            fd[col] = (e_plus - e_minus) / (2 * h)
        scale = max(float(np.abs(g).max()), 1e-9)
        err = float(np.abs(fd - g[dofs]).max()) / scale
        worst = max(worst, err)
    return worst

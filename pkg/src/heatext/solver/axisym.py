"""Axisymmetric (rho, z) Crank-Nicolson evolution for dim-3 fields.

Cylindrical Laplacian u_rhorho + u_rho/rho + u_zz with the parity row
4 (u_1 - u_0)/h^2 on the axis. The ball hole is a masked staircase with
Dirichlet nodes; only Dirichlet hole conditions are supported here (a
staircase Robin condition would degrade to first order). Used for
off-axis sources: kernel probes and domain-comparison checks.
"""

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from ..domain import BallHole, ExteriorDomain, ThetaBoundary
from ..errors import (
    GeometryError,
    NumericalError,
    PreconditionError,
    UnsupportedFeatureError,
)
from .config import StepperConfig
from .grids import AxisymGrid, Field
from .ledger import MassLedger


def axisym_operator(grid: AxisymGrid):
    """Sparse cylindrical Laplacian over active nodes (hole is Dirichlet).

    Returns (L, flux_rows, flux_weights): the discrete mass rate through
    hole faces is sum(flux_weights * u[flux_rows]), matching the volume
    weights used for the mass so that dM/dt = hole flux + far-edge flux
    holds exactly at the discrete level.
    """
    hr, hz = grid.h_rho, grid.h_z
    rho = grid.rho_nodes()
    active = grid.active_mask()
    hole = grid.hole_mask()
    idx = -np.ones(active.shape, dtype=np.int64)
    idx[active] = np.arange(int(active.sum()))
    w_vol = grid.volume_weights()

    I, J = np.where(active)
    rows_my = idx[I, J]
    on_axis = I == 0
    rho_I = rho[I]

    rows, cols, vals = [], [], []
    diag = np.zeros(rows_my.size)
    flux_rows, flux_w = [], []

    def add_links(applies, coef, nb_i, nb_j):
        nb_idx = idx[nb_i[applies], nb_j[applies]]
        nb_hole = hole[nb_i[applies], nb_j[applies]]
        me = rows_my[applies]
        c = coef[applies]
        nb_active = nb_idx >= 0
        rows.extend(me[nb_active])
        cols.extend(nb_idx[nb_active])
        vals.extend(c[nb_active])
        diag[applies] -= c
        if np.any(nb_hole):
            flux_rows.append(me[nb_hole])
            flux_w.append(-(w_vol[I[applies], J[applies]][nb_hole]) * c[nb_hole])

    everywhere = np.ones(I.size, dtype=bool)
    off_axis = ~on_axis
    # z neighbours
    for dj in (1, -1):
        add_links(everywhere, np.full(I.size, 1.0 / hz ** 2), I, J + dj)
    # outward rho neighbour: parity row on the axis, centred stencil off it
    c_out = np.empty(I.size)
    c_out[on_axis] = 4.0 / hr ** 2
    c_out[off_axis] = 1.0 / hr ** 2 + 1.0 / (2.0 * rho_I[off_axis] * hr)
    add_links(everywhere, c_out, I + 1, J)
    # inward rho neighbour: off-axis nodes only
    c_in = np.zeros(I.size)
    c_in[off_axis] = 1.0 / hr ** 2 - 1.0 / (2.0 * rho_I[off_axis] * hr)
    add_links(off_axis, c_in, I - 1, J)

    rows.extend(rows_my)
    cols.extend(rows_my)
    vals.extend(diag)
    n = rows_my.size
    L = sp.csr_matrix(
        (np.asarray(vals), (np.asarray(rows), np.asarray(cols))), shape=(n, n)
    )
    if flux_rows:
        return L, np.concatenate(flux_rows), np.concatenate(flux_w)
    return L, np.zeros(0, dtype=np.int64), np.zeros(0)


def evolve_axisym(domain: ExteriorDomain, theta: ThetaBoundary, u0: Field,
                  cfg: StepperConfig):
    """Evolve an axisymmetric datum around a ball hole (Dirichlet only).

    Mass is 2 pi * double integral of u rho drho dz (trapezoid); the ledger
    flux sums the discrete mass rate through hole faces.
    """
    if not theta.is_dirichlet:
        raise UnsupportedFeatureError(
            "axisymmetric evolution supports Dirichlet hole conditions only"
        )
    grid = u0.grid
    if not isinstance(grid, AxisymGrid):
        raise PreconditionError("evolve_axisym requires a Field on an AxisymGrid")
    if domain.dim != 3 or not isinstance(domain.hole, BallHole):
        raise GeometryError("evolve_axisym requires a dim-3 ball-hole domain")
    if abs(grid.hole_radius - domain.hole.radius) > 1e-12:
        raise GeometryError("grid hole radius does not match the domain")
    return _axisym_run(grid, u0, cfg)


def _axisym_run(grid: AxisymGrid, u0: Field, cfg: StepperConfig):
    """Shared stepping core; also used hole-free by the kernel probes."""
    if cfg.dt > max(grid.h_rho, grid.h_z) * (1.0 + 1e-12):
        raise PreconditionError("accuracy guard: dt exceeds grid spacing")
    values = np.array(u0.values, dtype=float)
    if values.shape != (grid.n_rho + 1, grid.n_z + 1):
        raise PreconditionError("datum shape does not match the grid")
    if not np.all(np.isfinite(values)):
        raise PreconditionError("initial datum contains non-finite values")
    values[grid.hole_mask()] = 0.0
    values[grid.edge_mask()] = 0.0

    L, flux_rows, flux_w = axisym_operator(grid)
    active = grid.active_mask()
    n = int(active.sum())
    dt = cfg.dt
    A = (sp.identity(n, format="csr") - 0.5 * dt * L).tocsc()
    B = (sp.identity(n, format="csr") + 0.5 * dt * L).tocsr()
    try:
        lu = splu(A)
    except RuntimeError as exc:
        raise NumericalError(f"sparse factorisation failed: {exc}")

    w_vec = grid.volume_weights()[active]

    def mass(u_vec):
        return float(np.sum(w_vec * u_vec))

    def flux(u_vec):
        if flux_rows.size == 0:
            return 0.0
        return float(np.sum(flux_w * u_vec[flux_rows]))

    u = values[active]
    ledger = MassLedger()
    ledger.append(0.0, mass(u), flux(u))
    snaps = []
    snap_steps = cfg.snapshot_steps()

    def to_field(u_vec, t):
        full = np.zeros_like(values)
        full[active] = u_vec
        return Field(grid, full, t).lock()

    if 0 in snap_steps:
        snaps.append(to_field(u, 0.0))
    n_steps = cfg.n_steps
    for k in range(1, n_steps + 1):
        u = lu.solve(B @ u)
        if k % cfg.check_every == 0 and not np.all(np.isfinite(u)):
            raise NumericalError("non-finite values in axisymmetric evolution", step=k)
        if k % cfg.ledger_stride == 0 or k == n_steps or k in snap_steps:
            ledger.append(k * dt, mass(u), flux(u))
        if k in snap_steps:
            snaps.append(to_field(u, k * dt))
    if not np.all(np.isfinite(u)):
        raise NumericalError("non-finite values in axisymmetric evolution", step=n_steps)
    return snaps, ledger

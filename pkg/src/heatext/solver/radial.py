"""Crank-Nicolson evolution of radial fields: u_t = u_rr + (N-1)/r u_r.

Hole boundary at r = a by ghost node: Dirichlet pins u(a) = 0; Robin and
Neumann fold u_r(a) = b u(a) into the first stencil row at second order
(b = cot(pi theta/2); the sign follows from du/dn = -du/dr at the hole).
a = 0 switches to the smooth-origin parity row used for ball domains and
whole-space probes. The truncation boundary is homogeneous Dirichlet.
"""

import numpy as np
from scipy.linalg import solve_banded

from ..domain import (
    BallHole,
    ExteriorDomain,
    ThetaBoundary,
    sphere_surface_area,
)
from ..errors import GeometryError, NumericalError, PreconditionError
from .config import StepperConfig
from .grids import Field, RadialGrid
from .ledger import MassLedger

BC_TOL = 1e-9  # relative tolerance for Dirichlet compatibility of the datum


def radial_operator(grid: RadialGrid, theta: ThetaBoundary):
    """Tridiagonal second-order discretisation of the radial Laplacian.

    Returns (lower, diag, upper) with the boundary rows folded in:
    Dirichlet / far rows are identically zero, so Crank-Nicolson leaves
    those nodes fixed at their (zero) initial values.
    """
    r = grid.nodes()
    h = grid.h
    n = r.size
    dim = grid.dim
    lo = np.zeros(n)
    di = np.zeros(n)
    up = np.zeros(n)
    i = np.arange(1, n - 1)
    lo[i] = 1.0 / h ** 2 - (dim - 1) / (2.0 * h * r[i])
    di[i] = -2.0 / h ** 2
    up[i] = 1.0 / h ** 2 + (dim - 1) / (2.0 * h * r[i])
    if grid.a == 0.0:
        # smooth origin: Laplacian of a radial function at r=0 is N u_rr,
        # with the parity ghost u_{-1} = u_1
        di[0] = -2.0 * dim / h ** 2
        up[0] = 2.0 * dim / h ** 2
    elif theta.is_dirichlet:
        pass  # zero row keeps u(a) = 0
    else:
        b = theta.robin_b
        di[0] = -2.0 * (1.0 + h * b) / h ** 2 + (dim - 1) * b / r[0]
        up[0] = 2.0 / h ** 2
    return lo, di, up


def _crank_nicolson_run(grid, theta, u0_values, cfg, omega):
    lo, di, up = radial_operator(grid, theta)
    n = u0_values.size
    dt = cfg.dt
    # A u+ = B u with A = I - dt/2 L, B = I + dt/2 L
    ab = np.zeros((3, n))
    ab[0, 1:] = -0.5 * dt * up[:-1]
    ab[1, :] = 1.0 - 0.5 * dt * di
    ab[2, :-1] = -0.5 * dt * lo[1:]
    b_lo, b_di, b_up = 0.5 * dt * lo, 1.0 + 0.5 * dt * di, 0.5 * dt * up

    r = grid.nodes()
    w = grid.volume_weights()
    a_pow = r[0] ** (grid.dim - 1)
    dirichlet_hole = grid.a > 0.0 and theta.is_dirichlet

    def mass(u):
        return float(np.sum(w * u))

    def flux(u):
        if grid.a == 0.0:
            return 0.0
        if dirichlet_hole:
            u_r = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * grid.h)
            return omega * a_pow * (-u_r)
        # Robin/Neumann: the condition itself gives du/dn = -b u(a) exactly
        return -omega * a_pow * theta.robin_b * u[0]

    u = u0_values.copy()
    ledger = MassLedger()
    ledger.append(0.0, mass(u), flux(u))
    snaps = []
    snap_steps = cfg.snapshot_steps()
    if 0 in snap_steps:
        snaps.append(Field(grid, u.copy(), 0.0).lock())
    n_steps = cfg.n_steps
    for k in range(1, n_steps + 1):
        rhs = b_di * u
        rhs[:-1] += b_up[:-1] * u[1:]
        rhs[1:] += b_lo[1:] * u[:-1]
        u = solve_banded((1, 1), ab, rhs)
        if k % cfg.check_every == 0 and not np.all(np.isfinite(u)):
            raise NumericalError("non-finite values in radial evolution", step=k)
        if k % cfg.ledger_stride == 0 or k == n_steps or k in snap_steps:
            ledger.append(k * dt, mass(u), flux(u))
        if k in snap_steps:
            snaps.append(Field(grid, u.copy(), k * dt).lock())
    if not np.all(np.isfinite(u)):
        raise NumericalError("non-finite values in radial evolution", step=n_steps)
    return snaps, ledger


def _check_datum(grid, theta, values):
    if values.shape != (grid.n_r + 1,):
        raise PreconditionError(
            f"datum shape {values.shape} does not match grid ({grid.n_r + 1},)"
        )
    if not np.all(np.isfinite(values)):
        raise PreconditionError("initial datum contains non-finite values")
    scale = max(1.0, float(np.max(np.abs(values))))
    if grid.a > 0.0 and theta.is_dirichlet and abs(values[0]) > BC_TOL * scale:
        raise PreconditionError(
            f"Dirichlet datum must vanish at the hole: u0(a) = {values[0]:.3e}"
        )


def evolve_radial(domain: ExteriorDomain, theta: ThetaBoundary, u0: Field,
                  cfg: StepperConfig):
    """Evolve a radial datum on the truncated exterior domain.

    Returns (snapshots, ledger). Snapshots are immutable Fields at the
    requested times; the ledger holds (t, mass, hole flux) rows at every
    ledger_stride-th step.
    """
    grid = u0.grid
    if not isinstance(grid, RadialGrid):
        raise PreconditionError("evolve_radial requires a Field on a RadialGrid")
    if not isinstance(domain.hole, BallHole):
        raise GeometryError("radial evolution requires a ball hole")
    if abs(grid.a - domain.hole.radius) > 1e-12:
        raise GeometryError("grid inner radius does not match the hole radius")
    if abs(grid.r_out - domain.far_radius) > 1e-9 * domain.far_radius:
        raise GeometryError("grid outer radius does not match domain.far_radius")
    if grid.dim != domain.dim:
        raise GeometryError("grid dimension does not match the domain")
    if cfg.dt > grid.h * (1.0 + 1e-12):
        raise PreconditionError(
            f"accuracy guard: dt = {cfg.dt} exceeds grid spacing h = {grid.h}"
        )
    values = np.array(u0.values, dtype=float)
    _check_datum(grid, theta, values)
    if theta.is_dirichlet:
        values[0] = 0.0
    values[-1] = 0.0
    omega = sphere_surface_area(domain.dim)
    return _crank_nicolson_run(grid, theta, values, cfg, omega)


def evolve_ball(radius: float, u0: Field, cfg: StepperConfig):
    """Evolve inside the ball B(0, radius) with Dirichlet boundary (dim 3).

    The grid must be a RadialGrid with a = 0 and r_out = radius; the
    origin uses the parity row, the ball boundary absorbs. Used for the
    eigen-decay checks of the optimal-datum construction.
    """
    grid = u0.grid
    if not isinstance(grid, RadialGrid) or grid.a != 0.0:
        raise PreconditionError("evolve_ball requires a RadialGrid with a = 0")
    if abs(grid.r_out - radius) > 1e-12 * max(1.0, radius):
        raise PreconditionError("grid outer radius must equal the ball radius")
    if cfg.dt > grid.h * (1.0 + 1e-12):
        raise PreconditionError("accuracy guard: dt exceeds grid spacing")
    values = np.array(u0.values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise PreconditionError("initial datum contains non-finite values")
    values[-1] = 0.0
    omega = sphere_surface_area(grid.dim)
    return _crank_nicolson_run(grid, ThetaBoundary(1.0), values, cfg, omega)

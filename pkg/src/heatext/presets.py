"""Named initial data used by the command line and the test suites.

Descriptors:
    explicit-remark             the exact-solution datum (radial, dim 3, a = 1)
    gaussian-bump:c,w           bump exp(-(r-c)^2/w^2); planar: c = "cx;cy"
    ball-eigen:n                n-th ball eigenfunction (ball grids, a = 0)
    indicator-shell:r1,r2       indicator of r1 <= r <= r2
"""

import numpy as np

from .constructions import ball_eigenfunction, explicit_solution
from .domain import ThetaBoundary
from .errors import ConfigError
from .solver.grids import Field, PlanarGrid, RadialGrid


def _split_args(arg: str, n: int, what: str):
    parts = [p for p in arg.split(",") if p]
    if len(parts) != n:
        raise ConfigError(f"{what} expects {n} parameters, got '{arg}'")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"bad numeric parameter in '{arg}'") from exc


def make_radial_datum(spec: str, grid: RadialGrid,
                      theta: ThetaBoundary = None) -> Field:
    """Build a radial initial datum from a preset descriptor.

    Dirichlet runs require u0(a) = 0; the bump preset subtracts its hole
    trace times the harmonic factor (a/r)^(N-2) so the compatibility is
    exact without changing the far field.
    """
    name, _, arg = spec.partition(":")
    r = grid.nodes()
    if name == "explicit-remark":
        if grid.a != 1.0 or grid.dim != 3:
            raise ConfigError("explicit-remark requires dim 3 and hole radius 1")
        vals = explicit_solution(r, 0.0)
    elif name == "gaussian-bump":
        c, w = _split_args(arg or "4,1", 2, "gaussian-bump")
        if w <= 0:
            raise ConfigError("bump width must be positive")
        vals = np.exp(-((r - c) / w) ** 2)
        if theta is not None and theta.is_dirichlet and grid.a > 0:
            vals = vals - vals[0] * (grid.a / r) ** (grid.dim - 2)
            vals = np.maximum(vals, 0.0)
    elif name == "ball-eigen":
        mode = int(float(arg)) if arg else 1
        if grid.a != 0.0:
            raise ConfigError("ball-eigen requires a ball grid (a = 0)")
        vals = ball_eigenfunction(r / grid.r_out, mode) / grid.r_out ** grid.dim
        # rescaling keeps unit L1 mass on B(0, r_out)
    elif name == "indicator-shell":
        r1, r2 = _split_args(arg or "1.5,2.5", 2, "indicator-shell")
        if not grid.a <= r1 < r2 <= grid.r_out:
            raise ConfigError("indicator-shell bounds must satisfy a <= r1 < r2 <= r_out")
        vals = np.where((r >= r1) & (r <= r2), 1.0, 0.0)
        if theta is not None and theta.is_dirichlet and r1 <= grid.a:
            raise ConfigError("indicator-shell touching the hole violates the Dirichlet datum")
    else:
        raise ConfigError(f"unknown preset '{name}'")
    vals = np.asarray(vals, dtype=float)
    vals[-1] = 0.0
    return Field(grid, vals, 0.0)


def make_planar_datum(spec: str, grid: PlanarGrid) -> Field:
    """Build a planar initial datum; values on hole nodes are zeroed."""
    name, _, arg = spec.partition(":")
    X, Y = grid.meshgrid()
    if name == "gaussian-bump":
        parts = _split_args(arg or "3,0,1.5", 3, "planar gaussian-bump")
        cx, cy, w = parts
        if w <= 0:
            raise ConfigError("bump width must be positive")
        vals = np.exp(-(((X - cx) ** 2 + (Y - cy) ** 2) / w ** 2))
    elif name == "indicator-shell":
        r1, r2 = _split_args(arg or "2,4", 2, "indicator-shell")
        R = np.sqrt(X ** 2 + Y ** 2)
        vals = np.where((R >= r1) & (R <= r2), 1.0, 0.0)
    else:
        raise ConfigError(f"unknown planar preset '{name}'")
    vals = np.asarray(vals, dtype=float)
    vals[grid.hole_mask()] = 0.0
    vals[grid.edge_mask()] = 0.0
    return Field(grid, vals, 0.0)

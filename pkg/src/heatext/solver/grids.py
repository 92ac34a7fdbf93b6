"""Grid descriptors and the Field container shared by all solvers."""

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from ..domain import BallHole, HoleSpec, RectHole, sphere_surface_area
from ..errors import GeometryError


@dataclass(frozen=True)
class RadialGrid:
    """Uniform radial grid on [a, r_out]; a = 0 switches to ball/whole-space mode.

    Nodes r_i = a + i h with h = (r_out - a) / n_r, so r_0 = a and
    r_{n_r} = r_out.
    """

    a: float
    r_out: float
    n_r: int
    dim: int = 3

    def __post_init__(self):
        if self.a < 0:
            raise GeometryError(f"hole radius must be >= 0, got {self.a}")
        if self.r_out <= self.a:
            raise GeometryError("r_out must exceed the hole radius")
        if self.n_r < 64:
            raise GeometryError(f"n_r must be at least 64, got {self.n_r}")
        if self.dim not in (2, 3):
            raise GeometryError(f"dim must be 2 or 3, got {self.dim}")

    @property
    def h(self) -> float:
        return (self.r_out - self.a) / self.n_r

    def nodes(self) -> np.ndarray:
        return self.a + np.arange(self.n_r + 1) * self.h

    def volume_weights(self) -> np.ndarray:
        """Trapezoid weights including the surface measure omega r^(N-1) h."""
        r = self.nodes()
        w = np.ones_like(r)
        w[0] = w[-1] = 0.5
        return sphere_surface_area(self.dim) * w * r ** (self.dim - 1) * self.h


@dataclass(frozen=True)
class PlanarGrid:
    """Uniform node-centred grid on the square [-half_width, half_width]^2.

    Nodes on the outer edge are pinned to zero (far Dirichlet); nodes inside
    the hole are inactive. n is the cell count per side (n + 1 nodes).
    """

    half_width: float
    n: int
    hole: Optional[HoleSpec] = None

    def __post_init__(self):
        if self.half_width <= 0:
            raise GeometryError("half_width must be positive")
        if self.n < 16:
            raise GeometryError(f"n must be at least 16, got {self.n}")
        if self.hole is not None:
            if self.hole.circumscribed_radius >= self.half_width:
                raise GeometryError("hole must lie strictly inside the grid square")

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / self.n

    def coords(self) -> np.ndarray:
        return -self.half_width + np.arange(self.n + 1) * self.h

    def meshgrid(self):
        c = self.coords()
        return np.meshgrid(c, c, indexing="ij")

    def hole_mask(self) -> np.ndarray:
        """True on nodes inside (or on) the hole boundary."""
        X, Y = self.meshgrid()
        eps = 1e-12 * self.half_width
        if self.hole is None:
            return np.zeros_like(X, dtype=bool)
        if isinstance(self.hole, BallHole):
            return X ** 2 + Y ** 2 <= self.hole.radius ** 2 + eps
        if isinstance(self.hole, RectHole):
            return (np.abs(X) <= self.hole.half_width_x + eps) & (
                np.abs(Y) <= self.hole.half_width_y + eps
            )
        raise GeometryError(f"unsupported hole {self.hole!r}")

    def edge_mask(self) -> np.ndarray:
        m = np.zeros((self.n + 1, self.n + 1), dtype=bool)
        m[0, :] = m[-1, :] = m[:, 0] = m[:, -1] = True
        return m

    def active_mask(self) -> np.ndarray:
        return ~self.hole_mask() & ~self.edge_mask()

    def volume_weights(self) -> np.ndarray:
        w = np.full((self.n + 1, self.n + 1), self.h ** 2)
        w[self.hole_mask()] = 0.0
        return w


@dataclass(frozen=True)
class AxisymGrid:
    """Cylindrical (rho, z) grid for axisymmetric 3d fields about the z-axis.

    rho in [0, rho_max] with n_rho cells, z in [-z_half, z_half] with n_z
    cells. hole_radius > 0 masks the ball rho^2 + z^2 <= hole_radius^2.
    """

    rho_max: float
    z_half: float
    n_rho: int
    n_z: int
    hole_radius: float = 0.0

    def __post_init__(self):
        if self.rho_max <= 0 or self.z_half <= 0:
            raise GeometryError("rho_max and z_half must be positive")
        if self.n_rho < 16 or self.n_z < 16:
            raise GeometryError("n_rho and n_z must be at least 16")
        if self.hole_radius < 0:
            raise GeometryError("hole_radius must be >= 0")
        if self.hole_radius >= min(self.rho_max, self.z_half):
            if self.hole_radius > 0:
                raise GeometryError("hole must lie strictly inside the grid")

    @property
    def h_rho(self) -> float:
        return self.rho_max / self.n_rho

    @property
    def h_z(self) -> float:
        return 2.0 * self.z_half / self.n_z

    def rho_nodes(self) -> np.ndarray:
        return np.arange(self.n_rho + 1) * self.h_rho

    def z_nodes(self) -> np.ndarray:
        return -self.z_half + np.arange(self.n_z + 1) * self.h_z

    def meshgrid(self):
        return np.meshgrid(self.rho_nodes(), self.z_nodes(), indexing="ij")

    def hole_mask(self) -> np.ndarray:
        R, Z = self.meshgrid()
        if self.hole_radius == 0.0:
            return np.zeros_like(R, dtype=bool)
        return R ** 2 + Z ** 2 <= self.hole_radius ** 2 + 1e-12

    def edge_mask(self) -> np.ndarray:
        m = np.zeros((self.n_rho + 1, self.n_z + 1), dtype=bool)
        m[-1, :] = True                 # rho = rho_max
        m[:, 0] = m[:, -1] = True       # z = +- z_half
        return m

    def active_mask(self) -> np.ndarray:
        return ~self.hole_mask() & ~self.edge_mask()

    def volume_weights(self) -> np.ndarray:
        """Cell weights for 2 pi * integral integral u rho drho dz.

        Ring cells carry 2 pi rho_i h_rho h_z; the axis carries its
        control-volume pi (h_rho/2)^2 h_z, which makes the discrete mass
        exchange with the first ring telescope exactly (the parity row is
        the finite-volume flux of that cell). Trapezoid halving applies
        at the outer edges, where fields vanish anyway.
        """
        R, _ = self.meshgrid()
        w = np.ones_like(R)
        w[-1, :] *= 0.5
        w[:, 0] *= 0.5
        w[:, -1] *= 0.5
        w = 2.0 * math.pi * w * R * self.h_rho * self.h_z
        w[0, :] = math.pi * (self.h_rho / 2.0) ** 2 * self.h_z
        w[0, 0] *= 0.5
        w[0, -1] *= 0.5
        w[self.hole_mask()] = 0.0
        return w


@dataclass
class Field:
    """A discrete field u(., t): values on a grid plus its time stamp."""

    grid: object
    values: np.ndarray
    time: float = 0.0
    _weights: np.ndarray = dc_field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    def lock(self) -> "Field":
        """Mark the values read-only; emitted snapshots are immutable."""
        self.values.flags.writeable = False
        return self

    def weights(self) -> np.ndarray:
        if self._weights is None:
            self._weights = self.grid.volume_weights()
        return self._weights

    def integral(self) -> float:
        return float(np.sum(self.weights() * self.values))

    def lp_norm(self, p: float) -> float:
        w = self.weights()
        if math.isinf(p):
            return float(np.max(np.abs(self.values[w > 0]))) if np.any(w > 0) else float(
                np.max(np.abs(self.values))
            )
        return float(np.sum(w * np.abs(self.values) ** p) ** (1.0 / p))

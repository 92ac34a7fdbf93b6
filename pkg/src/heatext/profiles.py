"""Asymptotic profiles: the bounded harmonic function with B_theta = 0 at the
hole and value 1 at infinity.

For dim >= 3 and a ball hole the profile is the closed form

    Phi(r) = 1 - c (a/r)^(N-2),   c = 1 (Dirichlet),
                                  c = a b / (a b + N - 2) (Robin, b = cot(pi theta/2)),
                                  c = 0 (Neumann),

which satisfies the boundary condition exactly (with du/dn = -du/dr at
r = a) and tends to 1 at infinity. In dim 2 the profile degenerates: it
is identically 0 unless the condition is Neumann (then identically 1).
The elliptic route solves the truncated problems phi_R = 1 on |x| = R and
extrapolates R -> infinity; for the radial case the boundary influence is
exactly proportional to 1/(R - q) with offset q = a^2 b / (1 + a b)
(q = a for Dirichlet), which the two-point extrapolation uses.
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.linalg import solve_banded
from scipy.sparse.linalg import spsolve

from .domain import (
    BallHole,
    ExteriorDomain,
    HoleSpec,
    ThetaBoundary,
)
from .errors import GeometryError, NumericalError, PreconditionError
from .solver.grids import AxisymGrid, Field, PlanarGrid, RadialGrid


@dataclass(frozen=True)
class ClosedFormRadial:
    """Marker for Phi(r) = 1 - coefficient * (a/r)^(N-2)."""

    coefficient: float


@dataclass(frozen=True)
class EllipticLimit:
    """Marker for an R -> infinity elliptic limit with extrapolation offset q."""

    radii: Tuple[float, ...]
    offset: float


def profile_coefficient(dim: int, a: float, theta: ThetaBoundary) -> float:
    """Coefficient c of the closed-form radial profile (dim >= 3)."""
    if dim < 3:
        raise GeometryError("closed-form coefficient requires dim >= 3")
    if theta.is_dirichlet:
        return 1.0
    b = theta.robin_b
    return a * b / (a * b + dim - 2)


@dataclass
class ProfileTable:
    """Sampled asymptotic profile with its construction metadata.

    Radial tables carry (r, values); the planar elliptic route carries
    per-radius Fields instead. The degenerate dim-2 cases are flagged:
    all_mass_lost (Phi == 0) and conserved (Phi == 1).
    """

    dim: int
    hole: HoleSpec
    theta: ThetaBoundary
    method: object
    r: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    per_radius: Optional[Dict[float, np.ndarray]] = None
    planar_fields: Optional[Dict[float, Field]] = None
    all_mass_lost: bool = False
    conserved: bool = False

    def evaluate(self, radii):
        """Profile values at the given radii (vectorised)."""
        rr = np.asarray(radii, dtype=float)
        if self.conserved:
            return np.ones_like(rr)
        if self.all_mass_lost:
            return np.zeros_like(rr)
        if isinstance(self.method, ClosedFormRadial):
            a = self.hole.radius
            c = self.method.coefficient
            return 1.0 - c * (a / rr) ** (self.dim - 2)
        if self.r is not None:
            out = np.interp(rr, self.r, self.values)
            # harmonic continuation beyond the table: 1 - C r^(2-N)
            tail = rr > self.r[-1]
            if np.any(tail):
                c_tail = (1.0 - self.values[-1]) * self.r[-1] ** (self.dim - 2)
                out = np.where(tail, 1.0 - c_tail * rr ** (2.0 - self.dim), out)
            return out
        raise PreconditionError("this profile table has no radial evaluator")

    def boundary_residual(self) -> float:
        """Residual of sin(pi theta/2) dPhi/dn + cos(pi theta/2) Phi at r = a."""
        if self.conserved or self.all_mass_lost:
            return 0.0
        a = self.hole.radius
        half = 0.5 * math.pi * self.theta.theta
        if isinstance(self.method, ClosedFormRadial):
            c = self.method.coefficient
            phi_a = 1.0 - c
            dphi_dr = c * (self.dim - 2) / a
        else:
            h = self.r[1] - self.r[0]
            phi_a = self.values[0]
            dphi_dr = (-3.0 * self.values[0] + 4.0 * self.values[1]
                       - self.values[2]) / (2.0 * h)
        return math.sin(half) * (-dphi_dr) + math.cos(half) * phi_a

    def elliptic_monotone_violations(self, tol: float = 0.0) -> int:
        """Count pointwise increases of phi_R as R grows (0 expected)."""
        if self.per_radius is None and self.planar_fields is None:
            raise PreconditionError("monotonicity check requires an elliptic table")
        count = 0
        if self.per_radius is not None:
            radii = sorted(self.per_radius)
            for r1, r2 in zip(radii, radii[1:]):
                count += int(np.sum(self.per_radius[r2] > self.per_radius[r1] + tol))
        else:
            radii = sorted(self.planar_fields)
            for r1, r2 in zip(radii, radii[1:]):
                f1, f2 = self.planar_fields[r1], self.planar_fields[r2]
                m = f1.grid.active_mask()
                count += int(np.sum(f2.values[m] > f1.values[m] + tol))
        return count


def profile_radial_closed_form(dim: int, a: float, theta: ThetaBoundary,
                               r_max: Optional[float] = None,
                               n_samples: int = 512) -> ProfileTable:
    """Closed-form radial profile for a ball hole.

    dim 2 degenerates: Neumann gives the constant-1 table, anything else
    the constant-0 table flagged all_mass_lost.
    """
    if a <= 0:
        raise GeometryError("hole radius must be positive")
    hole = BallHole(a)
    if r_max is None:
        r_max = 64.0 * a
    r = np.linspace(a, r_max, n_samples)
    if dim == 2:
        if theta.is_neumann:
            return ProfileTable(dim, hole, theta, ClosedFormRadial(0.0), r,
                                np.ones_like(r), conserved=True)
        return ProfileTable(dim, hole, theta, ClosedFormRadial(0.0), r,
                            np.zeros_like(r), all_mass_lost=True)
    c = profile_coefficient(dim, a, theta)
    table = ProfileTable(dim, hole, theta, ClosedFormRadial(c), r,
                         1.0 - c * (a / r) ** (dim - 2),
                         conserved=theta.is_neumann)
    return table


def _radial_truncated_solve(dim: int, a: float, theta: ThetaBoundary,
                            R: float, h: float) -> Tuple[np.ndarray, np.ndarray]:
    """Solve the conservative radial Laplace problem on [a, R], phi(R) = 1."""
    n = int(round((R - a) / h)) + 1
    r = a + np.arange(n) * h
    lo = np.zeros(n)
    di = np.zeros(n)
    up = np.zeros(n)
    rhs = np.zeros(n)
    i = np.arange(1, n - 1)
    rp = (r[i] + 0.5 * h) ** (dim - 1)
    rm = (r[i] - 0.5 * h) ** (dim - 1)
    lo[i] = rm
    di[i] = -(rp + rm)
    up[i] = rp
    if theta.is_dirichlet:
        di[0] = 1.0
    else:
        b = theta.robin_b
        rp0 = (r[0] + 0.5 * h) ** (dim - 1)
        rm0 = (r[0] - 0.5 * h) ** (dim - 1)
        # ghost u_{-1} = u_1 - 2 h b u_0 keeps the row second order
        di[0] = -(rp0 + rm0) - 2.0 * h * b * rm0
        up[0] = rp0 + rm0
    di[-1] = 1.0
    rhs[-1] = 1.0
    ab = np.zeros((3, n))
    ab[0, 1:] = up[:-1]
    ab[1, :] = di
    ab[2, :-1] = lo[1:]
    phi = solve_banded((1, 1), ab, rhs)
    if not np.all(np.isfinite(phi)):
        raise NumericalError("radial harmonic solve produced non-finite values")
    return r, phi


def _planar_truncated_solve(hole: HoleSpec, theta: ThetaBoundary, R: float,
                            h: float) -> Field:
    """Masked 5-point Laplace solve on B(0,R) \\ hole with phi = 1 at |x| = R.

    All radii share one global lattice (spacing h, centred at the origin)
    so the discrete problems nest and the R-monotonicity is exact.
    """
    m = int(math.ceil(R / h)) + 1
    grid = PlanarGrid(half_width=m * h, n=2 * m, hole=hole)
    X, Y = grid.meshgrid()
    inside = X ** 2 + Y ** 2 < R ** 2 - 1e-12
    hole_mask = grid.hole_mask()
    active = inside & ~hole_mask
    idx = -np.ones(active.shape, dtype=np.int64)
    idx[active] = np.arange(int(active.sum()))
    n_unknown = int(active.sum())
    if n_unknown == 0:
        raise GeometryError("truncation radius leaves no active nodes")

    if theta.is_dirichlet:
        mode = "dirichlet"
    elif theta.is_neumann:
        mode = "neumann"
    else:
        b = theta.robin_b
        alpha = (1.0 - 0.5 * b * h) / (1.0 + 0.5 * b * h)
        mode = "robin"

    I, J = np.where(active)
    me = idx[I, J]
    rows, cols, vals = [], [], []
    diag = np.zeros(n_unknown)
    rhs = np.zeros(n_unknown)
    for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        In, Jn = I + di, J + dj
        nb_idx = idx[In, Jn]
        nb_hole = hole_mask[In, Jn]
        nb_active = nb_idx >= 0
        rows.extend(me[nb_active])
        cols.extend(nb_idx[nb_active])
        vals.extend(np.ones(int(nb_active.sum())))
        diag[nb_active] -= 1.0
        nb_far = ~nb_active & ~nb_hole  # outside the circle: phi = 1
        diag[nb_far] -= 1.0
        rhs[nb_far] -= 1.0
        if np.any(nb_hole):
            if mode == "dirichlet":
                diag[nb_hole] -= 1.0
            elif mode == "robin":
                diag[nb_hole] -= 1.0 - alpha
    rows.extend(me)
    cols.extend(me)
    vals.extend(diag)
    A = sp.csr_matrix((np.asarray(vals), (np.asarray(rows), np.asarray(cols))),
                      shape=(n_unknown, n_unknown)).tocsc()
    phi_vec = spsolve(A, rhs)
    if not np.all(np.isfinite(phi_vec)):
        raise NumericalError("planar harmonic solve produced non-finite values")
    full = np.ones((grid.n + 1, grid.n + 1))
    full[hole_mask] = 0.0
    full[active] = phi_vec
    return Field(grid, full, 0.0).lock()


def profile_elliptic(domain: ExteriorDomain, theta: ThetaBoundary,
                     R_list, h: Optional[float] = None) -> ProfileTable:
    """Profile by truncated harmonic solves at each R in R_list.

    dim 3 (ball hole): radial second-order solves; the limit table is the
    two-point extrapolation in 1/(R - q) of the two largest radii.
    dim 2: masked 5-point solves on a shared lattice; no extrapolation
    (the limit is the constant 0 or 1) but per-R tables demonstrate the
    monotone decrease.
    """
    radii = tuple(float(R) for R in R_list)
    if len(radii) < 2 or list(radii) != sorted(set(radii)):
        raise PreconditionError("R_list must contain >= 2 strictly increasing radii")
    rc = domain.hole.circumscribed_radius
    if radii[0] <= 2.0 * rc:
        raise PreconditionError(
            f"min(R_list) must exceed twice the hole circumscribed radius ({2.0 * rc})"
        )

    if domain.dim == 3:
        if not isinstance(domain.hole, BallHole):
            raise GeometryError("dim-3 elliptic profiles require a ball hole")
        a = domain.hole.radius
        if h is None:
            h = a / 256.0
        if theta.is_neumann:
            q = 0.0
        elif theta.is_dirichlet:
            q = a
        else:
            b = theta.robin_b
            q = a * a * b / (1.0 + a * b)
        solves = {}
        for R in radii:
            r_R, phi_R = _radial_truncated_solve(domain.dim, a, theta, R, h)
            solves[R] = (r_R, phi_R)
        n_common = min(v[0].size for v in solves.values())
        r_common = solves[radii[0]][0][:n_common]
        per_radius = {R: v[1][:n_common].copy() for R, v in solves.items()}
        R1, R2 = radii[-2], radii[-1]
        y1, y2 = 1.0 / (R1 - q), 1.0 / (R2 - q)
        extrap = (y1 * per_radius[R2] - y2 * per_radius[R1]) / (y1 - y2)
        extrap = np.clip(extrap, 0.0, 1.0)
        return ProfileTable(domain.dim, domain.hole, theta,
                            EllipticLimit(radii, q), r_common, extrap,
                            per_radius=per_radius,
                            conserved=theta.is_neumann)

    # dim 2: masked planar solves on one nested lattice
    if h is None:
        h = 0.25
    fields = {R: _planar_truncated_solve(domain.hole, theta, R, h) for R in radii}
    # restrict every solve to the coarsest (smallest R) grid for comparisons
    small = fields[radii[0]].grid
    per_fields = {}
    for R, f in fields.items():
        g = f.grid
        off = round((g.half_width - small.half_width) / h)
        sub = f.values[off:off + small.n + 1, off:off + small.n + 1]
        per_fields[R] = Field(small, sub.copy(), 0.0).lock()
    table = ProfileTable(domain.dim, domain.hole, theta,
                         EllipticLimit(radii, 0.0),
                         planar_fields=per_fields,
                         all_mass_lost=not theta.is_neumann,
                         conserved=theta.is_neumann)
    return table


def asymptotic_mass(u0: Field, profile: ProfileTable) -> float:
    """Mass retained as t -> infinity: integral of Phi * u0 over the domain."""
    grid = u0.grid
    if profile.conserved:
        return u0.integral()
    if profile.all_mass_lost:
        return 0.0
    if isinstance(grid, RadialGrid):
        if abs(grid.a - profile.hole.circumscribed_radius) > 1e-12:
            raise PreconditionError("profile hole does not match the field grid")
        if grid.dim != profile.dim:
            raise PreconditionError("profile dimension does not match the field grid")
        phi = profile.evaluate(grid.nodes())
        return float(np.sum(grid.volume_weights() * phi * u0.values))
    if isinstance(grid, AxisymGrid):
        if profile.dim != 3:
            raise PreconditionError("axisymmetric fields require a dim-3 profile")
        R, Z = grid.meshgrid()
        radii = np.sqrt(R ** 2 + Z ** 2)
        phi = profile.evaluate(np.maximum(radii, profile.hole.circumscribed_radius))
        phi[grid.hole_mask()] = 0.0
        return float(np.sum(grid.volume_weights() * phi * u0.values))
    raise PreconditionError(f"unsupported grid type {type(grid).__name__}")


@dataclass
class DecayFitReport:
    """Log-log fit of a profile derivative against radius."""

    order: int
    exponent: float
    amplitude: float
    target: float
    passed: bool
    skipped: bool = False
    reason: str = ""


def profile_decay_check(profile: ProfileTable, order: int,
                        n_octaves: int = 7) -> DecayFitReport:
    """Fit the decay exponent of |D^order Phi| (order 0 uses 1 - Phi).

    Finite differences on a dyadic radius ladder; passes when the fitted
    exponent is at most -(N - 2 + order) + 0.1.
    """
    if order < 0 or order > 2:
        raise PreconditionError("order must be 0, 1, or 2")
    if profile.dim < 3:
        raise PreconditionError("decay checks require dim >= 3")
    target = -(profile.dim - 2 + order) + 0.1
    if profile.conserved:
        return DecayFitReport(order, 0.0, 0.0, target, True, skipped=True,
                              reason="constant profile: 1 - Phi vanishes identically")
    a = profile.hole.circumscribed_radius
    radii = a * 2.0 ** np.arange(1, n_octaves + 1)
    if profile.r is not None and not isinstance(profile.method, ClosedFormRadial):
        radii = radii[radii <= profile.r[-1] / 2.0]
    if radii.size < 4:
        raise PreconditionError("not enough samples for a decay fit")
    delta = 1e-3 * radii
    if order == 0:
        vals = 1.0 - profile.evaluate(radii)
    elif order == 1:
        vals = np.abs(profile.evaluate(radii + delta)
                      - profile.evaluate(radii - delta)) / (2.0 * delta)
    else:
        vals = np.abs(profile.evaluate(radii + delta) - 2.0 * profile.evaluate(radii)
                      + profile.evaluate(radii - delta)) / delta ** 2
    good = vals > 0
    if int(good.sum()) < 4:
        raise PreconditionError("profile derivative vanishes on the ladder")
    slope, intercept = np.polyfit(np.log(radii[good]), np.log(vals[good]), 1)
    return DecayFitReport(order, float(slope), float(math.exp(intercept)), target,
                          passed=bool(slope <= target))


@dataclass
class PsiTable:
    """Complement Psi = 1 - Phi(Dirichlet), with its fitted decay amplitude."""

    dim: int
    hole: HoleSpec
    r: np.ndarray
    values: np.ndarray
    amplitude: float  # fitted C with Psi <= C / r^(N-2)
    profile: ProfileTable = None

    def evaluate(self, radii):
        return 1.0 - self.profile.evaluate(radii)


def psi_from_profile(profile0: ProfileTable) -> PsiTable:
    """Build Psi = 1 - Phi from a Dirichlet profile table."""
    if not profile0.theta.is_dirichlet:
        raise PreconditionError("Psi is defined from the Dirichlet profile")
    if profile0.r is None:
        raise PreconditionError("Psi requires a radial profile table")
    psi = 1.0 - profile0.evaluate(profile0.r)
    amp = float(np.max(psi * profile0.r ** (profile0.dim - 2)))
    return PsiTable(profile0.dim, profile0.hole, profile0.r.copy(), psi, amp,
                    profile=profile0)

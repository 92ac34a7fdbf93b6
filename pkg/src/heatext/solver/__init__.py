"""Finite-difference evolution of the heat equation on truncated exterior domains."""

from .grids import AxisymGrid, Field, PlanarGrid, RadialGrid
from .config import StepperConfig
from .ledger import MassLedger, mass_balance_residual
from .radial import evolve_ball, evolve_radial
from .planar import evolve_planar
from .axisym import evolve_axisym
from .probes import ProbeResult, kernel_probe, mollifier_bump, probe_smearing_estimate

__all__ = [
    "AxisymGrid",
    "Field",
    "PlanarGrid",
    "RadialGrid",
    "StepperConfig",
    "MassLedger",
    "mass_balance_residual",
    "evolve_radial",
    "evolve_ball",
    "evolve_planar",
    "evolve_axisym",
    "kernel_probe",
    "probe_smearing_estimate",
    "mollifier_bump",
    "ProbeResult",
]

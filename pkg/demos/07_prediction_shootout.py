"""Retained mass vs initial mass: which prediction matches the field?

Two late-time predictions for the Dirichlet solution outside the unit
ball: one multiplies the profile-corrected Gaussian by the retained
mass, the other (a classical prediction attributed to Herraiz) by the
full initial mass. The exact solution decides: the initial-mass curve
overshoots by exactly the mass ratio, about 1.56 for this datum.
"""

import os

from heatext import explicit_solution_mass, herraiz_compare
from heatext.constructions import EXPLICIT_ASYMPTOTIC_MASS
from heatext.svgplot import line_plot_svg

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

for t in (100.0, 1000.0):
    comp = herraiz_compare(t)
    print(f"t = {t:6g}: sup-relative gap, retained-mass {comp.gap_theorem:.4f}  "
          f"initial-mass {comp.gap_herraiz:.4f}   peak ratio {comp.peak_ratio:.4f}")

ratio = explicit_solution_mass(0.0) / EXPLICIT_ASYMPTOTIC_MASS
print(f"\nmass ratio M(0) / m = {ratio:.4f}: the overshoot of the initial-mass curve")

comp = herraiz_compare(100.0)
line_plot_svg(os.path.join(OUT, "prediction_shootout.svg"),
              [(comp.r, comp.exact, "exact"),
               (comp.r, comp.theorem_pred, "retained-mass prediction"),
               (comp.r, comp.herraiz_pred, "initial-mass prediction")],
              xlabel="r", ylabel="u", title="late-time spatial profiles, t = 100")
print(f"figure under {OUT}")

"""Riemann-Liouville integrals with endpoint singularities handled by substitution."""

import math

import numpy as np

from fracineq.fracquad import QuadratureConfig, rl_left, rl_right

a, x = 0.0, 1.0
print("J^alpha of exp on [0, 1], left and right sided")
for alpha in (0.1, 0.5, 1.0, 2.5):
    left = rl_left(np.exp, a, x, alpha)
    right = rl_right(np.exp, a, x, alpha)
    print(f"  alpha = {alpha:<4} left {left.value:.15f}  right {right.value:.15f}  "
          f"({left.evaluations} + {right.evaluations} evaluations)")

# power rule: J_{0+}^alpha t^2 (1) = Gamma(3) / Gamma(3 + alpha)
alpha = 0.37
got = rl_left(lambda t: t * t, 0.0, 1.0, alpha).value
print(f"\npower rule at alpha = {alpha}: {got:.16f} vs {math.gamma(3) / math.gamma(3 + alpha):.16f}")

# plain panel refinement struggles with strong singularities and says so
raw = rl_left(np.exp, 0.0, 1.0, 0.1, QuadratureConfig(singularity_policy="panel_refinement", rel_tol=1e-12))
print(f"panel refinement at alpha = 0.1: value {raw.value:.12f}, converged = {raw.converged}")

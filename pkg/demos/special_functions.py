"""Special functions that the printed constants are built from."""

import math

from fracineq.bounds import brace_constant
from fracineq.specfun import beta, gamma, gauss_2f1, incomplete_beta

print(f"gamma(1/2)        = {gamma(0.5):.16f}   sqrt(pi) = {math.sqrt(math.pi):.16f}")
print(f"B(2.5, 1.5)       = {beta(2.5, 1.5):.16f}")

res = incomplete_beta(0.5, 2.5, 0.5)
print(f"B_1/2(2.5, 0.5)   = {res.value:.16f}   (est. error {res.est_abs_error:.1e}, converged {res.converged})")

# c = -1/2 is fine for the series even though the Euler integral would not apply
res = gauss_2f1(1.0, 3.0, -0.5, 0.5)
print(f"2F1(1,3;-1/2;1/2) = {res.value:.16f}")

print("\nbrace constant of the first-order bound:")
for alpha in (0.25, 0.5, 1.0, 2.0, 3.0):
    print(f"  alpha = {alpha:<4}  C = {brace_constant(alpha):.15f}")

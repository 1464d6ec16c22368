"""Both integral identities, checked against the fractional left side."""

from fracineq.identities import hh_left_side, lemma1_residual, lemma2_residual
from fracineq.preinvex import IDENTITY, Instance, get_function, scaled_map

print(f"{'function':<8} {'map':<11} {'alpha':>5}  {'left side':>20}  {'first':>9}  {'second':>9}")
for fn in ("square", "exp", "sqshift"):
    for mp in (IDENTITY, scaled_map(0.7)):
        for alpha in (0.25, 1.0, 3.0):
            inst = Instance(get_function(fn), mp, 0.5, 1.5, alpha)
            r1, r2 = lemma1_residual(inst), lemma2_residual(inst)
            print(f"{fn:<8} {mp.id:<11} {alpha:>5}  {hh_left_side(inst):>20.15f}  "
                  f"{r1.residual:9.1e}  {r2.residual:9.1e}")

# x^2 with alpha = 1 on [0, 1] gives exactly 1/6
inst = Instance(get_function("square"), IDENTITY, 0.0, 1.0, 1.0)
print(f"\nx^2, alpha = 1 on [0, 1]: {hh_left_side(inst):.16f} (1/6 = {1 / 6:.16f})")

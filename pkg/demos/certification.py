"""Grid certification of lambda-preinvexity, including a located violation."""

from fracineq.preinvex import IDENTITY, certify_lambda_preinvex, certify_mt, get_function, scaled_map

exp = get_function("exp")
for mp in (IDENTITY, scaled_map(0.7)):
    for lam in (0.5, 0.25):
        rep = certify_lambda_preinvex(exp, mp, lam, (0.5, 1.5))
        where = "" if rep.passed else "  worst at (u, v, t) = ({:.3f}, {:.3f}, {:.3f})".format(*rep.argmax)
        print(f"exp, {mp.id:<11} lambda = {lam:<5} {rep.status:<5} max violation {rep.max_violation:+.3e}{where}")

# |f'| of x^(3/2) is 1.5 sqrt(x), concave, so the midpoint form of the definition fails
rep = certify_mt(get_function("pow32").magnitude(1), (0.5, 1.5))
print(f"\n|d/dx x^1.5| MT-convex on [0.5, 1.5]: {rep.passed} (max violation {rep.max_violation:.3e})")

# # Watching boundedness and compactness numerically
#
# The exact sets predict which Riesz potentials are bounded.  Here we
# discretise the operator and measure its norms as the fractal target
# gets finer.

from fractions import Fraction as F

from charset.verification import boundedness_scan, predicted_class, weak_type_scan, witness_test

lam = alpha = 0.5

# ## Growth of discrete norms
#
# Inside L the norms settle down.  Below the critical segment they grow
# like a power of the number of atoms, but the power is small.

for pt in [(F(7, 10), F(1, 2)), (F(7, 10), F(3, 10))]:
    (rep,) = boundedness_scan(lam, alpha, [pt], levels=range(4, 9))
    print(pt, "predicted:", predicted_class(lam, alpha, pt))
    print("   norms:", [round(v, 3) for v in rep.norms])
    print("   exponent:", round(rep.fitted_exponent, 4), rep.classification)

# ## Bumps that never become small
#
# On the segment itself the operator is bounded but not compact: the
# normalised bumps f_k keep an image of size about 2 on shrinking balls.

w = witness_test(lam, alpha, 0.7)
for k, n in zip(w.k_values, w.witness_norms):
    print(f"k={k:3d}  ||T f_k on B_k||_q = {n:.4f}")
print("spread:", round(w.spread, 3))

# ## Weak type at an endpoint

for n in (6, 8):
    r = weak_type_scan(lam, alpha, 0.75, level=n)
    print(f"level {n}: sup ratio {r.sup_ratio:.3f}, pointwise constant {r.pointwise_constant:.3f}")

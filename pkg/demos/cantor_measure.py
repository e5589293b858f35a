# # The Cantor measure
#
# The target space of the Riesz potentials is a symmetric Cantor set with
# its natural measure.  At level n it becomes 2^n atoms of mass 2^-n.

import math

import numpy as np

from charset.fractal import MIDDLE_THIRDS, CantorSpec, ahlfors_constants, cantor_build, hausdorff_sum

space = cantor_build(MIDDLE_THIRDS, 10)
print("atoms:", space.size, "cell diameter:", space.cell_diameter)
print("first atoms:", np.round(space.atoms[:4], 5))

# ## Ahlfors regularity
#
# The mass of a ball of radius r is comparable to r^dimension.

est = ahlfors_constants(space, 10_000, seed=0)
print(f"c = {est.c_hat:.4f}, C = {est.C_hat:.4f}, C/c = {est.ratio:.3f}")

# ## Hausdorff sums
#
# Covering by the 2^m cells of level m gives sum 1 exactly at the
# dimension log 2 / log 3, and a trend either way off it.

spec = CantorSpec(MIDDLE_THIRDS, 12)
for s in (0.5, MIDDLE_THIRDS, 0.7):
    vals = [hausdorff_sum(spec, s, m).value for m in (1, 4, 8, 12)]
    print(f"s={s:.4f}:", [round(v, 4) for v in vals])
print("dimension:", math.log(2) / math.log(3))

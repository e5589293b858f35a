# # Subspaces that defeat strict singularity
#
# A strictly singular operator is invertible on no infinite-dimensional
# subspace.  Two constructions show the opposite: sequences on which a
# simple restriction acts as an isomorphism.

import numpy as np

from charset.verification import rademacher_table, stable_sample, subspace_experiment

# ## Khintchine
#
# Rademacher sums have comparable L_p and L_2 norms.

for row in rademacher_table(4, 16):
    print(row)

# ## p > 2: bumps plus Rademachers
#
# x_n = (disjoint bump) + (Rademacher).  Restricting to the bump half keeps
# every ||T x_n|| equal to 1 while the span still looks like l_2.

r = subspace_experiment("p-gt-2", 4, 16, trials=100)
print("image norms:", set(np.round(r.image_norms, 12)))
print("ratio band:", r.ratio_band, "regularity:", round(r.regularity_hat, 4))

# ## q <= p <= s < 2: stable variables

x = stable_sample(1.5, 100_000, seed=0)
print("1.5-stable: median |X| =", round(float(np.median(np.abs(x))), 4))
r = subspace_experiment("q-le-p-le-s", 1.2, 16, q=1.1, s=1.6, trials=100)
print("ratio band:", tuple(round(v, 4) for v in r.ratio_band))

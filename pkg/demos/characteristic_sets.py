# # Characteristic sets of classical operators
#
# Every operator here acts between Lebesgue spaces on (0, 1).  A point
# (1/p, 1/q) of the unit square stands for the pair of spaces L_p -> L_q.
# For each operator we record four sets of such points: where it is bounded
# (L), compact (K), strictly singular (S), and the gap V = S \ K.

from fractions import Fraction as F
from pathlib import Path

from charset.catalog import Adjoint, RiemannLiouville, RieszPotential, profile, reference_specs
from charset.regions import Location, contains, region_to_json, validate_profile

# ## A Riesz potential onto a fractal
#
# Kernel |t - u|^(-1/2), landing on the Cantor set of dimension 1/2.

spec = RieszPotential(F(1, 2), F(1, 2))
prof = profile(spec)
(seg,) = prof.V
print("V segment:", seg.start, "->", seg.end, "slope", seg.slope())

# The segment lies on the boundary of L.  Points above it are bounded and
# compact, points below are not bounded at all.

for pt in [(F(7, 10), F(1, 2)), (F(7, 10), F(2, 5)), (F(7, 10), F(3, 10))]:
    print(pt, "L:", contains(prof.L, pt).value, "K:", contains(prof.K, pt).value)

# ## Duality
#
# Passing to the adjoint reflects everything across the anti-diagonal,
# (a, b) -> (1 - b, 1 - a).

dual = profile(Adjoint(spec))
(dseg,) = dual.V
print("adjoint V:", dseg.start, "->", dseg.end)

# ## The whole catalogue validates
#
# The structural rules (K inside S inside L, V on the boundary of L, the
# forbidden band) hold for every reference operator.

for s in reference_specs():
    print(f"{s.kind:24s} violations: {len(validate_profile(profile(s)))}")

# ## Exact regions as JSON, pictures as SVG

print(region_to_json(profile(RiemannLiouville(F(1, 3))).L))

out = Path("riesz_profile.svg")
from charset.render import profile_svg  # noqa: E402

out.write_text(profile_svg(prof, "Riesz potential, order 1/2, dimension 1/2"))
print("wrote", out, Location.BOUNDARY.value)

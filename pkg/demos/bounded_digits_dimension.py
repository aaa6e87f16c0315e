"""How big is the set of continued fractions with digits at most k?"""

import math
import random

from xiongsets.cover import TargetSet, canonical_cover, cover_certify, random_cover
from xiongsets.dimension import claim_check, claim_s, dim_bisect, jarnik_bounds

# finite-depth root of sum |I|^s = 1, against the two closed-form bounds
print(" k  depth  estimate   lower     upper")
for k, depth in [(2, 16), (4, 8), (9, 5), (10, 5), (20, 4), (50, 3)]:
    est = dim_bisect(k, depth)
    b = jarnik_bounds(k)
    flag = "" if b.in_range else "  (bounds only claimed for k > 8)"
    print(f"{k:2d}  {depth:5d}  {est.s:.5f}  {float(b.lower):.5f}  {float(b.upper):.5f}{flag}")

# the estimate creeps down as depth grows
print("k=2 by depth:", [round(dim_bisect(2, d).s, 4) for d in range(4, 17, 4)])

# sibling inequality at s = 1 - 4/(k ln 2): the k children outweigh the parent
k = 10
s = claim_s(k)
for prefix in [(), (1,), (10,), (3, 7), (1, 1, 1, 1)]:
    r = claim_check(k, s, prefix)
    print(f"prefix {prefix}: margin {float(r.margin):+.4f}, beta {float(r.beta):.3f}")

# any cover of a digit-restricted cylinder has s-sum bounded below
rng = random.Random(1)
prefix = tuple(rng.randint(1, k) for _ in range(8))
F = TargetSet(prefix, k)
for name, cover in [("canonical", canonical_cover(F, 10)), ("random", random_cover(F, 10, rng))]:
    cert = cover_certify(cover, k, s, prefix)
    print(f"{name} cover: {len(cover)} pieces, sum {float(cert.input_sum):.3e} >= bound {float(cert.bound):.3e},",
          f"{cert.merges} merges")
print("ln-scale check:", math.log(float(cert.input_sum) / float(cert.bound)) >= 0)

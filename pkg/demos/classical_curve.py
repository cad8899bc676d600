"""
The classical binary family
===========================

phi dual to multiplication of binary forms, degrees a = 1 and n = 2.
"""

from steinerlab import binary_mult_datum, enumerate_locus, lower_bound, upper_bound, validate
from steinerlab.jumping import estimate_dimension, fiber_at, reduce_mod
from steinerlab.tangent import classify_maximal, tangent_dimension

d = binary_mult_datum(1, 2)
print(d.phi)                      # 6 x 4, one 1 per (i, j) with i + j = column
print(validate(d).accepted)       # fiberwise surjective at the sample points

# jumping lines: s0 = (x, y) pairs with the single section (x^2, xy, y^2) up to scale
print(fiber_at(d, (2, 1)).vectors)

loci = [enumerate_locus(d, q, witnesses=4) for q in (2, 3, 5)]
for r in loci:
    print(r.q, r.strata, r.jtilde_count)          # q + 1 points, one Γ each

est = estimate_dimension(d, (2, 3, 5), reports={r.q: r for r in loci})
print("lower", lower_bound(d), "estimate", est.estimated_dim, "upper", upper_bound(d))

pair = loci[1].sample_pairs[0]
print(tangent_dimension(reduce_mod(d, 3), pair).tangent_dim)

v = classify_maximal(d, loci)
print(v.case, "|", v.triple_description)
print(v.evidence["matching_cases"])

"""
Veronese surface and a scroll
=============================

Two data whose loci are surfaces: the jumping lines of the quadric
multiplication on P2, and a block-diagonal pair of binary families.
"""

from steinerlab import enumerate_locus, scroll_datum, upper_bound, veronese_datum
from steinerlab.jumping import enumerate_j_image
from steinerlab.tangent import classify_maximal

ver = veronese_datum()
print(ver.s, ver.t, ver.h0, "upper bound", upper_bound(ver))
loci = [enumerate_locus(ver, q) for q in (2, 3, 5)]
print([r.jtilde_count for r in loci])               # q^2 + q + 1
print([len(enumerate_j_image(ver, q)) for q in (2, 3)])
print(classify_maximal(ver, loci).case)

sc = scroll_datum((1, 1), 1)
loci = [enumerate_locus(sc, q) for q in (2, 3, 5)]
print([r.jtilde_count for r in loci], [r.sigma_total for r in loci])
print([len(enumerate_j_image(sc, q)) for q in (2, 3, 5)])   # a line of Γ's
v = classify_maximal(sc, loci)
print(v.case, v.evidence["all_steps_birational"])

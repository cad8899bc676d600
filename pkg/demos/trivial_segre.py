"""
A trivial Steiner bundle
========================

phi is the identity on S* ⊗ H⁰, padded by zero columns.  Everything in
the tensor space is in the image, so every pure tensor jumps.
"""

from steinerlab import detect_trivial, enumerate_locus, full_segre_datum, pad_zero_columns, reduce
from steinerlab.jumping import estimate_dimension

base = full_segre_datum(2, 3)
for k in range(3):
    d = pad_zero_columns(base, k)
    print(d.label, "p =", detect_trivial(d), "t0 =", d.t0)

# (q + 1)(q^2 + q + 1): every point of P1 x P2
for q in (2, 3):
    print(q, enumerate_locus(base, q, witnesses=0).jtilde_count)

print(estimate_dimension(base, (2, 3)).estimated_dim)

red = reduce(pad_zero_columns(base, 2))
print(red.p, red.kernel_basis.dim, red.reduced.t)

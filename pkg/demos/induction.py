"""
Dropping s by one
=================

Quotienting by a jumping pair Λ = s0 ⊗ Γ gives a datum with s - 1 and
t - f0.  For binary forms of degree a = 2 this lands on degree a = 1.
"""

from steinerlab import binary_mult_datum, fiber_at, induction_step
from steinerlab.jumping import JumpingPair
from steinerlab.linalg import QQ
from steinerlab.tangent import induction_chain

d = binary_mult_datum(2, 2)
s0 = (QQ(1), QQ(0), QQ(0))
pair = JumpingPair(s0, fiber_at(d, s0))

raw = induction_step(d, pair, reduce_result=False)
print((d.s, d.t), "->", (raw.s, raw.t))

low = induction_step(d, pair)
print(low.image.flat == binary_mult_datum(1, 2).image.flat)

# the same walk over F_5, with the point counts at each level
for level in induction_chain(binary_mult_datum(3, 2), 5):
    print(level["s"], level["t"], level["sigma_total"], level["birational"])

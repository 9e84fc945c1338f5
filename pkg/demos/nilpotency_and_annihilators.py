#!/usr/bin/env python3
"""Square-zero pairs: where uniform nil exponents live and where they fail.

Over the triangular algebras every product b*a*c*u built from a^2 = 0 and
b*c = 0 is nilpotent with a small uniform exponent. The full 2x2 algebra
contains non-nilpotent such products (ba can be a matrix unit), and over
the integers no single polynomial can annihilate every ab.
"""

import random

from lpilab import (
    finite_annihilator,
    infinite_counterexample,
    nil_exponent_search,
    parse_algebra,
    unipoly_eval,
)
from lpilab.matrix_algebra import matrix_unit
from lpilab.rings import ZZ, PrimeField, UniPoly

for desc in ("T2@Fp:2", "T3@Fp:2"):
    v = nil_exponent_search(parse_algebra(desc))
    d = v.details
    print(f"{desc}: {v.outcome}, minimal uniform m = {d['minimal_m_nilpotent']} "
          f"over {d['quadruples']} quadruples")

v = nil_exponent_search(parse_algebra("M2@Fp:2"))
d = v.details
print(f"M2@Fp:2: {v.outcome}; {d['non_nilpotent']} of {d['quadruples']} products "
      f"are not nilpotent at all, the rest die by m = {d['minimal_m_nilpotent']}")
w = v.witness
print(f"  e.g. b={w['b'].as_lists()} a={w['a'].as_lists()} "
      f"c={w['c'].as_lists()} u={w['u'].as_lists()} -> bacu={w['bacu'].as_lists()}")

# the finite escape hatch: one polynomial annihilates every ab at once
res = finite_annihilator(parse_algebra("M2@Fp:2"))
print(f"annihilator over M2(F2): g = {res.g.format()} "
      f"(degree {res.g.degree}, verified on {res.pairs_checked} pairs)")

# no such g exists over ZZ; any candidate dies within deg(g)+1 trials
rng = random.Random(4)
coeffs = [rng.randint(-3, 3) for _ in range(4)] + [1]
g = UniPoly(ZZ, coeffs)
hit = infinite_counterexample(g)
print(f"candidate g = {g.format()} over ZZ fails at t = {hit.t} "
      f"(trial {hit.trials}): g(ab) = {hit.value.as_lists()}")
assert hit.a.mul(hit.a).is_zero() and hit.b.mul(hit.b).is_zero()
assert not unipoly_eval(g, hit.a.mul(hit.b)).is_zero()

# the celebrated pair behind all of this
for ring in (PrimeField(2), ZZ):
    a = matrix_unit(ring, 2, 2, 1)
    b = matrix_unit(ring, 2, 1, 2)
    ba = b.mul(a)
    print(f"over {ring.descriptor()}: a^2 = 0, b^2 = 0, but ba = {ba.as_lists()} "
          f"is idempotent, (ba)^16 = {ba.power(16).as_lists()}")

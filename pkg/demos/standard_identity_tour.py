#!/usr/bin/env python3
"""Walk through the standard polynomial story on 2x2 matrices.

S_4 vanishes identically on M_2(k); S_3 does not, and the checker hands
back the first violating triple it meets. The AL family repackages S_2n
with an inverted tail so every word has total exponent sum zero.
"""

from lpilab import (
    al_f2,
    al_verify,
    check_lpi,
    evaluate,
    parse_algebra,
    standard_polynomial,
)

alg = parse_algebra("M2@Fp:2")

print("S_4 on M2(F2), full 16^4 scan:")
v = check_lpi(alg, standard_polynomial(4), mode="exhaustive")
print(f"  outcome={v.outcome}  evaluations={v.evaluations}  ({v.elapsed_ms} ms)")

print("S_3 on the same algebra:")
v = check_lpi(alg, standard_polynomial(3), mode="exhaustive")
print(f"  outcome={v.outcome} after {v.evaluations} tuples")
for g, m in sorted(v.witness["assignment"].items()):
    print(f"  x{g} = {m.as_lists()}")
print(f"  S_3 value = {v.witness['value'].as_lists()}")

# sanity: feed the witness straight back through the evaluator
redo = evaluate(standard_polynomial(3), v.witness["assignment"])
assert redo == v.witness["value"]
print("  witness re-evaluates to the same nonzero matrix")

print("AL family member for n=2 (24 + 24 terms):")
f2 = al_f2(2)
from lpilab.freegroup import Word

print(f"  {len(f2.terms)} words; the identity permutation contributes "
      f"coefficient {f2.coefficient(Word())} at the empty word")
v = al_verify(2, 2, mode="exhaustive")
print(f"  al_verify(2, F_2): outcome={v.outcome}, "
      f"{v.evaluations} tuples scanned on ground '{v.details['ground']}'")

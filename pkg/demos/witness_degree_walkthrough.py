#!/usr/bin/env python3
"""From a Laurent identity to a concrete matrix-size bound.

Takes 1 - x*y*x^-1, normalizes away any zero-total words, reads off the
exponent profile, and turns the witness degree into the size and dimension
bounds a counterexample search would need to cover.
"""

from lpilab import bounds_from_d, normalize, profile
from lpilab.textio import parse_element

for text in ("1 - x1*x2*x1^-1", "1 - x1^2 + x1^5", "1 - x1^-2 + x1^3"):
    e = parse_element(text)
    fixed, var, k = normalize(e)
    l, r, d = profile(fixed)
    size, dim = bounds_from_d(d)
    print(f"{text}")
    if var is not None:
        print(f"  normalized via x{var} -> x{var}^{k}: {fixed.format()}")
    print(f"  profile l={l} r={r}  witness degree d={d}")
    print(f"  => check fields up to size {size}, matrices up to {dim}x{dim}")

# a word with every total zero cannot be normalized one variable at a time
# if each candidate k is banned; the commutator is the classic stuck case
from lpilab.errors import Inadmissible

try:
    normalize(parse_element("x1*x2*x1^-1*x2^-1 - 1"))
except Inadmissible as err:
    print(f"commutator identity: rejected as expected ({err})")

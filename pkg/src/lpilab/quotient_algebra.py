"""The separating example: F = R<x,y> / (x^2, y^2).

Normal forms are spanned by the alternating words in the letters x and y,
the empty word being 1. Two basis words multiply by concatenation, and the
product is zero exactly when the junction letters coincide, because that
junction is an x^2 or a y^2. Every element is a finite sum, so no degree
truncation is ever needed even though F is infinite dimensional.

Units are certified constructively only. A product of factors 1 + c*s
with s a single letter inverts by reversing the order and flipping signs,
since (c*s)^2 = 0; nothing else is certified, and elements like 1 + xy
genuinely have no inverse here (their geometric series never terminates).
"""

from .errors import NonUnit, PreconditionError, RingMismatch

LETTERS = ("x", "y")


def _check_word(w):
    for a, b in zip(w, w[1:]):
        if a == b:
            raise PreconditionError(f"not an alternating word: {w!r}")
    for ch in w:
        if ch not in LETTERS:
            raise PreconditionError(f"letter outside x, y: {w!r}")
    return w


class QuotientElement:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms=()):
        collected = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for w, c in items:
            _check_word(w)
            c = ring.coerce(c)
            if w in collected:
                c = ring.add(collected[w], c)
            if c == ring.zero:
                collected.pop(w, None)
            else:
                collected[w] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", collected)

    def __setattr__(self, name, value):
        raise AttributeError("QuotientElement is immutable")

    @classmethod
    def zero(cls, ring):
        return cls(ring)

    @classmethod
    def one(cls, ring):
        return cls(ring, [("", ring.one)])

    @classmethod
    def letter(cls, ring, s):
        if s not in LETTERS:
            raise PreconditionError(f"letter must be x or y: {s!r}")
        return cls(ring, [(s, ring.one)])

    def is_zero(self):
        return not self.terms

    def support_size(self):
        return len(self.terms)

    def _same_ring(self, other):
        if not isinstance(other, QuotientElement) or other.ring != self.ring:
            raise RingMismatch("quotient elements live over different rings")

    def add(self, other):
        self._same_ring(other)
        R = self.ring
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = R.add(out.get(w, R.zero), c)
            if s == R.zero:
                out.pop(w, None)
            else:
                out[w] = s
        return QuotientElement(R, out)

    __add__ = add

    def __neg__(self):
        R = self.ring
        return QuotientElement(R, {w: R.neg(c) for w, c in self.terms.items()})

    def __sub__(self, other):
        return self.add(-other)

    def mul(self, other):
        self._same_ring(other)
        R = self.ring
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                if w1 and w2 and w1[-1] == w2[0]:
                    continue
                w = w1 + w2
                s = R.add(out.get(w, R.zero), R.mul(c1, c2))
                if s == R.zero:
                    out.pop(w, None)
                else:
                    out[w] = s
        return QuotientElement(R, out)

    __mul__ = mul

    def scale(self, c):
        R = self.ring
        c = R.coerce(c)
        out = {}
        for w, v in self.terms.items():
            s = R.mul(c, v)
            if s != R.zero:
                out[w] = s
        return QuotientElement(R, out)

    def power(self, k):
        if k < 0:
            raise PreconditionError("power exponent must be >= 0")
        acc = QuotientElement.one(self.ring)
        for _ in range(k):
            acc = acc.mul(self)
        return acc

    def one_like(self):
        return QuotientElement.one(self.ring)

    def zero_like(self):
        return QuotientElement.zero(self.ring)

    def terms_sorted(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def format(self):
        if not self.terms:
            return "0"
        R = self.ring
        parts = []
        for w, c in self.terms_sorted():
            neg = R.is_neg(c)
            mag = R.neg(c) if neg else c
            word = "*".join(w) if w else "1"
            if not w:
                body = R.format(mag)
            elif mag == R.one:
                body = word
            else:
                body = f"{R.format(mag)}*{word}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __eq__(self, other):
        return (
            isinstance(other, QuotientElement)
            and other.ring == self.ring
            and other.terms == self.terms
        )

    def __hash__(self):
        return hash((self.ring, tuple(self.terms_sorted())))

    def __repr__(self):
        return f"QuotientElement({self.ring!r}, {self.format()})"


class QuotientUnit:
    """A certified unit: the element, its inverse and the factor list that
    produced both. The certificate is checked at construction, so holding
    a QuotientUnit is proof of invertibility."""

    __slots__ = ("value", "inverse", "factors")

    def __init__(self, value, inverse, factors):
        one = QuotientElement.one(value.ring)
        if value.mul(inverse) != one or inverse.mul(value) != one:
            raise PreconditionError("certificate failure: value * inverse != 1")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "inverse", inverse)
        object.__setattr__(self, "factors", tuple(factors))

    def __setattr__(self, name, value):
        raise AttributeError("QuotientUnit is immutable")

    def __repr__(self):
        return f"QuotientUnit({self.value.format()})"


def q_unit(ring, factors):
    """Build the unit (1 + c1*s1)(1 + c2*s2)... from (coefficient, letter)
    pairs. Each factor inverts to 1 - c*s on its own, so the whole product
    inverts as the reversed product of those."""
    factors = list(factors)
    if not factors:
        return QuotientUnit(QuotientElement.one(ring), QuotientElement.one(ring), ())
    one = QuotientElement.one(ring)
    value = one
    for c, s in factors:
        if s not in LETTERS:
            raise PreconditionError(
                f"factor 1 + c*{s!r} is not elementary; only single letters are certified"
            )
        value = value.mul(one.add(QuotientElement.letter(ring, s).scale(c)))
    inverse = one
    for c, s in reversed(factors):
        flipped = ring.neg(ring.coerce(c))
        inverse = inverse.mul(one.add(QuotientElement.letter(ring, s).scale(flipped)))
    return QuotientUnit(value, inverse, factors)


def q_evaluate(e, assignment):
    """Evaluate a Laurent element at quotient elements.

    Positive exponents work for any element. A negative exponent demands a
    QuotientUnit in that slot; a bare element there raises NonUnit because
    general invertibility in F is not decided, only certified.
    """
    if isinstance(assignment, dict):
        assigned = dict(assignment)
    else:
        assigned = {i + 1: v for i, v in enumerate(assignment)}
    values = {}
    ring = None
    for g, v in assigned.items():
        if isinstance(v, QuotientUnit):
            values[g] = (v.value, v.inverse)
        elif isinstance(v, QuotientElement):
            values[g] = (v, None)
        else:
            raise PreconditionError(f"x{g} is assigned {v!r}")
        ring = values[g][0].ring
    if ring is None:
        raise PreconditionError("empty assignment")
    need = set()
    for w in e.terms:
        need |= w.variables()
    missing = need - set(values)
    if missing:
        raise PreconditionError(f"unassigned variables: {sorted(missing)}")
    from .rings import embed_into

    emb = embed_into(e.ring, ring)
    acc = QuotientElement.zero(ring)
    ident = QuotientElement.one(ring)
    for w, c in e.terms.items():
        val = ident
        for g, exp in w.syllables:
            fwd, inv = values[g]
            if exp < 0:
                if inv is None:
                    raise NonUnit(
                        f"x{g} appears with a negative exponent but is not a certified unit"
                    )
                val = val.mul(inv.power(-exp))
            else:
                val = val.mul(fwd.power(exp))
        acc = acc.add(val.scale(emb(c)))
    return acc


def sample_element(ring, rng, max_support=8, max_len=5):
    """A random element with small support. An alternating word is fixed by
    its first letter and its length, which keeps the draw uniform enough
    for coverage without any rejection."""
    terms = []
    for _ in range(rng.randrange(1, max_support + 1)):
        length = rng.randrange(0, max_len + 1)
        if length == 0:
            w = ""
        else:
            first = rng.choice(LETTERS)
            other = "y" if first == "x" else "x"
            w = "".join(first if i % 2 == 0 else other for i in range(length))
        c = _nonzero_scalar(ring, rng)
        terms.append((w, c))
    return QuotientElement(ring, terms)


def _nonzero_scalar(ring, rng):
    from .rings import PrimeField

    if isinstance(ring, PrimeField):
        return rng.randrange(1, ring.p) if ring.p > 1 else 1
    c = 0
    while c == 0:
        c = rng.randint(-3, 3)
    return c

"""Exact coefficient arithmetic.

Scalars are plain Python values (int for the integers, Fraction for the
rationals, a reduced int in [0, p) for a prime field) and the ring object
carries the operations. Keeping values unboxed matters: the search engines
index millions of products and per-element wrapper objects would dominate
the runtime. The price is that a bare int does not know its ring, so every
structure that stores scalars (polynomials, matrices, formal sums) also
stores the ring object and refuses to mix rings.

Univariate polynomials live here too, as coefficient sequences, together
with the exact Vandermonde solver used to split a polynomial relation into
homogeneous components.
"""

from fractions import Fraction

from .errors import PreconditionError, RingMismatch, SolveError


class _NegativeInfinity:
    """Degree of the zero polynomial. Compares below every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __repr__(self):
        return "NEG_INF"


NEG_INF = _NegativeInfinity()


def _is_prime(n):
    # deterministic Miller-Rabin; bases 2,3,5,7 decide every n < 3_215_031_751,
    # comfortably past the 2**31 modulus bound
    if n < 2:
        return False
    for q in (2, 3, 5, 7):
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class IntegerRing:
    """Arbitrary-precision integers. Units are 1 and -1."""

    is_field = False
    zero = 0
    one = 1

    def coerce(self, v):
        if isinstance(v, bool) or not isinstance(v, int):
            raise RingMismatch(f"not an integer: {v!r}")
        return v

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def from_int(self, n):
        return n

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if a in (1, -1):
            return a
        raise PreconditionError(f"{a} is not a unit of ZZ")

    def is_neg(self, a):
        return a < 0

    def format(self, a):
        return str(a)

    def descriptor(self):
        return "ZZ"

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")

    def __repr__(self):
        return "ZZ"


class RationalField:
    """Fractions in lowest terms. Internal plumbing for solving over ZZ."""

    is_field = True
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, v):
        if isinstance(v, bool):
            raise RingMismatch(f"not a rational: {v!r}")
        if isinstance(v, (int, Fraction)):
            return Fraction(v)
        raise RingMismatch(f"not a rational: {v!r}")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def from_int(self, n):
        return Fraction(n)

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        if a == 0:
            raise PreconditionError("division by zero in QQ")
        return 1 / Fraction(a)

    def is_neg(self, a):
        return a < 0

    def format(self, a):
        return str(a)

    def descriptor(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The field of p elements, residues stored reduced in [0, p).

    The modulus stays below 2**31 so every product of two residues fits in
    a native machine word before reduction; bignum arithmetic is reserved
    for ZZ where it is actually needed.
    """

    is_field = True

    def __init__(self, p):
        if not isinstance(p, int) or not 2 <= p < 2**31:
            raise PreconditionError(f"modulus must be an integer in [2, 2**31): {p!r}")
        if not _is_prime(p):
            raise PreconditionError(f"{p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def coerce(self, v):
        if isinstance(v, bool) or not isinstance(v, int):
            raise RingMismatch(f"not a residue: {v!r}")
        return v % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def from_int(self, n):
        return n % self.p

    def is_unit(self, a):
        return a % self.p != 0

    def inv(self, a):
        if a % self.p == 0:
            raise PreconditionError(f"division by zero mod {self.p}")
        return pow(a, -1, self.p)

    def is_neg(self, a):
        return False

    def format(self, a):
        return str(a % self.p)

    def descriptor(self):
        return f"Fp:{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"Fp:{self.p}"


ZZ = IntegerRing()
QQ = RationalField()


def ring_from_descriptor(text):
    """Parse a ring literal: ``ZZ`` or ``Fp:<prime>``."""
    if text == "ZZ":
        return ZZ
    if text.startswith("Fp:"):
        digits = text[3:]
        if not digits.isdigit():
            raise PreconditionError(f"bad prime field literal: {text!r}")
        return PrimeField(int(digits))
    raise PreconditionError(f"unknown ring literal: {text!r}")


def embed_into(src, dst):
    """A canonical embedding src -> dst as a callable, or raise.

    ZZ embeds everywhere through from_int. A ring embeds into itself by
    identity. Nothing else is canonical, in particular there is no map
    between distinct prime fields.
    """
    if src == dst:
        return lambda v: v
    if isinstance(src, IntegerRing):
        return dst.from_int
    raise RingMismatch(f"no canonical embedding {src!r} -> {dst!r}")


class UniPoly:
    """A univariate polynomial as an ascending coefficient tuple.

    The zero polynomial is the empty tuple and its degree is NEG_INF, a
    sentinel rather than -1, so degree comparisons never lie.
    """

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs=()):
        coeffs = [ring.coerce(c) for c in coeffs]
        while coeffs and coeffs[-1] == ring.zero:
            coeffs.pop()
        self.ring = ring
        self.coeffs = tuple(coeffs)

    @classmethod
    def x_power(cls, ring, k, c=1):
        """c * X**k."""
        return cls(ring, [ring.zero] * k + [ring.from_int(c) if isinstance(c, int) else c])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self):
        return not self.coeffs

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    def _same_ring(self, other):
        if not isinstance(other, UniPoly) or other.ring != self.ring:
            raise RingMismatch("polynomial rings differ")

    def __add__(self, other):
        self._same_ring(other)
        n = max(len(self.coeffs), len(other.coeffs))
        R = self.ring
        return UniPoly(R, [R.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __sub__(self, other):
        self._same_ring(other)
        n = max(len(self.coeffs), len(other.coeffs))
        R = self.ring
        return UniPoly(R, [R.sub(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self):
        R = self.ring
        return UniPoly(R, [R.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        self._same_ring(other)
        if self.is_zero() or other.is_zero():
            return UniPoly(self.ring)
        R = self.ring
        out = [R.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == R.zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = R.add(out[i + j], R.mul(a, b))
        return UniPoly(R, out)

    def divmod_by(self, divisor):
        """Long division. The divisor's leading coefficient must be a unit."""
        self._same_ring(divisor)
        if divisor.is_zero():
            raise PreconditionError("division by the zero polynomial")
        R = self.ring
        lead = divisor.coeffs[-1]
        if not R.is_unit(lead):
            raise PreconditionError("leading coefficient of divisor is not a unit")
        lead_inv = R.inv(lead)
        rem = list(self.coeffs)
        dd = len(divisor.coeffs) - 1
        if len(rem) <= dd:
            return UniPoly(R), UniPoly(R, rem)
        quot = [R.zero] * (len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k]
            if c == R.zero:
                continue
            q = R.mul(c, lead_inv)
            quot[k - dd] = q
            for i, b in enumerate(divisor.coeffs):
                rem[k - dd + i] = R.sub(rem[k - dd + i], R.mul(q, b))
        return UniPoly(R, quot), UniPoly(R, rem)

    def __eq__(self, other):
        return (
            isinstance(other, UniPoly)
            and other.ring == self.ring
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def format(self, var="X"):
        if not self.coeffs:
            return "0"
        R = self.ring
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == R.zero:
                continue
            neg = R.is_neg(c)
            mag = R.neg(c) if neg else c
            if i == 0:
                body = R.format(mag)
            else:
                x = var if i == 1 else f"{var}^{i}"
                body = x if mag == R.one else f"{R.format(mag)}*{x}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"UniPoly({self.ring!r}, {self.format()})"


def unipoly_eval(g, v, ring=None):
    """Evaluate g at v, where v is a ring scalar or an algebra element.

    An algebra element is anything with a ring tag plus one_like, mul, add
    and scale methods (matrices and quotient elements both qualify); the
    constant term becomes constant times the identity there. Coefficients
    embed through the canonical map into v's ring, which must exist.
    """
    if hasattr(v, "ring") and hasattr(v, "one_like"):
        emb = embed_into(g.ring, v.ring)
        one = v.one_like()
        acc = one.scale(v.ring.zero)
        for c in reversed(g.coeffs):
            acc = acc.mul(v).add(one.scale(emb(c)))
        return acc
    R = ring if ring is not None else g.ring
    emb = embed_into(g.ring, R)
    w = R.coerce(v)
    acc = R.zero
    for c in reversed(g.coeffs):
        acc = R.add(R.mul(acc, w), emb(c))
    return acc


def _field_for(ring):
    # exact solving happens over a field; ZZ borrows its fraction field
    if ring.is_field:
        return ring, (lambda v: v)
    if ring == ZZ:
        return QQ, Fraction
    raise PreconditionError(f"no solve field for {ring!r}")


def _invert_square(field, rows):
    """Gauss-Jordan inverse of a small square matrix of field scalars."""
    n = len(rows)
    aug = [list(rows[i]) + [field.one if j == i else field.zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != field.zero), None)
        if piv is None:
            raise SolveError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = field.inv(aug[col][col])
        aug[col] = [field.mul(inv, x) for x in aug[col]]
        for r in range(n):
            if r == col:
                continue
            f = aug[r][col]
            if f == field.zero:
                continue
            aug[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _restore(ring, field, v):
    # bring a solved field scalar back into the original ring
    if field == ring:
        return v
    if v.denominator != 1:
        raise SolveError(f"component {v} is not integral")
    return int(v)


def vandermonde_solve(ring, points, values):
    """Split values[j] = sum_i points[j]**i * p_i into the components p_i.

    Exactly len(points) components come back and the forward evaluation is
    an identity on them. Values may be ring scalars or matrices over the
    same ring; each solved component must land back inside that ring or the
    solve reports failure, since a non-representable component signals an
    inconsistency upstream.
    """
    if len(points) != len(values):
        raise PreconditionError("points and values differ in length")
    if not points:
        raise PreconditionError("empty system")
    field, lift = _field_for(ring)
    pts = [lift(ring.coerce(x)) for x in points]
    if len(set(pts)) != len(pts):
        raise PreconditionError("repeated interpolation points")
    n = len(pts)
    vrows = []
    for x in pts:
        row = [field.one]
        for _ in range(n - 1):
            row.append(field.mul(row[-1], x))
        vrows.append(row)
    W = _invert_square(field, vrows)

    first = values[0]
    if hasattr(first, "entries"):
        dim = first.n
        out = []
        for i in range(n):
            rows = [[field.zero] * dim for _ in range(dim)]
            for j, m in enumerate(values):
                if m.ring != ring:
                    raise RingMismatch("value matrix ring differs from solve ring")
                c = W[i][j]
                if c == field.zero:
                    continue
                for r in range(dim):
                    for s in range(dim):
                        rows[r][s] = field.add(rows[r][s], field.mul(c, lift(m.entries[r][s])))
            restored = [[_restore(ring, field, x) for x in row] for row in rows]
            out.append(type(first)(ring, restored))
        return out

    vals = [lift(ring.coerce(v)) for v in values]
    out = []
    for i in range(n):
        acc = field.zero
        for j, v in enumerate(vals):
            acc = field.add(acc, field.mul(W[i][j], v))
        out.append(_restore(ring, field, acc))
    return out

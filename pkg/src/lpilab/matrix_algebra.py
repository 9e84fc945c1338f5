"""Matrix test beds: full, upper-triangular and diagonal algebras over the
exact rings, with enumeration, sampling, unit detection and evaluation of
Laurent elements.

Enumeration order is row-major lexicographic on the free entries. That
order is part of the contract: "first counterexample" stays the same
artifact across runs and across worker counts, so reports can be diffed.
"""

import ast
import itertools

from .errors import CapExceeded, NonUnit, PreconditionError, RingMismatch
from .rings import PrimeField, ZZ, embed_into

DEFAULT_CAP = 2**24
DIMENSION_CAP = 6
INT_SAMPLE_BOUND = 9

_FAMILIES = {
    "M": "full",
    "T": "upper_triangular",
    "D": "diagonal",
}


class Matrix:
    __slots__ = ("ring", "n", "entries")

    def __init__(self, ring, rows):
        rows = tuple(tuple(ring.coerce(x) for x in row) for row in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise PreconditionError("matrix must be square and nonempty")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    def _compatible(self, other):
        if not isinstance(other, Matrix):
            raise PreconditionError(f"expected a Matrix, got {other!r}")
        if other.ring != self.ring:
            raise RingMismatch("matrix rings differ")
        if other.n != self.n:
            raise PreconditionError("matrix dimensions differ")

    def add(self, other):
        self._compatible(other)
        R = self.ring
        return Matrix(
            R,
            [
                [R.add(a, b) for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.entries, other.entries)
            ],
        )

    __add__ = add

    def __neg__(self):
        R = self.ring
        return Matrix(R, [[R.neg(x) for x in row] for row in self.entries])

    def __sub__(self, other):
        return self.add(-other)

    def mul(self, other):
        self._compatible(other)
        R = self.ring
        n = self.n
        a = self.entries
        b = other.entries
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = R.zero
                for k in range(n):
                    acc = R.add(acc, R.mul(a[i][k], b[k][j]))
                row.append(acc)
            rows.append(row)
        return Matrix(R, rows)

    __mul__ = mul

    def scale(self, c):
        R = self.ring
        c = R.coerce(c)
        return Matrix(R, [[R.mul(c, x) for x in row] for row in self.entries])

    def power(self, k):
        if k < 0:
            raise PreconditionError("power exponent must be >= 0")
        acc = identity(self.ring, self.n)
        base = self
        while k:
            if k & 1:
                acc = acc.mul(base)
            base = base.mul(base) if k > 1 else base
            k >>= 1
        return acc

    def is_zero(self):
        z = self.ring.zero
        return all(x == z for row in self.entries for x in row)

    def one_like(self):
        return identity(self.ring, self.n)

    def zero_like(self):
        return zeros(self.ring, self.n)

    def as_lists(self):
        return [[_plain(x) for x in row] for row in self.entries]

    def format(self):
        return str(self.as_lists()).replace(" ", "")

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.ring == self.ring
            and other.entries == self.entries
        )

    def __hash__(self):
        return hash((self.ring, self.entries))

    def __repr__(self):
        return f"Matrix({self.ring!r}, {self.format()})"


def _plain(x):
    # Fraction entries appear only transiently; reports carry ints
    return int(x) if hasattr(x, "denominator") and x.denominator == 1 else x


def identity(ring, n):
    return Matrix(ring, [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)])


def zeros(ring, n):
    return Matrix(ring, [[ring.zero] * n for _ in range(n)])


def matrix_unit(ring, n, i, j):
    """e_ij with 1-based indices, matching the e_12 style of the notation."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise PreconditionError("matrix unit index out of range")
    return Matrix(
        ring,
        [[ring.one if (r, c) == (i - 1, j - 1) else ring.zero for c in range(n)] for r in range(n)],
    )


def parse_matrix(ring, text):
    """Read the literal syntax [[0,1],[0,0]]."""
    try:
        data = ast.literal_eval(text)
    except (ValueError, SyntaxError) as exc:
        raise PreconditionError(f"bad matrix literal: {text!r}") from exc
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise PreconditionError(f"bad matrix literal: {text!r}")
    return Matrix(ring, data)


def det(m):
    """Cofactor expansion; exact in any ring, fine at the dimensions we cap."""
    n = m.n
    R = m.ring
    if n == 1:
        return m.entries[0][0]

    def expand(rows):
        k = len(rows)
        if k == 1:
            return rows[0][0]
        acc = R.zero
        for j in range(k):
            if rows[0][j] == R.zero:
                continue
            minor = [[row[c] for c in range(k) if c != j] for row in rows[1:]]
            term = R.mul(rows[0][j], expand(minor))
            acc = R.add(acc, term) if j % 2 == 0 else R.sub(acc, term)
        return acc

    return expand([list(r) for r in m.entries])


def mat_inverse(m):
    """The inverse inside the algebra, or None when m is not a unit.

    Over a field this is Gauss-Jordan elimination. Over ZZ a matrix is a
    unit exactly when its determinant is 1 or -1, and then the adjugate
    divided by the determinant stays integral.
    """
    R = m.ring
    n = m.n
    if R.is_field:
        aug = [list(row) + [R.one if j == i else R.zero for j in range(n)] for i, row in enumerate(m.entries)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != R.zero), None)
            if piv is None:
                return None
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = R.inv(aug[col][col])
            aug[col] = [R.mul(inv, x) for x in aug[col]]
            for r in range(n):
                if r == col or aug[r][col] == R.zero:
                    continue
                f = aug[r][col]
                aug[r] = [R.sub(x, R.mul(f, y)) for x, y in zip(aug[r], aug[col])]
        return Matrix(R, [row[n:] for row in aug])
    if R == ZZ:
        d = det(m)
        if d not in (1, -1):
            return None
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = [
                    [m.entries[r][c] for c in range(n) if c != i]
                    for r in range(n)
                    if r != j
                ]
                cof = det(Matrix(R, minor)) if n > 1 else 1
                if (i + j) % 2 == 1:
                    cof = -cof
                row.append(cof * d)
            rows.append(row)
        return Matrix(R, rows)
    raise PreconditionError(f"no inversion routine for ring {R!r}")


class Algebra:
    """A named family of matrices: M (full), T (upper triangular) or
    D (diagonal), of a fixed dimension over a fixed ring."""

    __slots__ = ("family", "n", "ring")

    def __init__(self, family, n, ring):
        if family not in _FAMILIES:
            raise PreconditionError(f"unknown family {family!r}; use M, T or D")
        if not isinstance(n, int) or not 1 <= n <= DIMENSION_CAP:
            raise PreconditionError(f"dimension must lie in [1, {DIMENSION_CAP}]")
        self.family = family
        self.n = n
        self.ring = ring

    def descriptor(self):
        return f"{self.family}{self.n}@{self.ring.descriptor()}"

    def positions(self):
        n = self.n
        if self.family == "M":
            return [(i, j) for i in range(n) for j in range(n)]
        if self.family == "T":
            return [(i, j) for i in range(n) for j in range(n) if j >= i]
        return [(i, i) for i in range(n)]

    def contains(self, m):
        if not isinstance(m, Matrix) or m.ring != self.ring or m.n != self.n:
            return False
        free = set(self.positions())
        z = self.ring.zero
        return all(
            m.entries[i][j] == z
            for i in range(self.n)
            for j in range(self.n)
            if (i, j) not in free
        )

    def identity(self):
        return identity(self.ring, self.n)

    def zero(self):
        return zeros(self.ring, self.n)

    def size(self):
        if not isinstance(self.ring, PrimeField):
            return None
        return self.ring.p ** len(self.positions())

    def _require_enumerable(self, cap):
        size = self.size()
        if size is None:
            raise PreconditionError(
                f"{self.descriptor()} is infinite; enumeration needs a prime field"
            )
        if size > cap:
            raise CapExceeded(
                f"{self.descriptor()} has {size} elements, over the cap {cap}; "
                "use random mode"
            )
        return size

    def enumerate_elements(self, cap=DEFAULT_CAP):
        self._require_enumerable(cap)
        p = self.ring.p
        pos = self.positions()
        n = self.n
        for vals in itertools.product(range(p), repeat=len(pos)):
            rows = [[0] * n for _ in range(n)]
            for (i, j), v in zip(pos, vals):
                rows[i][j] = v
            yield Matrix(self.ring, rows)

    def enumerate_units(self, cap=DEFAULT_CAP):
        for m in self.enumerate_elements(cap):
            inv = mat_inverse(m)
            if inv is not None and self.contains(inv):
                yield m

    def enumerate_square_zero(self, cap=DEFAULT_CAP):
        for m in self.enumerate_elements(cap):
            if m.mul(m).is_zero():
                yield m

    def sample_element(self, rng):
        pos = self.positions()
        n = self.n
        rows = [[self.ring.zero] * n for _ in range(n)]
        for i, j in pos:
            rows[i][j] = self._random_scalar(rng)
        return Matrix(self.ring, rows)

    def _random_scalar(self, rng):
        if isinstance(self.ring, PrimeField):
            return rng.randrange(self.ring.p)
        return rng.randint(-INT_SAMPLE_BOUND, INT_SAMPLE_BOUND)

    def sample_unit(self, rng, retries=256):
        for _ in range(retries):
            m = self.sample_element(rng)
            inv = mat_inverse(m)
            if inv is not None and self.contains(inv):
                return m
        raise PreconditionError(f"no unit found in {retries} draws")

    def sample_square_zero(self, rng, retries=256):
        """A random m with m*m = 0 that lies in the family.

        For the full algebra over a field this uses the rank-one shape
        v * w^T with w^T v = 0, which squares to zero by construction and
        yields the zero matrix when v does. Triangular families fall back
        to rejection over strictly upper matrices; the diagonal family has
        no square-zero element besides zero.
        """
        R = self.ring
        n = self.n
        if self.family == "D":
            return self.zero()
        if self.family == "M" and R.is_field:
            v = [self._random_scalar(rng) for _ in range(n)]
            if all(x == R.zero for x in v):
                return self.zero()
            i = next(k for k, x in enumerate(v) if x != R.zero)
            w = [self._random_scalar(rng) for _ in range(n)]
            acc = R.zero
            for k in range(n):
                if k != i:
                    acc = R.add(acc, R.mul(w[k], v[k]))
            w[i] = R.neg(R.mul(acc, R.inv(v[i])))
            m = Matrix(R, [[R.mul(v[r], w[c]) for c in range(n)] for r in range(n)])
            if not m.mul(m).is_zero():
                raise PreconditionError("square-zero construction failed")
            return m
        for _ in range(retries):
            rows = [[R.zero] * n for _ in range(n)]
            for i, j in self.positions():
                if j > i:
                    rows[i][j] = self._random_scalar(rng)
            m = Matrix(R, rows)
            if m.mul(m).is_zero():
                return m
        raise PreconditionError(f"no square-zero element found in {retries} draws")


def parse_algebra(text):
    """Read a descriptor like M2@Fp:2 or D3@ZZ."""
    from .rings import ring_from_descriptor

    if "@" not in text:
        raise PreconditionError(f"bad algebra descriptor: {text!r}")
    head, _, ringtext = text.partition("@")
    if len(head) < 2 or head[0] not in _FAMILIES or not head[1:].isdigit():
        raise PreconditionError(f"bad algebra descriptor: {text!r}")
    return Algebra(head[0], int(head[1:]), ring_from_descriptor(ringtext))


def evaluate(e, assignment, algebra=None):
    """Evaluate a Laurent element at a tuple of matrices.

    The assignment maps x1 to the first matrix and so on; a dict keyed by
    generator index works too. Words with negative exponents need the
    assigned matrix to be a unit, otherwise NonUnit is raised: evaluating
    an inverse at a singular matrix has no meaning in the algebra. This
    routine is deliberately plain (no tables, no memo beyond inverses) so
    search engines can use it as an independent re-verifier.
    """
    if isinstance(assignment, dict):
        assigned = dict(assignment)
    else:
        assigned = {i + 1: m for i, m in enumerate(assignment)}
    mats = list(assigned.values())
    if not mats:
        raise PreconditionError("empty assignment")
    first = mats[0]
    for m in mats:
        first._compatible(m)
    if algebra is not None:
        for m in mats:
            if not algebra.contains(m):
                raise PreconditionError("assigned matrix lies outside the algebra")
    need = set()
    for w in e.terms:
        need |= w.variables()
    missing = need - set(assigned)
    if missing:
        raise PreconditionError(f"unassigned variables: {sorted(missing)}")
    emb = embed_into(e.ring, first.ring)
    inverses = {}
    acc = first.zero_like()
    ident = first.one_like()
    for w, c in e.terms.items():
        val = ident
        for g, exp in w.syllables:
            base = assigned[g]
            if exp < 0:
                if g not in inverses:
                    inverses[g] = mat_inverse(base)
                base = inverses[g]
                if base is None:
                    raise NonUnit(
                        f"x{g} is assigned a non-unit but appears with a negative exponent"
                    )
                if algebra is not None and not algebra.contains(base):
                    raise NonUnit(f"inverse of x{g} leaves the algebra")
            val = val.mul(base.power(abs(exp)))
        acc = acc.add(val.scale(emb(c)))
    return acc

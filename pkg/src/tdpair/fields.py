"""Exact field arithmetic for the ground fields used across the package.

Three kinds of field are supported:

* the rationals, with elements represented by ``fractions.Fraction``,
* prime fields GF(p), with elements represented by ints in [0, p),
* quadratic extensions F(sqrt(D)), with elements represented by pairs
  (a, b) meaning a + b*sqrt(D) over the base field F.

A field object owns the arithmetic; element payloads are plain immutable
Python values.  Every element has a unique canonical representation
(fractions reduced with positive denominator, residues in [0, p)), so
``==`` on payloads is semantic equality within a fixed field.  There is
no floating point and no rounding anywhere.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import FieldError

_RATIONAL_RE = re.compile(r"^-?(0|[1-9][0-9]*)(?:/([1-9][0-9]*))?$")
_RESIDUE_RE = re.compile(r"^(0|[1-9][0-9]*)$")

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond any modulus this
    package will see."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
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


def _tonelli_shanks(a: int, p: int) -> int:
    # Square root mod an odd prime; caller guarantees a is a QR.
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


class Field:
    """Common interface; concrete fields override the arithmetic."""

    kind = "abstract"

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def is_zero(self, x) -> bool:
        return x == self.zero()

    def is_one(self, x) -> bool:
        return x == self.one()

    def power(self, x, k: int):
        """x**k with k any integer (negative k inverts first)."""
        if k < 0:
            x, k = self.inv(x), -k
        result = self.one()
        while k:
            if k & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            k >>= 1
        return result

    def product(self, items):
        result = self.one()
        for x in items:
            result = self.mul(result, x)
        return result

    def multiplicative_order(self, x) -> int:
        if self.is_zero(x):
            raise FieldError("order of zero is undefined")
        k, acc = 1, x
        while not self.is_one(acc):
            acc = self.mul(acc, x)
            k += 1
            if k > 10**7:
                raise FieldError("element has no small multiplicative order")
        return k

    # subclasses: zero, one, from_int, add, neg, mul, inv,
    # characteristic, parse, format, sort_key, is_square, sqrt, describe


class RationalField(Field):
    kind = "rational"

    def zero(self):
        return _QZERO

    def one(self):
        return _QONE

    def from_int(self, n: int):
        return Fraction(n)

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        if x == 0:
            raise FieldError("division by zero")
        return 1 / x

    def div(self, x, y):
        if y == 0:
            raise FieldError("division by zero")
        return x / y

    def characteristic(self) -> int:
        return 0

    def parse(self, token: str):
        m = _RATIONAL_RE.match(token)
        if not m:
            raise FieldError(f"not a canonical rational: {token!r}")
        value = Fraction(token)
        if str(value) != token:
            raise FieldError(f"rational not in lowest terms: {token!r}")
        return value

    def format(self, x) -> str:
        return str(x)

    def sort_key(self, x):
        return x

    def is_square(self, x) -> bool:
        if x < 0:
            return False
        n, d = x.numerator, x.denominator
        return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d

    def sqrt(self, x):
        """Canonical (nonnegative) square root, or None."""
        if not self.is_square(x):
            return None
        return Fraction(math.isqrt(x.numerator), math.isqrt(x.denominator))

    def describe(self) -> dict:
        return {"type": "rational"}

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")


_QZERO = Fraction(0)
_QONE = Fraction(1)

QQ = RationalField()


class PrimeField(Field):
    kind = "gfp"

    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"modulus {p} is not prime")
        self.p = p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n: int):
        return n % self.p

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def neg(self, x):
        return -x % self.p

    def mul(self, x, y):
        return (x * y) % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise FieldError("division by zero")
        return pow(x, -1, self.p)

    def characteristic(self) -> int:
        return self.p

    def parse(self, token: str):
        if not _RESIDUE_RE.match(token):
            raise FieldError(f"not a canonical residue: {token!r}")
        value = int(token)
        if value >= self.p:
            raise FieldError(f"residue {value} out of range for GF({self.p})")
        return value

    def format(self, x) -> str:
        return str(x)

    def sort_key(self, x):
        return x

    def is_square(self, x) -> bool:
        x %= self.p
        if x == 0 or self.p == 2:
            return True
        return pow(x, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, x):
        """Canonical (smaller-residue) square root, or None."""
        x %= self.p
        if self.p == 2:
            return x
        if not self.is_square(x):
            return None
        r = _tonelli_shanks(x, self.p)
        return min(r, (-r) % self.p)

    def elements(self):
        return range(self.p)

    def describe(self) -> dict:
        return {"type": "gfp", "p": self.p}

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("gfp", self.p))


_GF_CACHE: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    field = _GF_CACHE.get(p)
    if field is None:
        field = _GF_CACHE[p] = PrimeField(p)
    return field


class QuadraticExtension(Field):
    """F(sqrt(D)) for a non-square D in the base field F.

    Only single extensions of the rationals or of a prime field are
    supported, which is all the recurrence fitting ever constructs.
    Characteristic 2 is refused: Frobenius makes every element of GF(2^k)
    a square, so no valid discriminant exists there.
    """

    kind = "quadratic_ext"

    def __init__(self, base: Field, disc):
        if isinstance(base, QuadraticExtension):
            raise FieldError("nested quadratic extensions are not supported")
        if base.characteristic() == 2:
            raise FieldError("no quadratic extension in characteristic 2")
        if base.is_zero(disc) or base.is_square(disc):
            raise FieldError("discriminant must be a non-square in the base field")
        self.base = base
        self.disc = disc
        self._zero = (base.zero(), base.zero())
        self._one = (base.one(), base.zero())

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def from_int(self, n: int):
        return (self.base.from_int(n), self.base.zero())

    def embed(self, x):
        """Lift a base-field payload into the extension."""
        return (x, self.base.zero())

    def generator(self):
        """The element sqrt(D)."""
        return (self.base.zero(), self.base.one())

    def in_base(self, x) -> bool:
        return self.base.is_zero(x[1])

    def base_part(self, x):
        if not self.in_base(x):
            raise FieldError("element does not lie in the base field")
        return x[0]

    def conjugate(self, x):
        return (x[0], self.base.neg(x[1]))

    def norm(self, x):
        b = self.base
        return b.sub(b.mul(x[0], x[0]), b.mul(self.disc, b.mul(x[1], x[1])))

    def add(self, x, y):
        b = self.base
        return (b.add(x[0], y[0]), b.add(x[1], y[1]))

    def sub(self, x, y):
        b = self.base
        return (b.sub(x[0], y[0]), b.sub(x[1], y[1]))

    def neg(self, x):
        b = self.base
        return (b.neg(x[0]), b.neg(x[1]))

    def mul(self, x, y):
        b, d = self.base, self.disc
        a0, a1 = x
        c0, c1 = y
        return (
            b.add(b.mul(a0, c0), b.mul(d, b.mul(a1, c1))),
            b.add(b.mul(a0, c1), b.mul(a1, c0)),
        )

    def inv(self, x):
        n = self.norm(x)
        if self.base.is_zero(n):
            raise FieldError("division by zero")
        ninv = self.base.inv(n)
        return (self.base.mul(x[0], ninv), self.base.neg(self.base.mul(x[1], ninv)))

    def characteristic(self) -> int:
        return self.base.characteristic()

    def parse(self, token: str):
        raise FieldError("quadratic extension scalars have no document syntax")

    def format(self, x) -> str:
        b = self.base
        return f"{b.format(x[0])}+{b.format(x[1])}*sqrt({b.format(self.disc)})"

    def sort_key(self, x):
        b = self.base
        return (b.sort_key(x[0]), b.sort_key(x[1]))

    def is_square(self, x) -> bool:
        return self.sqrt(x) is not None

    def sqrt(self, x):
        # Solve (u + v*sqrt(D))^2 = a + b*sqrt(D):
        #   u^2 + D v^2 = a  and  2uv = b.
        b = self.base
        a_c, b_c = x
        two = b.from_int(2)
        if b.is_zero(b_c):
            u = b.sqrt(a_c)
            if u is not None:
                return (u, b.zero())
            v = b.sqrt(b.div(a_c, self.disc))
            if v is not None:
                return (b.zero(), v)
            return None
        m = b.sqrt(self.norm(x))
        if m is None:
            return None
        for norm_root in (m, b.neg(m)):
            usq = b.div(b.add(a_c, norm_root), two)
            u = b.sqrt(usq)
            if u is not None and not b.is_zero(u):
                v = b.div(b_c, b.mul(two, u))
                root = (u, v)
                if self.mul(root, root) == x:
                    return min(root, self.neg(root), key=self.sort_key)
        return None

    def elements(self):
        if not isinstance(self.base, PrimeField):
            raise FieldError("cannot enumerate an infinite field")
        for a in self.base.elements():
            for b in self.base.elements():
                yield (a, b)

    def describe(self) -> dict:
        return {
            "type": "quadratic_ext",
            "base": self.base.describe(),
            "disc": self.base.format(self.disc),
        }

    def __repr__(self):
        return f"{self.base!r}(sqrt({self.base.format(self.disc)}))"

    def __eq__(self, other):
        return (
            isinstance(other, QuadraticExtension)
            and other.base == self.base
            and other.disc == self.disc
        )

    def __hash__(self):
        return hash(("quadratic_ext", self.base, self.disc))


def field_from_descriptor(doc) -> Field:
    """Build a field from its JSON descriptor ({"type": "rational"} or
    {"type": "gfp", "p": p})."""
    if not isinstance(doc, dict) or "type" not in doc:
        raise FieldError(f"bad field descriptor: {doc!r}")
    if doc["type"] == "rational":
        return QQ
    if doc["type"] == "gfp":
        p = doc.get("p")
        if not isinstance(p, int):
            raise FieldError(f"bad gfp modulus: {p!r}")
        return GF(p)
    raise FieldError(f"unknown field type: {doc['type']!r}")

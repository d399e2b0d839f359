"""Polynomials over a field, characteristic polynomials, and in-field
root finding.

Root finding is complete for the fields this package constructs:

* over Q: rational-root search on the integer-cleared polynomial with
  repeated deflation (divisors come from exact integer factorization),
* over GF(p): exhaustive evaluation for small p, otherwise
  gcd(f, x^p - x) followed by randomized-but-reseeded equal-degree
  splitting,
* over GF(p)(sqrt(D)): exhaustive evaluation over the p^2 elements,
* over Q(sqrt(D)): rational candidates from the coordinate polynomials
  plus monic integer quadratic divisors of the norm polynomial (every
  root a + b*sqrt(D) with b != 0 has a degree-2 minimal polynomial over
  Q dividing the norm polynomial, and by the Gauss lemma its monicized
  form has integer trace and constant term with t | h(0)).
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .errors import FieldError, ShapeError
from .fields import Field, PrimeField, QQ, QuadraticExtension, RationalField
from .linalg import Matrix

_BRUTE_FORCE_FIELD_CAP = 1 << 16
_QUAD_DIVISOR_CAP = 1 << 21


class Polynomial:
    """Coefficients ascending by degree; no trailing zeros (the zero
    polynomial has an empty coefficient tuple)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        coeffs = list(coeffs)
        zero = field.zero()
        while coeffs and coeffs[-1] == zero:
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, field: Field) -> "Polynomial":
        return cls(field, [])

    @classmethod
    def constant(cls, field: Field, c) -> "Polynomial":
        return cls(field, [c])

    @classmethod
    def x(cls, field: Field) -> "Polynomial":
        return cls(field, [field.zero(), field.one()])

    @classmethod
    def from_int_coeffs(cls, field: Field, coeffs) -> "Polynomial":
        return cls(field, [field.from_int(c) for c in coeffs])

    @classmethod
    def from_roots(cls, field: Field, roots) -> "Polynomial":
        acc = cls(field, [field.one()])
        for r in roots:
            acc = acc.mul(cls(field, [field.neg(r), field.one()]))
        return acc

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and other.field == self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = [f"{self.field.format(c)}*x^{i}" for i, c in enumerate(self.coeffs)]
        return "Poly(" + " + ".join(terms) + ")"

    def add(self, other: "Polynomial") -> "Polynomial":
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return Polynomial(f, out)

    def neg(self) -> "Polynomial":
        return Polynomial(self.field, [self.field.neg(c) for c in self.coeffs])

    def sub(self, other: "Polynomial") -> "Polynomial":
        return self.add(other.neg())

    def mul(self, other: "Polynomial") -> "Polynomial":
        f = self.field
        if self.is_zero() or other.is_zero():
            return Polynomial.zero(f)
        zero = f.zero()
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == zero:
                continue
            for j, b in enumerate(other.coeffs):
                if b != zero:
                    out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Polynomial(f, out)

    def scale(self, c) -> "Polynomial":
        f = self.field
        return Polynomial(f, [f.mul(c, a) for a in self.coeffs])

    def shift_up(self, k: int = 1) -> "Polynomial":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Polynomial(self.field, [self.field.zero()] * k + list(self.coeffs))

    def monic(self) -> "Polynomial":
        if self.is_zero():
            raise ValueError("cannot normalize the zero polynomial")
        return self.scale(self.field.inv(self.leading()))

    def divmod(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        div = other.coeffs
        dd = len(div) - 1
        lead_inv = f.inv(div[-1])
        quot = [f.zero()] * max(0, len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c == f.zero():
                continue
            q = f.mul(c, lead_inv)
            quot[i - dd] = q
            for j, d in enumerate(div):
                rem[i - dd + j] = f.sub(rem[i - dd + j], f.mul(q, d))
        return Polynomial(f, quot), Polynomial(f, rem)

    def mod(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[1]

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.mod(b)
        if a.is_zero():
            return a
        return a.monic()

    def pow_mod(self, exponent: int, modulus: "Polynomial") -> "Polynomial":
        result = Polynomial.constant(self.field, self.field.one())
        base = self.mod(modulus)
        while exponent:
            if exponent & 1:
                result = result.mul(base).mod(modulus)
            base = base.mul(base).mod(modulus)
            exponent >>= 1
        return result

    def evaluate(self, x):
        f = self.field
        acc = f.zero()
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def deflate(self, root) -> "Polynomial":
        """Exact synthetic division by (x - root)."""
        f = self.field
        out = []
        acc = f.zero()
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, root), c)
            out.append(acc)
        remainder = out.pop()
        if remainder != f.zero():
            raise ValueError("deflation by a non-root")
        out.reverse()
        return Polynomial(f, out)


def char_poly(m: Matrix) -> Polynomial:
    """Monic characteristic polynomial det(xI - m) via exact Hessenberg
    reduction over the field."""
    if not m.is_square:
        raise ShapeError("characteristic polynomial needs a square matrix")
    f = m.field
    n = m.n_rows
    zero, one = f.zero(), f.one()
    h = [list(row) for row in m.rows]
    for j in range(n - 2):
        pivot = None
        for i in range(j + 1, n):
            if h[i][j] != zero:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != j + 1:
            h[pivot], h[j + 1] = h[j + 1], h[pivot]
            for row in h:
                row[pivot], row[j + 1] = row[j + 1], row[pivot]
        inv_pivot = f.inv(h[j + 1][j])
        for i in range(j + 2, n):
            if h[i][j] == zero:
                continue
            factor = f.mul(h[i][j], inv_pivot)
            row_i, row_p = h[i], h[j + 1]
            for k in range(j, n):
                row_i[k] = f.sub(row_i[k], f.mul(factor, row_p[k]))
            for row in h:
                row[j + 1] = f.add(row[j + 1], f.mul(factor, row[i]))
    # Characteristic polynomials of the leading blocks of a Hessenberg
    # matrix satisfy a three-term-style expansion along the last column.
    polys = [[one]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        cur = [zero] + list(prev)
        hkk = h[k - 1][k - 1]
        for i, c in enumerate(prev):
            cur[i] = f.sub(cur[i], f.mul(hkk, c))
        subdiag = one
        for m_back in range(1, k):
            subdiag = f.mul(subdiag, h[k - m_back][k - m_back - 1])
            if subdiag == zero:
                break
            coef = f.mul(h[k - 1 - m_back][k - 1], subdiag)
            if coef == zero:
                continue
            lower = polys[k - 1 - m_back]
            for i, c in enumerate(lower):
                cur[i] = f.sub(cur[i], f.mul(coef, c))
        polys.append(cur)
    return Polynomial(f, polys[n])


def _factorize(n: int) -> dict:
    """Prime factorization of n >= 1: trial division then Pollard rho."""
    factors: dict[int, int] = {}

    def record(p):
        factors[p] = factors.get(p, 0) + 1

    def rho(m):
        if m % 2 == 0:
            return 2
        rng = random.Random(m)
        while True:
            x = rng.randrange(2, m - 1)
            y, c, d = x, rng.randrange(1, m - 1), 1
            while d == 1:
                x = (x * x + c) % m
                y = (y * y + c) % m
                y = (y * y + c) % m
                d = math.gcd(abs(x - y), m)
            if d != m:
                return d

    def split(m):
        if m == 1:
            return
        if _is_prime_cached(m):
            record(m)
            return
        d = rho(m)
        split(d)
        split(m // d)

    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        while n % p == 0:
            record(p)
            n //= p
    p = 53
    while p * p <= n and p < 100000:
        while n % p == 0:
            record(p)
            n //= p
        p += 2
    split(n)
    return factors


def _is_prime_cached(n: int) -> bool:
    from .fields import is_prime

    return is_prime(n)


def _divisors(n: int):
    """All positive divisors of n >= 1."""
    divs = [1]
    for p, e in _factorize(n).items():
        new = []
        pk = 1
        for _ in range(e + 1):
            new.extend(d * pk for d in divs)
            pk *= p
        divs = new
    return sorted(divs)


def _rational_roots_of_int_poly(coeffs: list[int]):
    """All rational roots (with multiplicity) of a nonzero integer
    polynomial given by ascending coefficients."""
    poly = Polynomial(QQ, [Fraction(c) for c in coeffs])
    roots = []
    # Strip roots at zero first so the constant term is nonzero.
    zero_mult = 0
    while not poly.is_zero() and poly.coeffs[0] == 0 and poly.degree > 0:
        poly = Polynomial(QQ, poly.coeffs[1:])
        zero_mult += 1
    if zero_mult:
        roots.append((Fraction(0), zero_mult))
    if poly.degree <= 0:
        return roots
    c0 = abs(int(poly.coeffs[0].numerator))
    cn = abs(int(poly.coeffs[-1].numerator))
    num_divs = _divisors(c0)
    den_divs = _divisors(cn)
    candidates = set()
    for r in num_divs:
        for s in den_divs:
            q = Fraction(r, s)
            candidates.add(q)
            candidates.add(-q)
    for cand in sorted(candidates):
        if poly.evaluate(cand) != 0:
            continue
        mult = 0
        while True:
            try:
                poly = poly.deflate(cand)
            except ValueError:
                break
            mult += 1
            if poly.degree <= 0:
                break
        roots.append((cand, mult))
        if poly.degree <= 0:
            break
    return roots


def _roots_rational(p: Polynomial):
    denom_lcm = 1
    for c in p.coeffs:
        denom_lcm = denom_lcm * c.denominator // math.gcd(denom_lcm, c.denominator)
    int_coeffs = [int(c * denom_lcm) for c in p.coeffs]
    content = 0
    for c in int_coeffs:
        content = math.gcd(content, abs(c))
    int_coeffs = [c // content for c in int_coeffs]
    return _rational_roots_of_int_poly(int_coeffs)


def _roots_prime_field(p: Polynomial):
    field: PrimeField = p.field
    q = field.p
    roots = []
    if q <= _BRUTE_FORCE_FIELD_CAP:
        simple = [x for x in range(q) if p.evaluate(x) == 0]
    else:
        x_poly = Polynomial.x(field)
        frob = x_poly.pow_mod(q, p.monic())
        g = p.gcd(frob.sub(x_poly))
        simple = sorted(_equal_degree_one_split(g)) if not g.is_zero() and g.degree > 0 else []
    for r in simple:
        mult = 0
        work = p
        while True:
            try:
                work = work.deflate(r)
            except ValueError:
                break
            mult += 1
            if work.degree < 1:
                break
        roots.append((r, mult))
    return roots


def _equal_degree_one_split(g: Polynomial):
    """Roots of a squarefree product of distinct linear factors over GF(p),
    by gcd with random shifted half-power maps.  The RNG is seeded from
    the polynomial so results are reproducible."""
    field: PrimeField = g.field
    q = field.p
    rng = random.Random(f"edf:{q}:{','.join(map(str, g.coeffs))}")
    out = []

    def walk(h: Polynomial):
        if h.degree == 0:
            return
        if h.degree == 1:
            c0, c1 = h.coeffs
            out.append(field.mul(field.neg(c0), field.inv(c1)))
            return
        while True:
            a = rng.randrange(q)
            shifted = Polynomial(field, [a, field.one()])
            trial = shifted.pow_mod((q - 1) // 2, h).sub(
                Polynomial.constant(field, field.one())
            )
            d = h.gcd(trial)
            if 0 < d.degree < h.degree:
                walk(d)
                walk(h.divmod(d)[0])
                return

    walk(g.monic())
    return out


def _roots_quadratic_formula(p: Polynomial):
    """Roots of a degree <= 2 polynomial in its own field (char != 2)."""
    f = p.field
    if p.degree == 1:
        return [(f.div(f.neg(p.coeffs[0]), p.coeffs[1]), 1)]
    c, b, a = p.coeffs
    if f.characteristic() == 2:
        raise FieldError("quadratic formula unavailable in characteristic 2")
    disc = f.sub(f.mul(b, b), f.mul(f.from_int(4), f.mul(a, c)))
    root = f.sqrt(disc)
    if root is None:
        return []
    two_a_inv = f.inv(f.mul(f.from_int(2), a))
    r1 = f.mul(f.sub(root, b), two_a_inv)
    r2 = f.mul(f.sub(f.neg(root), b), two_a_inv)
    if r1 == r2:
        return [(r1, 2)]
    return [(r, 1) for r in (r1, r2)]


def _roots_quadratic_ext_rational(p: Polynomial):
    field: QuadraticExtension = p.field
    base = field.base
    zero_b = base.zero()
    found = {}

    def note(root):
        mult = 0
        work = p
        while True:
            try:
                work = work.deflate(root)
            except ValueError:
                break
            mult += 1
            if work.degree < 1:
                break
        if mult:
            found[root] = mult

    # Roots inside the base field: common rational roots of the two
    # coordinate polynomials.
    f1 = Polynomial(base, [c[0] for c in p.coeffs])
    f2 = Polynomial(base, [c[1] for c in p.coeffs])
    primary = f1 if not f1.is_zero() else f2
    for cand, _ in _roots_rational(primary):
        emb = field.embed(cand)
        if p.evaluate(emb) == field.zero():
            note(emb)

    # Roots with an irrational coordinate: their minimal polynomial is a
    # monic rational quadratic dividing the norm polynomial.
    conj = Polynomial(field, [field.conjugate(c) for c in p.coeffs])
    norm_poly = p.mul(conj)
    rational_coeffs = []
    for c in norm_poly.coeffs:
        if c[1] != zero_b:
            raise FieldError("norm polynomial is not rational")
        rational_coeffs.append(c[0])
    n0 = Polynomial(base, rational_coeffs)
    while n0.degree > 0 and n0.coeffs[0] == 0:
        n0 = Polynomial(base, n0.coeffs[1:])
    if n0.degree >= 2:
        denom_lcm = 1
        for c in n0.coeffs:
            denom_lcm = denom_lcm * c.denominator // math.gcd(denom_lcm, c.denominator)
        ints = [int(c * denom_lcm) for c in n0.coeffs]
        g = 0
        for c in ints:
            g = math.gcd(g, abs(c))
        ints = [c // g for c in ints]
        lead = ints[-1]
        # Monicize: roots scale by lead, coefficients stay integral.
        monic = [c * lead ** (len(ints) - 2 - i) for i, c in enumerate(ints[:-1])] + [1]
        h = Polynomial(QQ, [Fraction(c) for c in monic])
        const = abs(monic[0])
        bound = 2 * (1 + max(abs(c) for c in monic))
        t_divs = _divisors(const) if const else []
        t_candidates = [t for d in t_divs for t in (d, -d)]
        if len(t_candidates) * (2 * bound + 1) > _QUAD_DIVISOR_CAP:
            raise FieldError("quadratic-extension root search exceeds the supported size")
        for t in t_candidates:
            for s in range(-bound, bound + 1):
                divisor = Polynomial(QQ, [Fraction(t), Fraction(-s), Fraction(1)])
                if not h.mod(divisor).is_zero():
                    continue
                # Back to the original variable: x = y / lead.
                u = Fraction(-s, lead)
                v = Fraction(t, lead * lead)
                disc = u * u - 4 * v
                # Root lies in the extension iff disc = D * w^2.
                ratio = disc / field.disc
                w = base.sqrt(ratio)
                if w is None:
                    continue
                half = Fraction(1, 2)
                for sign_w in (w, -w):
                    cand = (-u * half, sign_w * half)
                    if p.evaluate(cand) == field.zero():
                        note(cand)
    return sorted(found.items(), key=lambda item: field.sort_key(item[0]))


def _roots_quadratic_ext_prime(p: Polynomial):
    field: QuadraticExtension = p.field
    base: PrimeField = field.base
    if base.p * base.p > _BRUTE_FORCE_FIELD_CAP:
        raise FieldError("quadratic-extension root search exceeds the supported size")
    roots = []
    for cand in field.elements():
        if p.evaluate(cand) != field.zero():
            continue
        mult = 0
        work = p
        while True:
            try:
                work = work.deflate(cand)
            except ValueError:
                break
            mult += 1
            if work.degree < 1:
                break
        roots.append((cand, mult))
    return roots


def roots_in_field(p: Polynomial):
    """All roots of p lying in its coefficient field, with multiplicities,
    plus a flag telling whether p splits into linear factors there.

    Returns (((root, multiplicity), ...), fully_split), roots sorted by
    the field's canonical order.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no root set")
    field = p.field
    if p.degree == 0:
        return (), True
    if isinstance(field, RationalField):
        roots = _roots_rational(p)
    elif isinstance(field, PrimeField):
        roots = _roots_prime_field(p)
    elif isinstance(field, QuadraticExtension):
        if p.degree <= 2 and field.characteristic() != 2:
            roots = _roots_quadratic_formula(p)
        elif isinstance(field.base, PrimeField):
            roots = _roots_quadratic_ext_prime(p)
        else:
            roots = _roots_quadratic_ext_rational(p)
    else:
        raise FieldError(f"unsupported field {field!r}")
    roots = tuple(sorted(roots, key=lambda rm: field.sort_key(rm[0])))
    total = sum(mult for _, mult in roots)
    return roots, total == p.degree

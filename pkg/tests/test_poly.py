import random
from fractions import Fraction
from itertools import permutations

import pytest

from tdpair.errors import FieldError
from tdpair.fields import GF, QQ, QuadraticExtension
from tdpair.linalg import Matrix
from tdpair.poly import Polynomial, char_poly, roots_in_field


def P(coeffs, field=QQ):
    return Polynomial.from_int_coeffs(field, coeffs)


def test_polynomial_normalization_and_ops():
    assert Polynomial(QQ, [Fraction(1), Fraction(0)]).coeffs == (Fraction(1),)
    assert Polynomial.zero(QQ).degree == -1
    a, b = P([1, 1]), P([-1, 1])
    assert a.mul(b) == P([-1, 0, 1])
    q, r = P([-1, 0, 1]).divmod(a)
    assert q == b and r.is_zero()
    assert P([0, 2, 2]).gcd(P([0, 2])).coeffs == (Fraction(0), Fraction(1))


def test_polynomial_deflate():
    p = P([-1, 0, 1])  # x^2 - 1
    assert p.deflate(Fraction(1)) == P([1, 1])
    with pytest.raises(ValueError):
        p.deflate(Fraction(2))


def test_char_poly_examples():
    assert char_poly(Matrix.from_ints(QQ, [[1, 0], [0, 2]])) == P([2, -3, 1])
    assert char_poly(Matrix.zeros(QQ, 2)) == P([0, 0, 1])
    assert char_poly(Matrix.from_ints(QQ, [[0, 1], [1, 0]])) == P([-1, 0, 1])


def _leibniz_char_poly(m):
    """Independent oracle: det(xI - m) by the permutation-sum formula
    with polynomial entries."""
    field = m.field
    n = m.n_rows
    x = Polynomial.x(field)

    def entry(i, j):
        base = Polynomial.constant(field, field.neg(m.entry(i, j)))
        return base.add(x) if i == j else base

    total = Polynomial.zero(field)
    for perm in permutations(range(n)):
        inversions = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        term = Polynomial.constant(field, field.from_int((-1) ** inversions))
        for i in range(n):
            term = term.mul(entry(i, perm[i]))
        total = total.add(term)
    return total


@pytest.mark.parametrize("field,entry_draw", [
    (QQ, lambda rng: rng.randrange(-4, 5)),
    (GF(5), lambda rng: rng.randrange(5)),
])
def test_char_poly_matches_leibniz_oracle(field, entry_draw):
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randrange(1, 5)
        m = Matrix.from_ints(field, [[entry_draw(rng) for _ in range(n)] for _ in range(n)])
        assert char_poly(m) == _leibniz_char_poly(m)


def test_char_poly_similarity_invariant():
    from tdpair.generators import random_unimodular

    rng = random.Random(3)
    for _ in range(10):
        n = rng.randrange(2, 7)
        m = Matrix.from_ints(QQ, [[rng.randrange(-3, 4) for _ in range(n)] for _ in range(n)])
        p = random_unimodular(n, rng)
        from tdpair.linalg import inverse

        conj = p.mul(m).mul(inverse(p))
        assert char_poly(conj) == char_poly(m)


def test_rational_roots_examples():
    roots, split = roots_in_field(P([-1, 0, 1]))
    assert split and roots == ((Fraction(-1), 1), (Fraction(1), 1))
    roots, split = roots_in_field(P([1, 0, 1]))
    assert not split and roots == ()


def test_rational_roots_multiplicity_and_denominators():
    # (x - 1)^2 (x + 2)
    p = P([1, 0, -1]).mul(P([2, 1])).mul(P([-1, 1]))
    roots, split = roots_in_field(p)
    assert split and dict(roots) == {Fraction(-2): 1, Fraction(1): 2, Fraction(-1): 1}
    # (2x - 1)(3x + 2)(x^2 + 1): two rational roots, not split
    p = P([-1, 2]).mul(P([2, 3])).mul(P([1, 0, 1]))
    roots, split = roots_in_field(p)
    assert not split and dict(roots) == {Fraction(1, 2): 1, Fraction(-2, 3): 1}
    # root at zero
    roots, split = roots_in_field(P([0, 0, 1]))
    assert split and roots == ((Fraction(0), 2),)


def test_gf5_roots_match_exhaustive_evaluation():
    f = GF(5)
    p = P([1, 0, 1], f)  # x^2 + 1
    expected = [x for x in range(5) if (x * x + 1) % 5 == 0]
    roots, split = roots_in_field(p)
    assert split and [r for r, _ in roots] == expected == [2, 3]


def test_gfp_large_prime_gcd_path():
    f = GF(131071)  # above the brute-force cap
    p = Polynomial.from_int_coeffs(f, [15, -8, 1])  # (x-3)(x-5)
    roots, split = roots_in_field(p)
    assert split and [r for r, _ in roots] == [3, 5]
    q = Polynomial.from_int_coeffs(f, [1, 0, 1]).mul(p)  # extra irreducible factor
    roots, split = roots_in_field(q)
    assert not split and [r for r, _ in roots] == [3, 5]


def test_gcd_path_matches_exhaustive_evaluation():
    # smallest prime above the brute-force cap: both strategies apply
    p = 65537
    f = GF(p)
    rng = random.Random(13)
    for _ in range(5):
        deg = rng.randrange(2, 5)
        coeffs = [rng.randrange(p) for _ in range(deg)] + [1]
        poly = Polynomial(f, coeffs)
        roots, _ = roots_in_field(poly)
        expected = [x for x in range(p) if poly.evaluate(x) == 0]
        assert [r for r, _ in roots] == expected
        for r, mult in roots:
            work = poly
            count = 0
            while True:
                try:
                    work = work.deflate(r)
                except ValueError:
                    break
                count += 1
            assert count == mult


def test_quadratic_extension_roots_over_rationals():
    ext = QuadraticExtension(QQ, Fraction(2))
    # (x^2 - 2)(x - 3): all three roots live in the extension
    p = Polynomial(
        ext,
        [ext.from_int(6), ext.neg(ext.from_int(2)), ext.neg(ext.from_int(3)), ext.one()],
    )
    roots, split = roots_in_field(p)
    assert split
    values = {r for r, _ in roots}
    assert values == {(Fraction(3), Fraction(0)), (Fraction(0), Fraction(1)), (Fraction(0), Fraction(-1))}
    # degree-2 path with extension coefficients: (x - sqrt2)(x - 1)
    root2 = ext.generator()
    q = Polynomial.from_roots(ext, [root2, ext.one()])
    roots, split = roots_in_field(q)
    assert split and {r for r, _ in roots} == {root2, ext.one()}
    # no roots: x^2 - sqrt2 (a 4th root of 2 is not in the field)
    none = Polynomial(ext, [ext.neg(root2), ext.zero(), ext.one()])
    roots, split = roots_in_field(none)
    assert roots == () and not split


def test_quadratic_extension_roots_over_prime_field():
    ext = QuadraticExtension(GF(7), 3)
    g = ext.generator()
    p = Polynomial.from_roots(ext, [g, ext.from_int(2), ext.from_int(2)])
    roots, split = roots_in_field(p)
    assert split and dict(roots) == {g: 1, ext.from_int(2): 2}


def test_roots_reconstruction_invariant():
    rng = random.Random(11)
    for field in (QQ, GF(7)):
        for _ in range(15):
            deg = rng.randrange(1, 5)
            coeffs = [field.from_int(rng.randrange(-4, 5)) for _ in range(deg)] + [field.one()]
            p = Polynomial(field, coeffs)
            roots, split = roots_in_field(p)
            cofactor = p
            for r, mult in roots:
                for _ in range(mult):
                    cofactor = cofactor.deflate(r)
            rebuilt = cofactor
            for r, mult in roots:
                for _ in range(mult):
                    rebuilt = rebuilt.mul(Polynomial(field, [field.neg(r), field.one()]))
            assert rebuilt == p
            assert split == (cofactor.degree == 0)
            if not split:
                # the cofactor has no roots left in the field
                leftover, _ = roots_in_field(cofactor)
                assert leftover == ()


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        roots_in_field(Polynomial.zero(QQ))


def test_char2_quadratic_formula_unavailable():
    ext_err = None
    try:
        QuadraticExtension(GF(2), 1)
    except FieldError as exc:
        ext_err = exc
    assert ext_err is not None

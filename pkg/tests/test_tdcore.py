import random
from fractions import Fraction

import pytest

from tdpair.errors import InconclusiveError
from tdpair.fields import GF, QQ
from tdpair.linalg import Matrix, Subspace, inverse, rref
from tdpair.spectra import diagonalize
from tdpair.tdcore import (
    CERT_BURNSIDE,
    CERT_EXHAUSTIVE,
    affine_transform,
    find_tridiagonal_orderings,
    is_irreducible,
    relatives,
    verify_td_pair,
)


def M(rows, field=QQ):
    return Matrix.from_ints(field, rows)


SWAP = [[0, 1], [1, 0]]


def test_orderings_from_single_edge():
    a = M([[1, 0], [0, -1]])
    a_star = M(SWAP)
    sd = diagonalize(a)
    # direct block computation: E_0 A* E_1 is nonzero
    e0, e1 = sd.eigens[0].idempotent, sd.eigens[1].idempotent
    assert not e0.mul(a_star).mul(e1).is_zero()
    orderings = find_tridiagonal_orderings(sd, a_star)
    assert len(orderings) == 2 and orderings[0] == tuple(reversed(orderings[1]))


def test_orderings_commuting_pair_none():
    a = M([[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    sd = diagonalize(a)
    assert find_tridiagonal_orderings(sd, Matrix.identity(QQ, 3)) == []


def test_orderings_trivial_for_single_eigenspace():
    sd = diagonalize(M([[5, 0], [0, 5]]))
    assert find_tridiagonal_orderings(sd, M(SWAP)) == [(0,)]


def test_orderings_reject_branching_graph():
    # all-ones second operator connects every pair of eigenspaces
    a = M([[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    ones = M([[1, 1, 1]] * 3)
    assert find_tridiagonal_orderings(diagonalize(a), ones) == []


def test_irreducible_full_algebra():
    a, a_star = M([[1, 0], [0, -1]]), M(SWAP)
    flag, cert = is_irreducible(a, a_star)
    assert flag and cert == CERT_BURNSIDE
    # oracle: I, A, A*, AA* span the full 4-dimensional matrix algebra
    products = [Matrix.identity(QQ, 2), a, a_star, a.mul(a_star)]
    flat = [[m.entry(i, j) for i in range(2) for j in range(2)] for m in products]
    _, _, rk = rref(Matrix(QQ, flat))
    assert rk == 4


def test_reducible_pair_witness():
    a = M([[1, 0], [0, -1]])
    flag, witness = is_irreducible(a, a)
    assert not flag
    assert isinstance(witness, Subspace) and 0 < witness.dim < 2
    assert witness.image_under(a).dim <= witness.dim and witness.contains(witness.image_under(a))


def test_irreducible_one_dimensional():
    flag, _ = is_irreducible(M([[3]]), M([[7]]))
    assert flag


def test_irreducible_via_exhaustive_search():
    # companion of an irreducible quadratic generates a field, not the
    # full matrix algebra; no singular elements exist, so only the
    # exhaustive search can certify.
    c = M([[0, 2], [1, 0]], GF(5))  # x^2 - 2, and 2 is not a square mod 5
    flag, cert = is_irreducible(c, c)
    assert flag and cert == CERT_EXHAUSTIVE


def test_irreducible_inconclusive_over_rationals():
    c = M([[0, -1], [1, 0]])  # generates Q(i); no singular seeds exist
    with pytest.raises(InconclusiveError):
        is_irreducible(c, c)


def _spin_oracle_reducible(a, a_star):
    """Independent criterion: a pair on F^n is reducible iff some nonzero
    vector generates a proper invariant subspace; enumerate all of F^n."""
    from itertools import product as iproduct

    field = a.field
    n = a.n_rows
    for coords in iproduct(range(field.p), repeat=n):
        if all(c == 0 for c in coords):
            continue
        space = Subspace.from_vectors(field, n, [list(coords)])
        while True:
            grown = space.add(space.image_under(a)).add(space.image_under(a_star))
            if grown == space:
                break
            space = grown
        if space.dim < n:
            return True
    return False


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_irreducibility_matches_spin_oracle(p, n):
    field = GF(p)
    rng = random.Random(f"fuzz:{p}:{n}")
    for _ in range(25):
        a = M([[rng.randrange(p) for _ in range(n)] for _ in range(n)], field)
        a_star = M([[rng.randrange(p) for _ in range(n)] for _ in range(n)], field)
        flag, _cert = is_irreducible(a, a_star)
        assert flag == (not _spin_oracle_reducible(a, a_star))


def test_irreducible_symmetric_and_similarity_invariant():
    rng = random.Random(2)
    a, a_star = M([[1, 0], [0, -1]]), M(SWAP)
    assert is_irreducible(a, a_star)[0] == is_irreducible(a_star, a)[0]
    from tdpair.generators import random_unimodular

    for _ in range(5):
        p = random_unimodular(2, rng)
        p_inv = inverse(p)
        assert is_irreducible(p.mul(a).mul(p_inv), p.mul(a_star).mul(p_inv))[0]


def test_verify_sl2_like_pair():
    report = verify_td_pair(M([[1, 0], [0, -1]]), M(SWAP))
    assert report.is_td_pair
    assert len(report.orderings) == 4
    assert report.ordering_counts == (2, 2)
    for phi in report.orderings:
        assert phi.d == phi.delta == 1
        assert len(set(phi.theta)) == 2


def test_verify_failure_reasons():
    nilpotent = M([[0, 1], [0, 0]])
    assert verify_td_pair(nilpotent, M(SWAP)).failure_reason.kind == "NotDiagonalizable"
    diag = M([[1, 0], [0, -1]])
    assert verify_td_pair(diag, diag).failure_reason.kind == "Reducible"
    rot = M([[0, -1], [1, 0]])
    assert verify_td_pair(rot, M(SWAP)).failure_reason.kind == "NotSplit"
    # irreducible but unorderable: three eigenspaces all linked
    a3 = M([[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    dense = M([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    report = verify_td_pair(a3, dense)
    assert report.failure_reason.kind == "NoTridiagonalOrdering"


def test_ordering_set_closed_under_reversals(sl2_systems):
    report = verify_td_pair(sl2_systems[2].a, sl2_systems[2].a_star)
    assert len(report.orderings) in (1, 2, 4)
    systems = set(report.orderings)
    for phi in report.orderings:
        rel = relatives(phi)
        assert rel["down"] in systems
        assert rel["ddown"] in systems
        assert rel["down_ddown"] in systems


def test_relatives_table_and_involutions(sl2_systems):
    phi = sl2_systems[3]
    rel = relatives(phi)
    assert set(rel) == {
        "id", "down", "ddown", "down_ddown", "star", "down_star", "ddown_star", "down_ddown_star",
    }
    assert rel["id"] == phi
    # involutions
    assert relatives(rel["down"])["down"] == phi
    assert relatives(rel["ddown"])["ddown"] == phi
    assert relatives(rel["star"])["star"] == phi
    # sequence assignments
    assert rel["down"].theta == phi.theta and rel["down"].theta_star == tuple(reversed(phi.theta_star))
    assert rel["ddown"].theta == tuple(reversed(phi.theta))
    assert rel["star"].theta == phi.theta_star and rel["star"].theta_star == phi.theta
    assert rel["ddown_star"].theta == phi.theta_star
    assert rel["ddown_star"].theta_star == tuple(reversed(phi.theta))
    assert rel["down_star"].theta == tuple(reversed(phi.theta_star))
    assert rel["down_ddown_star"].theta == tuple(reversed(phi.theta_star))
    assert rel["down_ddown_star"].theta_star == tuple(reversed(phi.theta))
    # commutation: down then star equals star then ddown
    assert relatives(rel["down"])["star"] == relatives(rel["star"])["ddown"]


def test_affine_transform(sl2_systems):
    phi = sl2_systems[2]
    same = affine_transform(phi, Fraction(1), Fraction(0), Fraction(1), Fraction(0))
    assert same == phi
    moved = affine_transform(phi, Fraction(2), Fraction(1), Fraction(1), Fraction(0))
    assert moved.theta == tuple(2 * t + 1 for t in phi.theta)
    assert moved.idempotents() == phi.idempotents()
    flipped = affine_transform(phi, Fraction(-1), Fraction(0), Fraction(1), Fraction(0))
    assert flipped.theta == tuple(-t for t in phi.theta)
    assert flipped.eigens == tuple(
        type(e)(Fraction(-1) * e.eigenvalue, e.eigenspace, e.idempotent, e.algebraic_multiplicity)
        for e in phi.eigens
    )
    with pytest.raises(ValueError):
        affine_transform(phi, Fraction(0), Fraction(0), Fraction(1), Fraction(0))


def test_three_interval_containments(sl2_systems):
    for d in (1, 2, 3):
        phi = sl2_systems[d]
        field, n = phi.field, phi.dimension
        for i, e in enumerate(phi.eigens):
            window = Subspace.zero(field, n)
            for k in (i - 1, i, i + 1):
                if 0 <= k <= phi.d:
                    window = window.add(phi.eigens[k].eigenspace)
            assert window.contains(e.eigenspace.image_under(phi.a_star))

from fractions import Fraction

import pytest

from tdpair.errors import ConsistencyError
from tdpair.fields import QQ
from tdpair.linalg import Matrix, Subspace
from tdpair.split import build_split, split_subspaces, vij_lattice
from tdpair.tdcore import verify_td_pair


@pytest.fixture(scope="module")
def split_data(sl2_systems):
    return {d: build_split(sl2_systems[d]) for d in (0, 1, 2, 3)}


def test_zero_diameter(split_data, sl2_systems):
    sp = split_data[0]
    assert sp.summands[0].is_full()
    assert sp.projections[0] == Matrix.identity(QQ, 1)
    assert sp.shape == (1,)


def test_bottom_summand_is_dual_eigenspace(split_data, sl2_systems):
    phi = sl2_systems[1]
    sp = split_data[1]
    assert sp.summands[0] == phi.dual_eigens[0].eigenspace
    assert sp.shape == (1, 1)
    assert sp.projections[0].add(sp.projections[1]) == Matrix.identity(QQ, 2)
    assert sp.projections[0].mul(sp.projections[1]).is_zero()


def test_diameter_two_shape(split_data):
    assert split_data[2].shape == (1, 1, 1)


def test_projection_idempotent_sandwich(split_data, sl2_systems):
    for d in (1, 2, 3):
        phi = sl2_systems[d]
        sp = split_data[d]
        for i in range(d + 1):
            f_i = sp.projections[i]
            e_i = phi.eigens[i].idempotent
            assert f_i.mul(e_i).mul(f_i) == f_i
            assert e_i.mul(f_i).mul(e_i) == e_i
            e_star_i = phi.dual_eigens[i].idempotent
            assert f_i.mul(e_star_i).mul(f_i) == f_i
            assert e_star_i.mul(f_i).mul(e_star_i) == e_star_i


def test_restriction_bijections_compose_to_identity(split_data, sl2_systems):
    for d in (1, 2, 3):
        phi = sl2_systems[d]
        sp = split_data[d]
        for i in range(d + 1):
            e_i = phi.eigens[i].idempotent
            f_i = sp.projections[i]
            for v in sp.summands[i].rows:
                assert f_i.apply(e_i.apply(v)) == tuple(v)
            for v in phi.eigens[i].eigenspace.rows:
                assert e_i.apply(f_i.apply(v)) == tuple(v)


def test_triangular_products_vanish(split_data, sl2_systems):
    for d in (2, 3):
        phi = sl2_systems[d]
        sp = split_data[d]
        for i in range(d + 1):
            for j in range(i + 1, d + 1):
                assert phi.eigens[i].idempotent.mul(sp.projections[j]).is_zero()
                assert sp.projections[i].mul(phi.eigens[j].idempotent).is_zero()
                assert phi.dual_eigens[j].idempotent.mul(sp.projections[i]).is_zero()
                assert sp.projections[j].mul(phi.dual_eigens[i].idempotent).is_zero()


def _split_conditions_hold(phi, summands):
    """Independent restatement of the direct-sum plus action conditions."""
    field, n, d = phi.field, phi.dimension, phi.d
    if sum(u.dim for u in summands) != n:
        return False
    total = Subspace.zero(field, n)
    for u in summands:
        total = total.add(u)
    if not total.is_full():
        return False
    identity = Matrix.identity(field, n)
    for i, u in enumerate(summands):
        raised = u.image_under(phi.a.sub(identity.scale(phi.theta[i])))
        target = summands[i + 1] if i < d else Subspace.zero(field, n)
        if not target.contains(raised):
            return False
        lowered = u.image_under(phi.a_star.sub(identity.scale(phi.theta_star[i])))
        target = summands[i - 1] if i > 0 else Subspace.zero(field, n)
        if not target.contains(lowered):
            return False
    return True


def test_perturbed_summand_breaks_conditions(split_data, sl2_systems):
    phi = sl2_systems[2]
    sp = split_data[2]
    assert _split_conditions_hold(phi, sp.summands)
    # swap one summand for a different line
    for replacement_rows in ([[1, 0, 0]], [[0, 0, 1]], [[1, 1, 1]]):
        candidate = Subspace.from_vectors(QQ, 3, [[Fraction(x) for x in replacement_rows[0]]])
        if candidate == sp.summands[1]:
            continue
        perturbed = (sp.summands[0], candidate, sp.summands[2])
        assert not _split_conditions_hold(phi, perturbed)


def test_projection_image_recovers_summand(split_data):
    sp = split_data[3]
    n = sp.phi.dimension
    for u, f in zip(sp.summands, sp.projections):
        assert Subspace.full(QQ, n).image_under(f) == u


def test_lattice_boundaries_and_vanishing(split_data, sl2_systems):
    for d in (1, 2, 3):
        phi = sl2_systems[d]
        lattice = vij_lattice(phi)
        assert lattice.at(d, 0).is_full()
        assert lattice.at(0, 1).is_zero()
        sp = split_data[d]
        for i in range(d + 1):
            assert lattice.at(i, i) == sp.summands[i]
            for j in range(i + 1, d + 1):
                assert lattice.at(i, j).is_zero()
        # boundary conventions
        assert lattice.at(-1, 0).is_zero()
        assert lattice.at(d + 1, -1).is_full()
        assert lattice.at(0, d + 1).is_zero()


def test_split_rejects_tampered_system(sl2_systems):
    # feeding mismatched orderings must blow up, not return garbage
    from dataclasses import replace

    phi = sl2_systems[2]
    broken = replace(phi, dual_eigens=(phi.dual_eigens[1], phi.dual_eigens[0], phi.dual_eigens[2]))
    with pytest.raises(ConsistencyError):
        split_subspaces(broken)


def test_mod5_instance_split():
    from tdpair.fields import GF

    f5 = GF(5)
    a = Matrix.from_ints(f5, [[2, 0, 0], [0, 0, 0], [0, 0, 3]])
    a_star = Matrix.from_ints(f5, [[0, 2, 0], [1, 0, 1], [0, 2, 0]])
    report = verify_td_pair(a, a_star)
    assert report.is_td_pair
    sp = build_split(report.orderings[0])
    assert sp.shape == (1, 1, 1)
    vij_lattice(report.orderings[0])

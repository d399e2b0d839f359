import random
from fractions import Fraction

import pytest

from tdpair.errors import NotSplitError
from tdpair.fields import QQ
from tdpair.generators import (
    MODE_QFORM,
    ScanConfig,
    Sl2Spec,
    conjugate_pair,
    qform_instance,
    random_unimodular,
    scan,
    sl2_module,
    sl2_triple,
)
from tdpair.linalg import Matrix
from tdpair.pipeline import analyze_pair
from tdpair.tdcore import verify_td_pair


def test_triple_commutation_relations():
    for d in (1, 2, 5):
        h, e, f = sl2_triple(d)
        assert h.commutator(e) == e.scale(Fraction(2))
        assert h.commutator(f) == f.scale(Fraction(-2))
        assert e.commutator(f) == h


def test_default_family_smallest_case():
    a, a_star = sl2_module(Sl2Spec(d=1))
    assert a == Matrix.from_ints(QQ, [[1, 0], [0, -1]])
    assert a_star == Matrix.from_ints(QQ, [[0, 1], [1, 0]])
    assert verify_td_pair(a, a_star).is_td_pair


def test_family_diameter_two_spectrum():
    a, a_star = sl2_module(Sl2Spec(d=2))
    report = verify_td_pair(a, a_star)
    assert report.is_td_pair
    phi = report.orderings[0]
    assert sorted(phi.theta) == [Fraction(-2), Fraction(0), Fraction(2)]
    assert sorted(phi.theta_star) == [Fraction(-2), Fraction(0), Fraction(2)]


@pytest.mark.parametrize("coeffs,scale", [
    ((2, 2, 0), 1),
    ((1, 4, 0), 3),
    ((3, 3, 4), 1),   # scale 5 spectrum: 16 + 9 = 25
    ((-1, -1, 0), 2),
])
def test_family_with_other_rational_coefficients(coeffs, scale):
    for d in (1, 3):
        spec = Sl2Spec(d=d, a_scale=Fraction(scale), astar_coeffs=tuple(Fraction(c) for c in coeffs))
        a, a_star = sl2_module(spec)
        report, analyses = analyze_pair(a, a_star, ordering=0, persist_findings=False)
        assert report.is_td_pair
        assert analyses[0].split.shape == tuple([1] * (d + 1))


def test_spec_guards():
    with pytest.raises(ValueError):
        sl2_module(Sl2Spec(d=2, astar_coeffs=(Fraction(0), Fraction(1), Fraction(0))))
    with pytest.raises(ValueError):
        sl2_module(Sl2Spec(d=2, a_scale=Fraction(0)))
    with pytest.raises(ValueError):
        sl2_module(Sl2Spec(d=-1))


def test_irrational_spectrum_reported():
    with pytest.raises(NotSplitError) as err:
        sl2_module(Sl2Spec(d=2, astar_coeffs=(Fraction(1), Fraction(1), Fraction(1))))
    assert err.value.cofactor_degree == 2  # one rational eigenvalue (zero) survives
    assert "characteristic polynomial" in str(err.value)


def test_nilpotent_coefficients_flow_to_verification():
    # c_h^2 + c_e c_f = 0: second operator nilpotent, caught downstream
    a, a_star = sl2_module(Sl2Spec(d=1, astar_coeffs=(Fraction(1), Fraction(-1), Fraction(1))))
    report = verify_td_pair(a, a_star)
    assert report.failure_reason.kind == "NotDiagonalizable"


def test_conjugation_invariance():
    a, a_star = sl2_module(Sl2Spec(d=2))
    base_report, base_analyses = analyze_pair(a, a_star, persist_findings=False)
    rng = random.Random(12)
    for _ in range(3):
        p = random_unimodular(3, rng)
        ca, castar = conjugate_pair(a, a_star, p)
        report, analyses = analyze_pair(ca, castar, persist_findings=False)
        assert report.is_td_pair
        assert [x.system.theta for x in analyses] == [x.system.theta for x in base_analyses]
        assert [x.split.shape for x in analyses] == [x.split.shape for x in base_analyses]
        assert [x.params for x in analyses] == [x.params for x in base_analyses]
    identity = Matrix.identity(QQ, 3)
    assert conjugate_pair(a, a_star, identity) == (a, a_star)
    perm = Matrix.from_ints(QQ, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    pa, pastar = conjugate_pair(a, a_star, perm)
    report, analyses = analyze_pair(pa, pastar, persist_findings=False)
    assert [x.params for x in analyses] == [x.params for x in base_analyses]


def test_conjugate_rejects_singular():
    a, a_star = sl2_module(Sl2Spec(d=1))
    from tdpair.errors import SingularMatrixError

    with pytest.raises(SingularMatrixError):
        conjugate_pair(a, a_star, Matrix.from_ints(QQ, [[1, 1], [1, 1]]))


def test_geometric_candidate_values():
    a, a_star = qform_instance(7, 3, 3, 0, 1, 0, 1)
    # oracle: q = 3 has powers 1, 3, 2, 6 and inverse powers 1, 5, 4, 6 mod 7
    assert [a.entry(i, i) for i in range(4)] == [pow(3, i, 7) for i in range(4)] == [1, 3, 2, 6]
    assert [a_star.entry(i, i) for i in range(4)] == [pow(5, i, 7) for i in range(4)] == [1, 5, 4, 6]
    assert all(a_star.entry(i, i + 1) == 1 and a_star.entry(i + 1, i) == 1 for i in range(3))


def test_geometric_zero_diameter():
    a, a_star = qform_instance(7, 0, 3, 1, 2, 3, 4)
    assert a.n_rows == 1 and verify_td_pair(a, a_star).is_td_pair


def test_geometric_guards():
    with pytest.raises(ValueError):
        qform_instance(7, 1, 1, 0, 1, 0, 1)  # q = 1 has order 1
    with pytest.raises(ValueError):
        qform_instance(7, 3, 2, 0, 1, 0, 1)  # order(2) = 3 = d
    with pytest.raises(ValueError):
        qform_instance(7, 1, 3, 0, 0, 0, 1)  # b = 0


def test_scan_config_guards():
    with pytest.raises(ValueError):
        ScanConfig(p=5, n=2, trials=0, seed=1).validate()
    with pytest.raises(ValueError):
        ScanConfig(p=5, n=2, trials=10, seed=1, mode=MODE_QFORM).validate()
    with pytest.raises(ValueError):
        ScanConfig(p=7, n=4, trials=10, seed=1, mode=MODE_QFORM, q=2).validate()
    with pytest.raises(ValueError):
        ScanConfig(p=5, n=2, trials=10, seed=1, mode="bogus").validate()


def test_scan_accepts_and_reverifies():
    result = scan(ScanConfig(p=5, n=2, trials=400, seed=42))
    assert result.summary["accepted"] == len(result.records) > 0
    assert result.summary["candidates"] == 400
    from tdpair.jsonio import parse_matrix_document

    for record in result.records[:5]:
        a = parse_matrix_document(record["a"])
        a_star = parse_matrix_document(record["a_star"])
        report = verify_td_pair(a, a_star)
        assert report.is_td_pair
        assert record["analysis"]["verification"]["is_td_pair"]


@pytest.mark.parametrize("p,n", [(7, 2), (11, 2), (5, 4), (3, 3)])
def test_scan_varied_configurations(p, n):
    result = scan(ScanConfig(p=p, n=n, trials=200, seed=17))
    s = result.summary
    assert s["candidates"] == 200
    assert s["accepted"] <= s["irreducible"] <= s["path_ordered"] <= s["diagonalizable"] <= 200
    from tdpair.jsonio import parse_matrix_document

    for record in result.records[:3]:
        a = parse_matrix_document(record["a"])
        a_star = parse_matrix_document(record["a_star"])
        assert verify_td_pair(a, a_star).is_td_pair


def test_scan_deterministic_across_runs_and_threads():
    config = ScanConfig(p=5, n=2, trials=200, seed=9)
    first = scan(config)
    second = scan(config)
    assert first == second
    threaded = scan(config, threads=2)
    assert threaded == first


def test_scan_geometric_mode():
    result = scan(ScanConfig(p=7, n=2, trials=300, seed=3, mode=MODE_QFORM, q=3))
    assert result.summary["accepted"] > 0
    for record in result.records[:3]:
        analysis = record["analysis"]["orderings"][0]
        assert analysis["epsilon"] == []  # diameter 1

import json
import os

import pytest

from tdpair.conjectures import ConjectureReport
from tdpair.fields import GF
from tdpair.linalg import Matrix
from tdpair.pipeline import analyze_pair, analyze_system


@pytest.fixture()
def mod5_pair():
    f5 = GF(5)
    a = Matrix.from_ints(f5, [[2, 0, 0], [0, 0, 0], [0, 0, 3]])
    a_star = Matrix.from_ints(f5, [[0, 2, 0], [1, 0, 1], [0, 2, 0]])
    return a, a_star


def test_analyze_pair_structure(mod5_pair):
    a, a_star = mod5_pair
    report, analyses = analyze_pair(a, a_star, persist_findings=False)
    assert report.is_td_pair and len(analyses) == len(report.orderings)
    oa = analyses[0]
    assert oa.split.shape == (1, 1, 1)
    assert oa.cubic_ok
    assert oa.conjectures.rho_bound_holds
    assert len(oa.rl.epsilon) == 1


def test_analyze_pair_ordering_out_of_range(mod5_pair):
    a, a_star = mod5_pair
    with pytest.raises(ValueError):
        analyze_pair(a, a_star, ordering=9, persist_findings=False)


def test_conjecture_failure_is_persisted(mod5_pair, tmp_path, monkeypatch):
    import tdpair.pipeline as pipeline_module

    a, a_star = mod5_pair
    directory = tmp_path / "found"
    monkeypatch.setenv("TDPAIR_FINDINGS_DIR", str(directory))

    real_run = pipeline_module.run_conjectures

    def failing_run(phi, sp, rl, rng_seed=0):
        report = real_run(phi, sp, rl, rng_seed=rng_seed)
        return ConjectureReport(
            rho_bound_holds=report.rho_bound_holds,
            spanning_holds=report.spanning_holds,
            spanning_outcomes=report.spanning_outcomes,
            factorization=None,  # simulate a research-level finding
            counterexample_detail={"forced": True},
        )

    monkeypatch.setattr(pipeline_module, "run_conjectures", failing_run)
    analyze_pair(a, a_star, ordering=0)
    files = os.listdir(directory)
    assert len(files) == 1 and files[0].startswith("finding_")
    payload = json.loads((directory / files[0]).read_text())
    assert payload["a"]["field"] == {"type": "gfp", "p": 5}
    assert payload["analysis"]["conjectures"]["factorization"] is None


def test_analyze_system_rejects_wrong_epsilon(mod5_pair, monkeypatch):
    # sanity: the internal cross-checks really are wired in
    a, a_star = mod5_pair
    report, _ = analyze_pair(a, a_star, ordering=0, persist_findings=False)
    phi = report.orderings[0]
    oa = analyze_system(phi)
    assert oa.relation_report.relation_a_holds

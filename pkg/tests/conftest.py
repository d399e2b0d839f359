import pytest

from tdpair.generators import Sl2Spec, sl2_module
from tdpair.tdcore import verify_td_pair


@pytest.fixture(autouse=True)
def findings_tmpdir(tmp_path, monkeypatch):
    # Keep conjecture-failure persistence out of the working tree.
    monkeypatch.setenv("TDPAIR_FINDINGS_DIR", str(tmp_path / "findings"))


@pytest.fixture(scope="session")
def sl2_pairs():
    return {d: sl2_module(Sl2Spec(d=d)) for d in range(0, 7)}


@pytest.fixture(scope="session")
def sl2_systems(sl2_pairs):
    systems = {}
    for d, (a, a_star) in sl2_pairs.items():
        report = verify_td_pair(a, a_star)
        assert report.is_td_pair
        systems[d] = report.orderings[0]
    return systems

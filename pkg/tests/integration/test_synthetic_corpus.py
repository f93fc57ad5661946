import pytest

from purposegraph.extraction import extract
from purposegraph.testing import synthetic_corpus, write_corpus


@pytest.fixture(scope="module")
def synthetic_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("synthetic") / "webshop"
    write_corpus(synthetic_corpus(), root)
    return root


@pytest.fixture(scope="module")
def synthetic_result(synthetic_dir):
    return extract(synthetic_dir)


def test_synthetic_stats(synthetic_result):
    stats = synthetic_result.stats

    assert stats.n_controllers == 30
    assert stats.n_endpoints == 245
    assert stats.n_entity_types == 19
    assert stats.n_controllers_with_pd == 22
    assert stats.endpoints_per_controller.min >= 1
    assert stats.endpoints_per_controller.mean == pytest.approx(245 / 30, abs=0.05)
    assert stats.with_pd_spread.mean * 22 == pytest.approx(stats.n_endpoints_under_them)
    assert all(count > 0 for count in stats.entity_usage.values())
    assert len(stats.entity_usage) == 19


def test_synthetic_result_is_consistent(synthetic_result):
    policy = synthetic_result.policy

    assert len(policy.purposes) == 1 + 30 + 245
    assert policy.children("webshop") == tuple(sorted(f"ctrl{i:02d}" for i in range(30)))
    assert synthetic_result.warnings == ()


@pytest.mark.parametrize("n_jobs", [None, 2])
def test_extract_synthetic(benchmark, synthetic_dir, n_jobs):
    if n_jobs:
        pytest.importorskip("joblib")

    res = benchmark.pedantic(
        extract, args=(synthetic_dir,), kwargs={"n_jobs": n_jobs}, iterations=1, rounds=2
    )

    assert res.stats.n_endpoints == 245

import pytest

from purposegraph.cli import ExitStatus, main
from purposegraph.extraction import (
    build_call_graph,
    direct_data,
    extract,
    generate,
    index,
    reachable_data,
    result_to_json,
)
from purposegraph.minisvc import parse_source
from purposegraph.serialisation import parse_policy
from purposegraph.servicenet import check_coverage
from purposegraph.testing import random_corpus, write_corpus
from purposegraph.validation import roots, validate

N_CORPORA = 100


def _analyse(seed):
    units = [parse_source(text, path) for path, text in random_corpus(seed).items()]
    table = index(units)
    return units, table, build_call_graph(table)


def _oracle(graph, table, entry):
    # plain depth-first search, recursion is handled by the visited set
    successors = {}
    for u, v in graph.edges:
        successors.setdefault(u, set()).add(v)

    visited = set()
    stack = [entry]
    data = set()
    while stack:
        ref = stack.pop()
        if ref in visited:
            continue
        visited.add(ref)
        data |= direct_data(table, ref)
        stack.extend(successors.get(ref, ()))
    return frozenset(data)


def _n_request_mappings(units):
    return sum(
        1
        for unit in units
        for cls in unit.classes
        for method in cls.methods
        if any(a.name == "RequestMapping" for a in method.annotations)
    )


@pytest.mark.parametrize("seed", range(N_CORPORA))
def test_reachable_data_matches_search(seed):
    _, table, graph = _analyse(seed)

    for entry in graph.entry_points:
        assert reachable_data(graph, table, entry.ref) == _oracle(graph, table, entry.ref)


@pytest.mark.parametrize("seed", range(N_CORPORA))
def test_generated_policy(seed):
    units, table, graph = _analyse(seed)

    res = generate(table, graph, "corpus")

    assert validate(res.policy).is_valid
    assert validate(parse_policy(result_to_json(res))).is_valid
    assert roots(res.policy) == {"corpus"}
    assert len(res.endpoint_purposes) == _n_request_mappings(units)
    assert res.stats.n_endpoints == len(graph.entry_points)
    assert check_coverage(res.policy, [res.services], res.gov).is_complete

    endpoint_data = set()
    for entry in graph.entry_points:
        endpoint_data |= _oracle(graph, table, entry.ref)
    assert res.root_purpose.data == endpoint_data


@pytest.mark.parametrize("seed", range(N_CORPORA))
def test_controller_data_is_union_of_endpoints(seed):
    _, table, graph = _analyse(seed)

    res = generate(table, graph, "corpus")

    for purpose in res.controller_purposes:
        children = res.policy.children(purpose.id)
        union = set()
        for child in children:
            union |= res.policy.purpose(child).data
        assert purpose.data == union


@pytest.mark.parametrize("seed", range(5))
def test_extract_from_disk(seed, tmp_path):
    files = random_corpus(seed)
    write_corpus(files, tmp_path / "corpus")
    units = [parse_source(text, path) for path, text in files.items()]

    res = extract(tmp_path / "corpus")

    assert res.root_purpose.id == "corpus"
    assert len(res.endpoint_purposes) == _n_request_mappings(units)
    assert validate(res.policy).is_valid


@pytest.mark.parametrize("seed", range(N_CORPORA))
def test_extract_then_validate(seed, tmp_path, capsys):
    write_corpus(random_corpus(seed), tmp_path / "corpus")
    out = tmp_path / "purposes.json"

    status = main(["-q", "extract", str(tmp_path / "corpus"), "--out", str(out)])
    assert status == ExitStatus.OK
    capsys.readouterr()

    assert main(["-q", "validate", str(out)]) == ExitStatus.OK
    assert '"valid": true' in capsys.readouterr().out

import dataclasses

import numpy as np
import pytest

from purposegraph.extraction import build_call_graph, index
from purposegraph.lpl import LayeredPrivacyPolicy, Purpose
from purposegraph.minisvc import parse_source
from purposegraph.servicenet import validate_net
from purposegraph.testing import (
    CONTROLLER_OF_RECORD,
    Mutation,
    assert_policies_equal,
    mutate,
    random_corpus,
    random_policy,
    random_service_tree,
    synthetic_corpus,
    write_corpus,
)
from purposegraph.validation import Rule, validate


@pytest.mark.parametrize("seed", range(25))
def test_random_policy_is_valid(seed):
    policy = random_policy(seed)

    assert validate(policy).is_valid
    assert policy.composition
    assert all(CONTROLLER_OF_RECORD in p.recipients for p in policy.purposes)


def test_random_policy_is_deterministic():
    assert random_policy(3) == random_policy(3)
    assert random_policy(np.random.default_rng(3)) == random_policy(3)


def test_random_policy_size():
    for seed in range(10):
        assert 3 <= len(random_policy(seed, min_purposes=3, max_purposes=4).purposes) <= 4


@pytest.mark.parametrize("mutation", list(Mutation))
@pytest.mark.parametrize("seed", range(5))
def test_mutate_breaks_rule(seed, mutation):
    policy = random_policy(seed)
    edge = sorted(policy.composition)[0]

    report = validate(mutate(policy, mutation, edge))

    if mutation == Mutation.ADD_BACK_EDGE:
        assert Rule.CYCLE in {v.rule for v in report.violations}
    else:
        assert {v.rule for v in report.violations if v.edge == edge} == {mutation.rule}


def test_mutation_rules():
    assert Mutation.ADD_CHILD_DATUM.rule == Rule.DATA_SUBSET
    assert Mutation.ADD_BACK_EDGE.rule == Rule.CYCLE
    assert len({m.rule for m in Mutation}) == len(Mutation)


@pytest.mark.parametrize("seed", range(20))
def test_random_service_tree_nets_are_valid(seed):
    root = random_service_tree(seed)

    names = [s.name for s in root.walk()]
    assert len(names) == len(set(names))
    for service in root.walk():
        if service.net is not None:
            assert validate_net(service.net) == []
        if not service.components:
            assert service.net is not None


def test_random_service_tree_depth():
    def depth(service):
        return 1 + max((depth(c) for c in service.components), default=0)

    assert all(depth(random_service_tree(seed, max_depth=2)) <= 2 for seed in range(10))


@pytest.mark.parametrize("seed", range(20))
def test_random_corpus_parses(seed):
    files = random_corpus(seed)
    units = [parse_source(text, path) for path, text in files.items()]

    table = index(units)
    build_call_graph(table)

    assert list(files) == sorted(files)


def test_random_corpus_is_deterministic():
    assert random_corpus(7) == random_corpus(7)


def test_synthetic_corpus_shape():
    files = synthetic_corpus(3, 7, 2, 1, seed=1)

    assert sorted(p for p in files if p.startswith("controllers/")) == [
        "controllers/Controller00.msvc",
        "controllers/Controller01.msvc",
        "controllers/Controller02.msvc",
    ]
    assert sum(text.count("@RequestMapping(") for text in files.values()) == 7 + 3
    assert "notifiers.msvc" in files


def test_synthetic_corpus_without_entities():
    files = synthetic_corpus(2, 2, 0, 2)

    assert sorted(files) == ["controllers/Controller00.msvc", "controllers/Controller01.msvc"]


@pytest.mark.parametrize(
    "shape,match",
    [
        ((5, 2, 1, 0), "at least one entry-point"),
        ((-1, 2, 1, 0), "at least one entry-point"),
        ((3, 3, 1, 4), "n_without_data"),
        ((3, 3, 0, 1), "at least one entity"),
    ],
)
def test_synthetic_corpus_impossible(shape, match):
    with pytest.raises(ValueError, match=match):
        synthetic_corpus(*shape)


def test_write_corpus(tmp_path):
    written = write_corpus({"b/x.msvc": "class X {}\n", "a.msvc": "class A {}\n"}, tmp_path)

    assert written == [tmp_path / "a.msvc", tmp_path / "b" / "x.msvc"]
    assert (tmp_path / "b" / "x.msvc").read_text() == "class X {}\n"


def test_assert_policies_equal():
    policy = LayeredPrivacyPolicy(name="a", purposes={Purpose("x", "X")})

    assert_policies_equal(policy, dataclasses.replace(policy))

    with pytest.raises(AssertionError, match="Policies differ") as excinfo:
        assert_policies_equal(policy, dataclasses.replace(policy, name="b"))
    assert '-  "name": "a",' in str(excinfo.value)
    assert '+  "name": "b",' in str(excinfo.value)

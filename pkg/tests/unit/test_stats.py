import pytest

from purposegraph.errors import SchemaError
from purposegraph.extraction import build_call_graph, generate, index
from purposegraph.extraction.stats import (
    Spread,
    Stats,
    Transparency,
    compute_stats,
    format_table,
    transparency,
)
from purposegraph.lpl import DataElement, LayeredPrivacyPolicy, Purpose, UnderlyingPurposeEdge
from purposegraph.minisvc import parse_source
from purposegraph.servicenet import ServiceNet, WebService


def _tree(shape, data_controllers=()):
    """
    Three-level policy with ``shape[c]`` endpoints under controller ``c``
    """
    datum = DataElement("User", "email")
    purposes = [Purpose("root", "root", data={datum} if data_controllers else set())]
    edges = []
    for c, n_endpoints in enumerate(shape):
        data = {datum} if c in data_controllers else set()
        purposes.append(Purpose(f"c{c}", f"c{c}", data=data))
        edges.append(UnderlyingPurposeEdge("root", f"c{c}"))
        for e in range(n_endpoints):
            purposes.append(Purpose(f"c{c}/e{e}", f"e{e}", data=data))
            edges.append(UnderlyingPurposeEdge(f"c{c}", f"c{c}/e{e}"))
    return LayeredPrivacyPolicy(name="tree", purposes=purposes, composition=edges)


def test_compute_stats_shape():
    policy = _tree([1, 4, 2, 5], data_controllers={1, 3})

    stats = compute_stats(policy, "root", ["User", "Order", "User"])

    assert stats.n_controllers == 4
    assert stats.n_endpoints == 12
    assert stats.endpoints_per_controller == Spread(1, 5, 3.0)
    assert stats.n_controllers_with_pd == 2
    assert stats.n_endpoints_under_them == 9
    assert stats.with_pd_spread == Spread(4, 5, 4.5)
    assert stats.n_entity_types == 2
    assert stats.entity_usage == {"Order": 0, "User": 9}
    assert stats.purpose_data_counts["c1/e0"] == 1
    assert stats.purpose_data_counts["c0/e0"] == 0


def test_compute_stats_without_personal_data():
    stats = compute_stats(_tree([2, 3]), "root", [])

    assert stats.n_controllers_with_pd == 0
    assert stats.n_endpoints_under_them == 0
    assert stats.with_pd_spread == Spread()
    assert stats.with_pd_spread.range == "n/a"
    assert stats.entity_usage == {}


def test_compute_stats_notifier(notifier_units):
    table = index(notifier_units)
    res = generate(table, build_call_graph(table), "notifier")

    assert res.stats.n_controllers == 1
    assert res.stats.n_endpoints == 2
    assert res.stats.n_controllers_with_pd == 1
    assert res.stats.n_endpoints_under_them == 2
    assert res.stats.n_entity_types == 2
    assert res.stats.entity_usage == {"Contact": 1, "Phone": 1}


def test_stats_dict_round_trip():
    stats = compute_stats(_tree([1, 4, 2], data_controllers={1}), "root", ["User"])

    doc = stats.to_dict()

    assert list(doc) == [
        "nControllers",
        "nEndpoints",
        "endpointsPerController",
        "nControllersWithPd",
        "nEndpointsUnderThem",
        "withPdEndpointsPerController",
        "nEntityTypes",
        "purposeDataCounts",
        "entityUsage",
    ]
    assert doc["endpointsPerController"] == {"min": 1, "max": 4, "mean": pytest.approx(7 / 3)}
    assert Stats.from_dict(doc) == stats


@pytest.mark.parametrize(
    "doc",
    [
        {},
        {"nControllers": 1},
        {
            "nControllers": "many",
            "nEndpoints": 1,
            "endpointsPerController": {"min": 1, "max": 1, "mean": 1},
            "nControllersWithPd": 1,
            "nEndpointsUnderThem": 1,
            "withPdEndpointsPerController": {"min": 1, "max": 1, "mean": 1},
            "nEntityTypes": 1,
        },
    ],
)
def test_stats_from_dict_invalid(doc):
    with pytest.raises(SchemaError, match="stats"):
        Stats.from_dict(doc)


def test_transparency(webshop_policy, webshop_services):
    res = transparency(webshop_policy, webshop_services.services)

    assert res == Transparency(n_purposes=5, n_services=4, breadth=3)
    assert res.ratio == 1.25
    assert not res.flagged
    assert res.to_dict() == {
        "nPurposes": 5,
        "nServices": 4,
        "ratio": 1.25,
        "ratioFlagged": False,
        "breadth": 3,
    }


@pytest.mark.parametrize(
    "n_purposes,n_services,ratio,flagged",
    [(3, 3, 1.0, True), (2, 4, 0.5, True), (4, 2, 2.0, False), (1, 0, None, False)],
)
def test_transparency_ratio(n_purposes, n_services, ratio, flagged):
    res = Transparency(n_purposes, n_services, breadth=0)

    assert res.ratio == ratio
    assert res.flagged == flagged


def test_transparency_without_services():
    policy = LayeredPrivacyPolicy(purposes={Purpose("a", "A")})

    res = transparency(policy, [])

    assert res.ratio is None
    assert res.breadth == 0


def test_transparency_counts_components_once():
    shared = WebService("shared", net=ServiceNet.minimal("x"))
    services = [
        WebService("left", components=(shared,)),
        WebService("right", components=(shared,)),
    ]
    policy = LayeredPrivacyPolicy(purposes={Purpose("a", "A")})

    assert transparency(policy, services).n_services == 3


def test_format_table():
    stats = compute_stats(_tree([1, 4, 2, 5], data_controllers={1, 3}), "root", ["User"])

    table = format_table(stats, Transparency(17, 17, 4))

    assert table == (
        "controllers: 4, endpoints: 12, mean: 3.0, ratio: 1.0\n"
        "endpoints per controller: range [1, 5], mean 3.0\n"
        "controllers with personal data: 2, endpoints under them: 9, range [4, 5], "
        "mean 4.5\n"
        "entity types: 1\n"
        "purposes: 17, services: 17, breadth: 4\n"
        "WARNING: transparency ratio 1.0 <= 1, purposes do not outnumber services\n"
        "entity usage:\n"
        "  User: 9\n"
    )


def test_format_table_without_services():
    table = format_table(Stats(), Transparency(1, 0, 0))

    assert table.splitlines() == [
        "controllers: 0, endpoints: 0, mean: 0.0, ratio: n/a",
        "endpoints per controller: range n/a, mean 0.0",
        "controllers with personal data: 0, endpoints under them: 0, range n/a, mean 0.0",
        "entity types: 0",
        "purposes: 1, services: 0, breadth: 0",
    ]


def test_format_table_rounds_ratio():
    table = format_table(Stats(), Transparency(5, 3, 0))

    assert table.splitlines()[0].endswith("ratio: 1.67")

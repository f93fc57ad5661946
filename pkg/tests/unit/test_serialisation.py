import datetime as dt
import json

import pytest

from purposegraph.errors import (
    DanglingEdgeError,
    PolicySyntaxError,
    SchemaError,
    ServiceModelError,
    UnknownServiceError,
)
from purposegraph.lpl import (
    DataElement,
    DataRecipient,
    InheritanceEdge,
    LayeredPrivacyPolicy,
    PrivacyModel,
    Purpose,
    RecipientKind,
    Retention,
    RetentionType,
    UnderlyingPurposeEdge,
)
from purposegraph.serialisation import (
    parse_extraction,
    parse_policy,
    parse_policy_fragment,
    parse_service_model,
    policy_to_dict,
    serialize_extraction,
    serialize_policy,
    serialize_service_model,
)
from purposegraph.servicenet import GovEdge, ServiceModel, ServiceNet, WebService
from purposegraph.testing import assert_policies_equal, random_policy, random_service_tree


def _doc(**overrides):
    doc = {
        "version": "1.0",
        "name": "shop",
        "lang": "en",
        "ppURI": "",
        "purposes": [{"id": "a", "name": "A"}],
    }
    doc.update(overrides)
    return doc


def test_parse_webshop_policy(webshop_policy):
    p = webshop_policy.purpose("p2'")

    assert webshop_policy.name == "webshop"
    assert webshop_policy.pp_uri == "https://shop.example.com/privacy"
    assert p.data == {DataElement("User", "email"), DataElement("User", "name")}
    assert p.recipients == {DataRecipient("ACME", RecipientKind.CONTROLLER)}
    assert p.retention == Retention(RetentionType.AFTER_PURPOSE, dt.date(2030, 12, 31))
    assert p.privacy_model == PrivacyModel("k-anonymity", {"k": 5})
    assert webshop_policy.hierarchy == {InheritanceEdge("p1", "p1.1")}
    assert len(webshop_policy.composition) == 3


def test_serialize_is_canonical(webshop_text, webshop_policy):
    assert serialize_policy(webshop_policy) == webshop_text


def test_defaults_are_filled():
    res = parse_policy(json.dumps(_doc()))

    purpose = res.purpose("a")
    assert purpose.opt_out is False
    assert purpose.required is True
    assert purpose.descr == ""
    assert purpose.retention == Retention()
    assert purpose.privacy_model is None
    assert res.composition == frozenset()


def test_bytes_input():
    assert parse_policy(json.dumps(_doc()).encode("utf-8")).name == "shop"


def test_invalid_utf8():
    with pytest.raises(PolicySyntaxError, match="1:1"):
        parse_policy(b"\xff\xfe{")


def test_malformed_json_position():
    with pytest.raises(PolicySyntaxError) as exc_info:
        parse_policy('{\n  "version": "1.0",\n  "name" "x"\n}')

    assert exc_info.value.line == 3
    assert exc_info.value.col == 10


@pytest.mark.parametrize(
    "overrides,path",
    [
        ({"purposes": [{"id": "a"}]}, "purposes[0]"),
        ({"purposes": [{"id": "a", "name": "A", "optOut": "no"}]}, "purposes[0].optOut"),
        ({"purposes": [{"id": "a", "name": "A", "data": ["email"]}]}, "purposes[0].data[0]"),
        (
            {"purposes": [{"id": "a", "name": "A", "retention": {"type": "forever"}}]},
            "purposes[0].retention.type",
        ),
        (
            {
                "purposes": [
                    {
                        "id": "a",
                        "name": "A",
                        "retention": {"type": "fixedDate", "pointInTime": "31/12/2030"},
                    }
                ]
            },
            "purposes[0].retention.pointInTime",
        ),
        (
            {
                "purposes": [
                    {"id": "a", "name": "A", "retention": {"type": "fixedDate"}}
                ]
            },
            "purposes[0].retention",
        ),
        (
            {
                "purposes": [
                    {
                        "id": "a",
                        "name": "A",
                        "recipients": [{"name": "X", "kind": "Friend"}],
                    }
                ]
            },
            "purposes[0].recipients[0].kind",
        ),
        (
            {
                "purposes": [
                    {
                        "id": "a",
                        "name": "A",
                        "privacyModel": {"name": "k-anonymity", "attributes": {"k": "5"}},
                    }
                ]
            },
            "purposes[0].privacyModel.attributes.k",
        ),
        ({"purposes": [{"id": "a", "name": "A", "data": ["U.a", "U.a"]}]}, "purposes[0].data"),
        ({"composition": [{"parent": "a"}]}, "composition[0]"),
        ({"version": 1}, "version"),
        ({"extra": True}, ""),
    ],
)
def test_schema_errors(overrides, path):
    with pytest.raises(SchemaError) as exc_info:
        parse_policy(json.dumps(_doc(**overrides)))

    assert exc_info.value.path == path


def test_missing_required_key():
    doc = _doc()
    del doc["ppURI"]

    with pytest.raises(SchemaError, match=r"Missing required key\(s\) \['ppURI'\]"):
        parse_policy(json.dumps(doc))


def test_boolean_is_not_a_number():
    doc = _doc(
        purposes=[
            {
                "id": "a",
                "name": "A",
                "privacyModel": {"name": "k-anonymity", "attributes": {"k": True}},
            }
        ]
    )

    with pytest.raises(SchemaError, match="got a boolean"):
        parse_policy(json.dumps(doc))


def test_lenient_ignores_unknown_keys():
    doc = _doc(extra=True, purposes=[{"id": "a", "name": "A", "icon": "x.png"}])

    with pytest.raises(SchemaError):
        parse_policy(json.dumps(doc))

    assert parse_policy(json.dumps(doc), lenient=True).purpose_ids == ("a",)


@pytest.mark.parametrize(
    "purpose,path",
    [
        (
            {"id": "a", "name": "A", "retention": {"type": "indefinite", "extra": 1}},
            "purposes[0].retention",
        ),
        (
            {
                "id": "a",
                "name": "A",
                "recipients": [{"name": "X", "kind": "Processor", "extra": 1}],
            },
            "purposes[0].recipients[0]",
        ),
        (
            {
                "id": "a",
                "name": "A",
                "privacyModel": {"name": "k-anonymity", "attributes": {}, "extra": 1},
            },
            "purposes[0].privacyModel",
        ),
    ],
    ids=["retention", "recipient", "privacy-model"],
)
def test_lenient_nested_unknown_keys(purpose, path):
    text = json.dumps(_doc(purposes=[purpose]))

    with pytest.raises(SchemaError, match=r"Unknown key\(s\) \['extra'\]") as exc_info:
        parse_policy(text)
    assert exc_info.value.path == path

    assert parse_policy(text, lenient=True).purpose_ids == ("a",)


def test_lenient_service_recipients():
    ws = WebService(
        "leaf",
        net=ServiceNet.minimal("step"),
        recipients={DataRecipient("ACME")},
    )
    doc = json.loads(serialize_service_model(ServiceModel(services=(ws,))))
    doc["services"][0]["recipients"][0]["extra"] = 1

    with pytest.raises(SchemaError) as exc_info:
        parse_service_model(json.dumps(doc))
    assert exc_info.value.path == "services[0].recipients[0]"

    res = parse_service_model(json.dumps(doc), lenient=True)
    assert res.services[0].recipients == {DataRecipient("ACME")}


@pytest.mark.parametrize("raw", ["2024", "20240101", "2024-01", "2024-W01-1", "2024-1-1"])
def test_point_in_time_must_be_full_date(raw):
    doc = _doc(
        purposes=[
            {"id": "a", "name": "A", "retention": {"type": "fixedDate", "pointInTime": raw}}
        ]
    )

    with pytest.raises(SchemaError, match="Expected a YYYY-MM-DD date") as exc_info:
        parse_policy(json.dumps(doc))

    assert exc_info.value.path == "purposes[0].retention.pointInTime"


def test_extraction_sections_always_allowed():
    doc = _doc(gov=[], services=[], stats={})

    assert parse_policy(json.dumps(doc)).name == "shop"


@pytest.mark.parametrize(
    "second",
    [{"id": "a", "name": "B"}, {"id": "a", "name": "A"}],
    ids=["different", "identical"],
)
def test_duplicate_purpose(second):
    doc = _doc(purposes=[{"id": "a", "name": "A"}, second])

    with pytest.raises(SchemaError, match="Duplicate entry purpose id `a`") as exc_info:
        parse_policy(json.dumps(doc))

    assert exc_info.value.path == "purposes"


def test_duplicate_edge():
    doc = _doc(
        purposes=[{"id": "a", "name": "A"}, {"id": "b", "name": "B"}],
        composition=[{"parent": "a", "child": "b"}, {"parent": "a", "child": "b"}],
    )

    with pytest.raises(SchemaError, match="Duplicate entry"):
        parse_policy(json.dumps(doc))


def test_dangling_edge():
    doc = _doc(composition=[{"parent": "a", "child": "ghost"}])

    with pytest.raises(DanglingEdgeError, match="ghost"):
        parse_policy(json.dumps(doc))


def test_multiple_inheritance_rejected():
    doc = _doc(
        purposes=[
            {"id": "a", "name": "A"},
            {"id": "b", "name": "B"},
            {"id": "c", "name": "C"},
        ],
        hierarchy=[{"parent": "a", "child": "c"}, {"parent": "b", "child": "c"}],
    )

    with pytest.raises(SchemaError, match="multiple inheritance is forbidden"):
        parse_policy(json.dumps(doc))


def test_underlying_policies():
    doc = _doc(
        underlyingPolicies=[
            _doc(name="payments", purposes=[{"id": "billing", "name": "Billing"}])
        ]
    )

    res = parse_policy(json.dumps(doc))

    assert res.underlying_policy_names == {"payments"}
    assert res.underlying_policies[0].purpose("billing").name == "Billing"


def test_nested_paths_in_underlying_policies():
    doc = _doc(underlyingPolicies=[_doc(purposes=[{"id": "x"}])])

    with pytest.raises(SchemaError) as exc_info:
        parse_policy(json.dumps(doc))

    assert exc_info.value.path == "underlyingPolicies[0].purposes[0]"


@pytest.mark.parametrize("seed", range(100))
def test_round_trip_generated_policies(seed):
    policy = random_policy(seed)
    text = serialize_policy(policy)

    assert_policies_equal(parse_policy(text), policy)
    assert serialize_policy(parse_policy(text)) == text


def test_non_ascii_kept():
    policy = LayeredPrivacyPolicy(
        name="café", purposes={Purpose("a", "Überprüfung", descr="données")}
    )

    text = serialize_policy(policy)

    assert "Überprüfung" in text
    assert parse_policy(text.encode("utf-8")) == policy


def test_policy_to_dict_orders_everything():
    policy = LayeredPrivacyPolicy(
        purposes={
            Purpose("b", "B", data={DataElement("U", "z"), DataElement("U", "a")}),
            Purpose("a", "A", data={DataElement("U", "z"), DataElement("U", "a")}),
            Purpose("c", "C"),
        },
        composition={UnderlyingPurposeEdge("b", "c"), UnderlyingPurposeEdge("a", "b")},
    )

    doc = policy_to_dict(policy)

    assert [p["id"] for p in doc["purposes"]] == ["a", "b", "c"]
    assert doc["purposes"][0]["data"] == ["U.a", "U.z"]
    assert doc["composition"] == [
        {"parent": "a", "child": "b"},
        {"parent": "b", "child": "c"},
    ]


def test_parse_service_model(webshop_services):
    by_name = webshop_services.by_name

    assert [s.name for s in webshop_services.services] == ["shop"]
    assert sorted(by_name) == ["checkout", "mailer", "shop", "signup"]
    assert by_name["shop"].net is None
    assert by_name["checkout"].net.input == "i"
    assert GovEdge("signup", "p2'") in webshop_services.gov


@pytest.mark.parametrize("seed", range(20))
def test_service_model_round_trip(seed):
    model = ServiceModel(services=(random_service_tree(seed),))

    text = serialize_service_model(model)

    assert parse_service_model(text) == model
    assert serialize_service_model(parse_service_model(text)) == text


def _services_doc(*records, gov=()):
    return json.dumps({"services": list(records), "gov": list(gov)})


_NET = {
    "places": ["i", "o"],
    "transitions": [{"id": "t"}],
    "arcs": [["i", "t"], ["t", "o"]],
    "input": "i",
    "output": "o",
}


def test_service_unknown_component():
    with pytest.raises(UnknownServiceError, match="ghost"):
        parse_service_model(_services_doc({"name": "a", "components": ["ghost"]}))


def test_service_duplicate_name():
    with pytest.raises(ServiceModelError, match="more than once"):
        parse_service_model(
            _services_doc({"name": "a", "net": _NET}, {"name": "a", "net": _NET})
        )


def test_service_component_cycle():
    with pytest.raises(ServiceModelError, match="cycle"):
        parse_service_model(
            _services_doc(
                {"name": "a", "components": ["b"]}, {"name": "b", "components": ["a"]}
            )
        )


def test_service_leaf_without_net():
    with pytest.raises(ServiceModelError, match="must have a service net"):
        parse_service_model(_services_doc({"name": "a"}))


def test_service_invalid_net():
    net = dict(_NET, arcs=[["i", "t"]])

    with pytest.raises(ServiceModelError, match="Invalid service net of `a`"):
        parse_service_model(_services_doc({"name": "a", "net": net}))


def test_service_arc_shape():
    net = dict(_NET, arcs=[["i", "t", "o"]])

    with pytest.raises(SchemaError) as exc_info:
        parse_service_model(_services_doc({"name": "a", "net": net}))

    assert exc_info.value.path == "services[0].net.arcs[0]"


def test_shared_component():
    model = parse_service_model(
        _services_doc(
            {"name": "a", "components": ["c"]},
            {"name": "b", "components": ["c"]},
            {"name": "c", "net": _NET},
        )
    )

    assert [s.name for s in model.services] == ["a", "b"]
    assert model.services[0].components[0] is model.services[1].components[0]


def test_extraction_round_trip(webshop_policy, webshop_services):
    stats = {"nControllers": 1}

    text = serialize_extraction(
        webshop_policy, webshop_services.services, webshop_services.gov, stats
    )
    policy, model, raw = parse_extraction(text)

    assert policy == webshop_policy
    assert model == webshop_services
    assert raw == stats
    # extraction results are valid service model documents
    assert parse_service_model(text) == webshop_services


def test_parse_policy_fragment():
    text = json.dumps(
        {
            "purposes": [{"id": "p5", "name": "Client tracking", "data": ["User.email"]}],
            "composition": [{"parent": "p5", "child": "p4'"}],
        }
    )

    res = parse_policy_fragment(text)

    assert {p.id for p in res.purposes} == {"p5"}
    assert res.composition == {UnderlyingPurposeEdge("p5", "p4'")}
    assert res.hierarchy == frozenset()


@pytest.mark.parametrize(
    "doc,match",
    [
        ({"purposes": [{"id": "a", "name": "A"}, {"id": "a", "name": "B"}]}, "Duplicate"),
        ({"version": "1.0"}, "Unknown key"),
        (
            {
                "hierarchy": [
                    {"parent": "a", "child": "c"},
                    {"parent": "b", "child": "c"},
                ]
            },
            "multiple inheritance",
        ),
    ],
)
def test_parse_policy_fragment_errors(doc, match):
    with pytest.raises(SchemaError, match=match):
        parse_policy_fragment(json.dumps(doc))


def test_service_net_preserved():
    ws = WebService(
        "leaf",
        net=ServiceNet.minimal("step", {DataElement("User", "email")}, "t1"),
        recipients={DataRecipient("ACME")},
        underlying_policies={"payments"},
    )
    model = ServiceModel(services=(ws,), gov={GovEdge("leaf", "p")})

    assert parse_service_model(serialize_service_model(model)) == model

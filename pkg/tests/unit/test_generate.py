import datetime as dt

import pytest

from purposegraph.config import PurposeDefaults
from purposegraph.extraction import build_call_graph, generate, index
from purposegraph.lpl import (
    DataElement,
    DataRecipient,
    PrivacyModel,
    Retention,
    RetentionType,
    UnderlyingPurposeEdge,
)
from purposegraph.minisvc import parse_source
from purposegraph.servicenet import GovEdge, check_coverage, validate_net
from purposegraph.validation import layers, validate

CONTACT = DataElement("Contact", "email")
PHONE = DataElement("Phone", "number")


def _generate(units, name="corpus", **kwargs):
    table = index(units)
    return generate(table, build_call_graph(table), name, **kwargs)


@pytest.fixture
def notifier_result(notifier_units):
    return _generate(notifier_units, "notifier")


def test_generate_f1(f1_units):
    res = _generate(f1_units, "f1")

    assert res.policy.purpose_ids == ("account", "account/register", "f1")
    assert res.policy.composition == {
        UnderlyingPurposeEdge("f1", "account"),
        UnderlyingPurposeEdge("account", "account/register"),
    }
    register = res.policy.purpose("account/register")
    assert register.name == "register"
    assert register.data == {DataElement("User", "email")}
    assert register.recipients == {DataRecipient("f1")}
    assert register.descr == "Entry-point AccountController.register serving /register"
    assert res.root_purpose.id == "f1"
    assert [str(w) for w in res.warnings] == [
        "account.msvc:1:144 call `UserRepo.save` leaves the corpus and is not analysed"
    ]


def test_generate_notifier(notifier_result):
    res = notifier_result

    assert layers(res.policy, "notifier") == [
        ["notifier"],
        ["alerts"],
        ["alerts/api/alert", "alerts/api/status"],
    ]
    alert = res.policy.purpose("alerts/api/alert")
    assert alert.descr == "Alert the user about account activity"
    assert alert.data == {CONTACT, PHONE}
    assert res.policy.purpose("alerts/api/status").data == frozenset()
    assert res.policy.purpose("alerts").data == {CONTACT, PHONE}
    assert res.policy.purpose("alerts").name == "AlertController"
    assert res.root_purpose.data == {CONTACT, PHONE}
    assert [p.id for p in res.controller_purposes] == ["alerts"]
    assert [p.id for p in res.endpoint_purposes] == ["alerts/api/alert", "alerts/api/status"]


def test_generated_policy_is_valid(notifier_result):
    assert validate(notifier_result.policy).is_valid


def test_generated_services_mirror_purposes(notifier_result):
    res = notifier_result

    root = res.services
    assert root.name == "notifier"
    (controller,) = root.components
    assert (controller.name, controller.url) == ("alerts", "/api")
    assert [(c.name, c.url) for c in controller.components] == [
        ("alerts/api/alert", "/api/alert"),
        ("alerts/api/status", "/api/status"),
    ]
    for leaf in controller.components:
        assert leaf.net is not None
        assert validate_net(leaf.net) == []
        assert leaf.net.data == res.policy.purpose(leaf.name).data

    assert res.gov == {GovEdge(pid, pid) for pid in res.policy.purpose_ids}
    assert check_coverage(res.policy, [root], res.gov).is_complete


def test_generate_applies_defaults(notifier_units):
    defaults = PurposeDefaults(
        opt_out=True,
        required=False,
        retention=Retention(RetentionType.AFTER_PURPOSE, dt.date(2031, 1, 1)),
        privacy_model=PrivacyModel("k-anonymity", {"k": 5}),
        recipients=frozenset({DataRecipient("ACME")}),
        loc="api.example.com",
        pp_uri="https://example.com/privacy",
    )

    res = _generate(notifier_units, "notifier", defaults=defaults)

    for purpose in res.policy.purposes:
        assert purpose.opt_out
        assert not purpose.required
        assert purpose.retention == defaults.retention
        assert purpose.privacy_model == defaults.privacy_model
        assert purpose.recipients == {DataRecipient("ACME")}
    assert res.policy.pp_uri == "https://example.com/privacy"
    assert res.services.loc == "api.example.com"
    assert validate(res.policy).is_valid


def test_controller_ids_are_disambiguated():
    units = [
        parse_source(
            """
@Controller("shop") class AShop { @RequestMapping("/a") void a() {} }
@Controller("shop") class BShop { @RequestMapping("/a") void a() {} }
@Controller("corpus") class CShop {}
""",
            "a.msvc",
        )
    ]

    res = _generate(units)

    assert [p.id for p in res.controller_purposes] == ["shop", "shop#BShop", "corpus#CShop"]
    assert [p.id for p in res.endpoint_purposes] == ["shop/a", "shop/a#a"]
    assert res.policy.children("shop#BShop") == ("shop/a#a",)
    assert validate(res.policy).is_valid


def test_endpoint_ids_are_disambiguated():
    units = [
        parse_source(
            """
@Controller("c") class C {
    @RequestMapping("/x") void first() {}
    @RequestMapping("x") void second() {}
}
""",
            "a.msvc",
        )
    ]

    res = _generate(units)

    assert [(p.id, p.name) for p in res.endpoint_purposes] == [
        ("c/x", "first"),
        ("c/x#second", "second"),
    ]


def test_controller_without_entry_points():
    units = [parse_source('@Controller("idle") class Idle {}', "a.msvc")]

    res = _generate(units)

    assert res.policy.children("idle") == ()
    assert res.stats.n_controllers == 1
    assert res.stats.n_endpoints == 0
    (idle,) = res.services.components
    assert idle.net is not None


def test_empty_corpus():
    res = _generate([], "empty")

    assert res.policy.purpose_ids == ("empty",)
    assert res.policy.composition == frozenset()
    assert res.services.net is not None
    assert res.stats.n_controllers == 0

"""
Fixtures and data for tests.
"""
from os.path import abspath, dirname, join

import pytest

from purposegraph.minisvc import parse_source
from purposegraph.serialisation import parse_policy, parse_service_model
from purposegraph.testing import write_corpus

TEST_DATA = join(dirname(abspath(__file__)), "test_data")

F1_DIR = join(TEST_DATA, "f1")

NOTIFIER_SOURCES = {
    "notify.msvc": """
interface Notifier {
    void send(String to);
}

class MailNotifier implements Notifier {
    void send(String to) {
        new Contact();
    }
}

class SmsNotifier implements Notifier {
    void send(String to) {
        Phone p;
    }
}

class PushNotifier implements Notifier {
    void send(String to) {}
}
""",
    "entities.msvc": """
@Document
class Contact {
    @PersonalData
    String email;
}

@Document
class Phone {
    @PersonalData
    String number;
    String carrier;
}

@Document
class AuditLog {
    String line;
}
""",
    "controller.msvc": """
@Controller("alerts")
@RequestMapping("/api")
class AlertController {
    Notifier notifier;
    Logger log;

    @RequestMapping("/alert")
    @Description("Alert the user about account activity")
    void alert(String to) {
        notifier.send(to);
        log.info(to);
    }

    @RequestMapping("status")
    void status() {}

    void helper() {
        AuditLog entry;
    }
}
""",
}


@pytest.fixture(scope="session")
def test_data_path():
    return TEST_DATA


@pytest.fixture(scope="session")
def f1_dir():
    return F1_DIR


@pytest.fixture(autouse=True)
def no_defaults_env(monkeypatch):
    # a defaults file configured on the developer machine must not leak into tests
    monkeypatch.delenv("PURPOSEGRAPH_DEFAULTS", raising=False)


@pytest.fixture(scope="session")
def webshop_text():
    with open(join(TEST_DATA, "webshop_policy.json"), encoding="utf-8") as fh:
        return fh.read()


@pytest.fixture
def webshop_policy(webshop_text):
    return parse_policy(webshop_text)


@pytest.fixture
def webshop_services():
    with open(join(TEST_DATA, "webshop_services.json"), "rb") as fh:
        return parse_service_model(fh.read())


@pytest.fixture
def f1_units():
    units = []
    for name in ("account.msvc", "user.msvc"):
        with open(join(F1_DIR, name), encoding="utf-8") as fh:
            units.append(parse_source(fh.read(), name))
    return units


@pytest.fixture
def notifier_units():
    return [
        parse_source(text, path) for path, text in sorted(NOTIFIER_SOURCES.items())
    ]


@pytest.fixture
def notifier_dir(tmp_path):
    root = tmp_path / "notifier"
    write_corpus(NOTIFIER_SOURCES, root)
    return root

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from purposegraph.errors import LexError, ParseError
from purposegraph.minisvc import format_unit, parse_source

FUZZ_SETTINGS = settings(
    max_examples=300,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)

_FRAGMENTS = [
    "class",
    "interface",
    "implements",
    "new",
    "@Controller",
    "@RequestMapping",
    "@Document",
    "@PersonalData",
    '("/x")',
    '"a\\"b"',
    "A",
    "String",
    "void",
    "m",
    "x",
    "(",
    ")",
    "{",
    "}",
    ";",
    ".",
    ",",
    "\n",
    "// comment\n",
    "#",
]
N_SEEDED_INPUTS = 100_000

_TOKEN_SOUP = st.lists(st.sampled_from(_FRAGMENTS), max_size=40).map(" ".join)


def _check_position(text, exc):
    lines = text.split("\n")
    assert 1 <= exc.line <= len(lines)
    assert 1 <= exc.col <= len(lines[exc.line - 1]) + 1
    assert exc.path == "fuzz.msvc"
    assert str(exc).startswith(f"fuzz.msvc:{exc.line}:{exc.col}: ")


@FUZZ_SETTINGS
@given(text=st.text(max_size=200))
def test_arbitrary_text(text):
    try:
        parse_source(text, "fuzz.msvc")
    except (LexError, ParseError) as exc:
        _check_position(text, exc)


@FUZZ_SETTINGS
@given(text=_TOKEN_SOUP)
def test_token_soup(text):
    try:
        unit = parse_source(text, "fuzz.msvc")
    except (LexError, ParseError) as exc:
        _check_position(text, exc)
    else:
        # anything which parses can be printed and parsed again
        printed = format_unit(unit)
        assert format_unit(parse_source(printed, "fuzz.msvc")) == printed


def test_seeded_token_soup():
    rng = np.random.default_rng(0)
    alphabet = _FRAGMENTS + ["@", '"', "\\", "\t", "é"]

    for _ in range(N_SEEDED_INPUTS):
        size = rng.integers(0, 40)
        text = " ".join(alphabet[i] for i in rng.integers(0, len(alphabet), size))
        try:
            parse_source(text, "fuzz.msvc")
        except (LexError, ParseError) as exc:
            _check_position(text, exc)

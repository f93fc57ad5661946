import ast
from pathlib import Path

import pytest

import purposegraph

PACKAGE_DIR = Path(purposegraph.__file__).parent
SOURCES = sorted(PACKAGE_DIR.rglob("*.py"))


def _public(name):
    return not name.startswith("_")


def _undocumented(tree):
    for node in tree.body:
        if isinstance(node, (ast.FunctionDef, ast.ClassDef)) and _public(node.name):
            if ast.get_docstring(node) is None:
                yield node.name
            if isinstance(node, ast.ClassDef):
                for member in node.body:
                    if (
                        isinstance(member, ast.FunctionDef)
                        and _public(member.name)
                        and ast.get_docstring(member) is None
                    ):
                        yield f"{node.name}.{member.name}"


@pytest.mark.parametrize(
    "source", SOURCES, ids=[s.relative_to(PACKAGE_DIR).as_posix() for s in SOURCES]
)
def test_public_api_documented(source):
    tree = ast.parse(source.read_text(encoding="utf-8"))

    assert list(_undocumented(tree)) == []

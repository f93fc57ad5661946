"""
Check that an installed copy of purposegraph is complete

Every module must import and the command-line interface must be able to validate a
trivial policy.
"""
import importlib
import json
import pkgutil
import tempfile
from pathlib import Path

import purposegraph
from purposegraph.cli import ExitStatus, main


def import_submodules(package_name):
    """
    Import a package and, recursively, all of its modules
    """
    package = importlib.import_module(package_name)

    for _, name, is_pkg in pkgutil.walk_packages(package.__path__):
        full_name = package.__name__ + "." + name
        importlib.import_module(full_name)
        if is_pkg:
            import_submodules(full_name)


import_submodules("purposegraph")

with tempfile.TemporaryDirectory() as tmp:
    policy = Path(tmp) / "policy.json"
    doc = {"version": "1.0", "name": "x", "lang": "en", "ppURI": "", "purposes": []}
    policy.write_text(json.dumps(doc))
    assert main(["-q", "validate", str(policy)]) == ExitStatus.OK

print(purposegraph.__version__)

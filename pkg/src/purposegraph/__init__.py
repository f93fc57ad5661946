"""
purposegraph, composed privacy purposes for annotated web services.

See README and docs for more info.
"""
try:
    from importlib.metadata import version as _version
except ImportError:
    # no recourse if the fallback isn't there either...
    from importlib_metadata import version as _version

try:
    __version__ = _version("purposegraph")
except Exception:  # pylint: disable=broad-except  # pragma: no cover
    # Local copy, not installed with poetry
    __version__ = "unknown"

from purposegraph.lpl import LayeredPrivacyPolicy, Purpose
from purposegraph.serialisation import parse_policy, serialize_policy
from purposegraph.validation import validate

__all__ = [
    "LayeredPrivacyPolicy",
    "Purpose",
    "parse_policy",
    "serialize_policy",
    "validate",
]

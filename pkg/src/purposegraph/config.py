"""
Defaults for purpose fields which cannot be derived from source code

Static analysis finds the data accessed by an entry-point, but ``optOut``,
``required``, retention, privacy model and recipients require human judgement. These
are declared once in a defaults file and applied uniformly to every generated purpose,
so the generated composition satisfies the equality and ordering constraints by
construction.

Defaults files are YAML (JSON is accepted as well):

.. code:: yaml

    optOut: false
    required: true
    retention:
      type: afterPurpose
      pointInTime: "2030-01-01"
    privacyModel:
      name: k-anonymity
      attributes: {k: 5}
    recipients:
      - {name: ACME Ltd, kind: Controller}
    loc: api.example.com
    policy:
      version: "1.0"
      lang: en
      ppURI: https://example.com/privacy
    privacyModels:
      delta-presence: {delta: lower}
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from logging import getLogger
from typing import Any, Dict, FrozenSet, Mapping, Optional

import yaml

from purposegraph._typing import FilePath
from purposegraph.errors import SchemaError
from purposegraph.lpl import (
    DataRecipient,
    PrivacyModel,
    PrivacyModelRegistry,
    Retention,
    get_privacy_model_registry,
)

_logger = getLogger(__name__)

DEFAULTS_ENV_VAR = "PURPOSEGRAPH_DEFAULTS"
"""
Environment variable which may point to a defaults file
"""

_KNOWN_KEYS = {
    "optOut",
    "required",
    "retention",
    "privacyModel",
    "recipients",
    "loc",
    "policy",
    "privacyModels",
}
_POLICY_KEYS = {"version", "lang", "ppURI"}


@dataclass(frozen=True)
class PurposeDefaults:
    """
    Values used for purpose fields which static analysis cannot derive

    If ``recipients`` is ``None`` the controller of record, named after the analysed
    corpus, is used.
    """

    opt_out: bool = False
    required: bool = True
    retention: Retention = Retention()
    privacy_model: Optional[PrivacyModel] = None
    recipients: Optional[FrozenSet[DataRecipient]] = None
    loc: str = "localhost"
    version: str = "1.0"
    lang: str = "en"
    pp_uri: str = ""
    privacy_models: Mapping[str, Mapping[str, str]] = field(
        default_factory=dict, hash=False
    )

    def recipients_for(self, controller: str) -> FrozenSet[DataRecipient]:
        """
        Recipients of generated purposes for a given controller of record
        """
        if self.recipients is not None:
            return self.recipients
        return frozenset({DataRecipient(controller)})

    @property
    def registry(self) -> PrivacyModelRegistry:
        """
        Global privacy model registry extended by ``privacy_models``
        """
        registry = get_privacy_model_registry()
        if self.privacy_models:
            registry = registry.extended(self.privacy_models)
        return registry


def defaults_from_dict(doc: Mapping[str, Any]) -> PurposeDefaults:
    """
    Create :class:`PurposeDefaults` from a parsed defaults document

    Raises
    ------
    :class:`purposegraph.errors.SchemaError`
        The document does not follow the defaults schema
    """
    # Reuse the policy codec so purposes and defaults share one schema
    from purposegraph.serialisation import (
        privacy_model_from_doc,
        recipient_from_doc,
        retention_from_doc,
    )

    if not isinstance(doc, Mapping):
        raise SchemaError("", "Defaults must be a mapping")
    unknown = sorted(set(doc) - _KNOWN_KEYS)
    if unknown:
        raise SchemaError("", f"Unknown keys {unknown}")

    kwargs: Dict[str, Any] = {}
    for key, attr in (("optOut", "opt_out"), ("required", "required")):
        if key in doc:
            if not isinstance(doc[key], bool):
                raise SchemaError(key, "Expected a boolean")
            kwargs[attr] = doc[key]
    if "retention" in doc:
        kwargs["retention"] = retention_from_doc(doc["retention"], "retention")
    if doc.get("privacyModel") is not None:
        kwargs["privacy_model"] = privacy_model_from_doc(
            doc["privacyModel"], "privacyModel"
        )
    if "recipients" in doc:
        if not isinstance(doc["recipients"], list):
            raise SchemaError("recipients", "Expected a list")
        kwargs["recipients"] = frozenset(
            recipient_from_doc(r, f"recipients[{i}]")
            for i, r in enumerate(doc["recipients"])
        )
    if "loc" in doc:
        kwargs["loc"] = str(doc["loc"])

    header = doc.get("policy", {})
    if not isinstance(header, Mapping) or set(header) - _POLICY_KEYS:
        raise SchemaError("policy", f"Expected a mapping with keys {sorted(_POLICY_KEYS)}")
    for key, attr in (("version", "version"), ("lang", "lang"), ("ppURI", "pp_uri")):
        if key in header:
            kwargs[attr] = str(header[key])

    models = doc.get("privacyModels", {})
    if not isinstance(models, Mapping):
        raise SchemaError("privacyModels", "Expected a mapping")
    try:
        # validates the directions
        PrivacyModelRegistry(models)
    except (ValueError, AttributeError) as exc:
        raise SchemaError("privacyModels", str(exc)) from exc
    kwargs["privacy_models"] = {k: dict(v) for k, v in models.items()}

    return PurposeDefaults(**kwargs)


def load_defaults(path: Optional[FilePath] = None) -> PurposeDefaults:
    """
    Load purpose defaults

    Parameters
    ----------
    path
        Defaults file. If ``None``, the file named by the ``PURPOSEGRAPH_DEFAULTS``
        environment variable is used, if set. Otherwise the built-in defaults are
        returned

    Returns
    -------
    :class:`PurposeDefaults`

    Raises
    ------
    OSError
        The file cannot be read

    :class:`purposegraph.errors.SchemaError`
        The file is not valid YAML or does not follow the defaults schema
    """
    if path is None:
        path = os.environ.get(DEFAULTS_ENV_VAR) or None
        if path is None:
            return PurposeDefaults()
        _logger.debug("Using defaults from $%s", DEFAULTS_ENV_VAR)

    _logger.info("Reading defaults %s", path)
    with open(path, encoding="utf-8") as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise SchemaError("", f"Invalid YAML in {path}: {exc}") from exc

    return defaults_from_dict(doc if doc is not None else {})

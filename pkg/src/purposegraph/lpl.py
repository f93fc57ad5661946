"""
Domain types of the Layered Privacy Language (LPL) extended with composed purposes

A :class:`LayeredPrivacyPolicy` holds a set of :class:`Purpose` elements which are
related by two complementary relations:

* composition (``has-a``), stored as :class:`UnderlyingPurposeEdge`. Composition edges
  are subject to the validity constraints checked in :mod:`purposegraph.validation`.
* inheritance (``is-a``), stored as :class:`InheritanceEdge`. LPL forbids multiple
  inheritance.

All types are immutable and can be shared between threads.
"""
from __future__ import annotations

import datetime as dt
import enum
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Mapping, Optional, Tuple

from typing_extensions import Self

from purposegraph._typing import AttributeValue
from purposegraph.errors import DanglingEdgeError, SchemaError, UnknownAttributeError

QUALIFIED_NAME_SEPARATOR = "."


class Ordering(enum.Enum):
    """
    Result of comparing two LPL elements
    """

    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"
    INCOMPARABLE = "Incomparable"


class RecipientKind(str, enum.Enum):
    """
    Role of a :class:`DataRecipient`
    """

    CONTROLLER = "Controller"
    PROCESSOR = "Processor"
    THIRD_PARTY = "ThirdParty"


class RetentionType(str, enum.Enum):
    """
    Type of a :class:`Retention`
    """

    INDEFINITE = "indefinite"
    AFTER_PURPOSE = "afterPurpose"
    FIXED_DATE = "fixedDate"


# Indefinite >= AfterPurpose >= FixedDate
_RETENTION_RANK = {
    RetentionType.FIXED_DATE: 0,
    RetentionType.AFTER_PURPOSE: 1,
    RetentionType.INDEFINITE: 2,
}


def _sign(value: float) -> Ordering:
    if value < 0:
        return Ordering.LESS
    if value > 0:
        return Ordering.GREATER
    return Ordering.EQUAL


@dataclass(frozen=True, order=True)
class DataElement:
    """
    A personal data attribute, identified as ``Entity.field``
    """

    entity: str
    field: str

    def __post_init__(self) -> None:
        for part in (self.entity, self.field):
            if not part or QUALIFIED_NAME_SEPARATOR in part:
                raise SchemaError(
                    "data", f"Invalid data element `{self.entity}.{self.field}`"
                )

    @property
    def qualified_name(self) -> str:
        """
        Dot-join of entity and field
        """
        return f"{self.entity}{QUALIFIED_NAME_SEPARATOR}{self.field}"

    @classmethod
    def from_qualified_name(cls, name: str) -> DataElement:
        """
        Create from a ``Entity.field`` string

        Raises
        ------
        :class:`purposegraph.errors.SchemaError`
            ``name`` is not a dot-join of two non-empty identifiers
        """
        entity, sep, attribute = name.partition(QUALIFIED_NAME_SEPARATOR)
        if not sep:
            raise SchemaError("data", f"Expected `Entity.field`, got `{name}`")
        return cls(entity, attribute)

    def __str__(self) -> str:
        return self.qualified_name


@dataclass(frozen=True, order=True)
class DataRecipient:
    """
    A party which receives personal data
    """

    name: str
    kind: RecipientKind = RecipientKind.CONTROLLER

    def __post_init__(self) -> None:
        if not self.name:
            raise SchemaError("recipients", "DataRecipient name cannot be empty")

    def __str__(self) -> str:
        return f"{self.name} ({self.kind.value})"


@dataclass(frozen=True)
class Retention:
    """
    How long data is retained

    For ``afterPurpose`` retentions, ``point_in_time`` is an optional cap date.
    """

    rtype: RetentionType = RetentionType.INDEFINITE
    point_in_time: Optional[dt.date] = None

    def __post_init__(self) -> None:
        if self.rtype == RetentionType.FIXED_DATE and self.point_in_time is None:
            raise SchemaError("retention", "fixedDate retention requires pointInTime")
        if self.rtype == RetentionType.INDEFINITE and self.point_in_time is not None:
            raise SchemaError("retention", "indefinite retention cannot have pointInTime")

    def __str__(self) -> str:
        if self.point_in_time is None:
            return self.rtype.value
        return f"{self.rtype.value} {self.point_in_time.isoformat()}"


@dataclass(frozen=True)
class PrivacyModel:
    """
    An anonymisation guarantee, e.g. ``k-anonymity`` with attribute ``k``

    ``attributes`` does not take part in hashing, only in equality.
    """

    name: str
    attributes: Mapping[str, AttributeValue] = field(
        default_factory=dict, hash=False, compare=True
    )

    def __post_init__(self) -> None:
        if not self.name:
            raise SchemaError("privacyModel.name", "PrivacyModel name cannot be empty")
        for key, value in self.attributes.items():
            if not key:
                raise SchemaError(
                    "privacyModel.attributes", "Attribute names cannot be empty"
                )
            if isinstance(value, bool) or not math.isfinite(value):
                raise SchemaError(
                    f"privacyModel.attributes.{key}",
                    f"Expected a finite number, got {value!r}",
                )
        object.__setattr__(self, "attributes", dict(self.attributes))

    def __str__(self) -> str:
        attrs = ", ".join(f"{k}: {v}" for k, v in sorted(self.attributes.items()))
        return f"{self.name}{{{attrs}}}"


@dataclass(frozen=True)
class Purpose:
    """
    An LPL purpose: one reason for processing personal data
    """

    id: str
    name: str
    opt_out: bool = False
    required: bool = True
    descr: str = ""
    recipients: FrozenSet[DataRecipient] = frozenset()
    retention: Retention = Retention()
    privacy_model: Optional[PrivacyModel] = None
    data: FrozenSet[DataElement] = frozenset()

    def __post_init__(self) -> None:
        if not self.id:
            raise SchemaError("purposes.id", "Purpose id cannot be empty")
        if not self.name:
            raise SchemaError(f"purposes[{self.id}].name", "Purpose name cannot be empty")
        object.__setattr__(self, "recipients", frozenset(self.recipients))
        object.__setattr__(self, "data", frozenset(self.data))


@dataclass(frozen=True, order=True)
class UnderlyingPurposeEdge:
    """
    Composition edge: ``child`` is a component of ``parent``
    """

    parent: str
    child: str

    def __post_init__(self) -> None:
        if self.parent == self.child:
            raise SchemaError(
                "composition", f"Purpose `{self.parent}` cannot compose itself"
            )

    def __str__(self) -> str:
        return f"{self.parent} -> {self.child}"


@dataclass(frozen=True, order=True)
class InheritanceEdge:
    """
    PurposeHierarchy edge: ``child`` inherits from ``parent``
    """

    parent: str
    child: str

    def __post_init__(self) -> None:
        if self.parent == self.child:
            raise SchemaError(
                "hierarchy", f"Purpose `{self.parent}` cannot inherit from itself"
            )

    def __str__(self) -> str:
        return f"{self.parent} => {self.child}"


@dataclass(frozen=True)
class LayeredPrivacyPolicy:
    """
    A privacy policy

    Edge endpoints must reference purposes of this policy. Single inheritance is
    not enforced here so that :func:`purposegraph.validation.validate` can report it.
    """

    version: str = "1.0"
    name: str = ""
    lang: str = "en"
    pp_uri: str = ""
    underlying_policies: Tuple[LayeredPrivacyPolicy, ...] = ()
    purposes: FrozenSet[Purpose] = frozenset()
    composition: FrozenSet[UnderlyingPurposeEdge] = frozenset()
    hierarchy: FrozenSet[InheritanceEdge] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "underlying_policies", tuple(self.underlying_policies))
        object.__setattr__(self, "purposes", frozenset(self.purposes))
        object.__setattr__(self, "composition", frozenset(self.composition))
        object.__setattr__(self, "hierarchy", frozenset(self.hierarchy))

        index: Dict[str, Purpose] = {}
        for p in self.purposes:
            if p.id in index:
                raise SchemaError("purposes", f"Duplicate purpose id `{p.id}`")
            index[p.id] = p
        # Not part of the dataclass fields, so ignored by eq and hash
        object.__setattr__(self, "_index", index)

        for edge in sorted(self.composition) + sorted(self.hierarchy):  # type: ignore
            missing = [e for e in (edge.parent, edge.child) if e not in index]
            if missing:
                raise DanglingEdgeError(edge, missing)

    def purpose(self, purpose_id: str) -> Purpose:
        """
        Get a purpose by id

        Raises
        ------
        KeyError
            No purpose with ``purpose_id`` exists
        """
        return self._index[purpose_id]  # type: ignore

    def __contains__(self, purpose_id: object) -> bool:
        return purpose_id in self._index  # type: ignore

    @property
    def purpose_ids(self) -> Tuple[str, ...]:
        """
        Sorted purpose ids
        """
        return tuple(sorted(self._index))  # type: ignore

    @property
    def underlying_policy_names(self) -> FrozenSet[str]:
        """
        Names of the underlying policies
        """
        return frozenset(upp.name for upp in self.underlying_policies)

    def children(self, purpose_id: str) -> Tuple[str, ...]:
        """
        Sorted ids of the direct components of a purpose
        """
        return tuple(sorted(e.child for e in self.composition if e.parent == purpose_id))


def retention_compare(a: Retention, b: Retention) -> Ordering:
    """
    Compare the strictness of two retentions

    ``Indefinite > AfterPurpose > FixedDate`` regardless of dates. Retentions of the
    same type are ordered by ``point_in_time`` (a later date retains longer and is
    therefore ``GREATER``). An ``afterPurpose`` retention capped by a date is stricter
    than an uncapped one.

    Parameters
    ----------
    a
        Left-hand side

    b
        Right-hand side

    Returns
    -------
    :class:`Ordering`
        ``LESS``, ``EQUAL`` or ``GREATER``; retentions form a total order
    """
    rank = _RETENTION_RANK[a.rtype] - _RETENTION_RANK[b.rtype]
    if rank:
        return _sign(rank)

    if a.point_in_time is None and b.point_in_time is None:
        return Ordering.EQUAL
    # Only reachable for afterPurpose: an uncapped retention is the longer one
    if a.point_in_time is None:
        return Ordering.GREATER
    if b.point_in_time is None:
        return Ordering.LESS

    return _sign((a.point_in_time - b.point_in_time).days)


class StrengthDirection(str, enum.Enum):
    """
    Which direction of an attribute value makes a privacy model stronger
    """

    HIGHER = "higher"
    LOWER = "lower"


class PrivacyModelRegistry:
    """
    Per-attribute strength directions of known privacy models

    Registries are immutable, use :meth:`extended` to derive a new registry.
    """

    def __init__(self, models: Optional[Mapping[str, Mapping[str, str]]] = None):
        self._models: Dict[str, Dict[str, StrengthDirection]] = {}
        for name, attributes in (models or {}).items():
            self._models[name] = {
                attr: StrengthDirection(direction)
                for attr, direction in attributes.items()
            }

    def __repr__(self) -> str:
        return f"<purposegraph.lpl.PrivacyModelRegistry (models: {sorted(self._models)})>"

    def __contains__(self, name: object) -> bool:
        return name in self._models

    @property
    def models(self) -> Tuple[str, ...]:
        """
        Sorted names of the registered privacy models
        """
        return tuple(sorted(self._models))

    def direction(self, model: str, attribute: str) -> StrengthDirection:
        """
        Strength direction of an attribute

        Raises
        ------
        :class:`purposegraph.errors.UnknownAttributeError`
            The model or attribute is not registered
        """
        try:
            return self._models[model][attribute]
        except KeyError:
            raise UnknownAttributeError(model, attribute)  # noqa: TRY200

    def extended(self, models: Mapping[str, Mapping[str, str]]) -> Self:
        """
        Copy of the registry with additional or replaced models
        """
        merged: Dict[str, Dict[str, str]] = {
            name: {a: d.value for a, d in attrs.items()}
            for name, attrs in self._models.items()
        }
        for name, attrs in models.items():
            merged[name] = dict(attrs)
        return type(self)(merged)


PRIVACY_MODEL_REGISTRY = PrivacyModelRegistry(
    {
        "k-anonymity": {"k": "higher"},
        "l-diversity": {"l": "higher"},
        "t-closeness": {"t": "lower"},
    }
)
"""
Registry used when no other registry is passed

Larger ``k`` and ``l`` and smaller ``t`` are stronger guarantees. Additional models can
be added via the ``privacyModels`` section of the defaults configuration, see
:mod:`purposegraph.config`.
"""


def get_privacy_model_registry() -> PrivacyModelRegistry:
    """
    Retrieve the global privacy model registry
    """
    return PRIVACY_MODEL_REGISTRY


def privacy_model_compare(
    a: Optional[PrivacyModel],
    b: Optional[PrivacyModel],
    registry: Optional[PrivacyModelRegistry] = None,
) -> Ordering:
    """
    Compare the strength of two privacy models

    An absent model is the weakest. Models with different names are incomparable.
    Models with the same name are compared attribute-wise using the strength
    directions in ``registry``; attributes pointing in different directions make the
    models incomparable.

    Parameters
    ----------
    a
        Left-hand side

    b
        Right-hand side

    registry
        Strength directions. Defaults to :func:`get_privacy_model_registry`

    Returns
    -------
    :class:`Ordering`

    Raises
    ------
    :class:`purposegraph.errors.UnknownAttributeError`
        An attribute is only present on one side or has no registered direction
    """
    if a is None and b is None:
        return Ordering.EQUAL
    if a is None:
        return Ordering.LESS
    if b is None:
        return Ordering.GREATER
    if a.name != b.name:
        return Ordering.INCOMPARABLE

    one_sided = sorted(set(a.attributes) ^ set(b.attributes))
    if one_sided:
        raise UnknownAttributeError(a.name, one_sided[0])

    registry = registry if registry is not None else get_privacy_model_registry()
    seen = set()
    for attribute in sorted(a.attributes):
        difference = a.attributes[attribute] - b.attributes[attribute]
        if registry.direction(a.name, attribute) == StrengthDirection.LOWER:
            difference = -difference
        seen.add(_sign(difference))

    seen.discard(Ordering.EQUAL)
    if not seen:
        return Ordering.EQUAL
    if len(seen) > 1:
        return Ordering.INCOMPARABLE
    return seen.pop()


@dataclass(frozen=True)
class PolicyFragment:
    """
    Purposes and edges to be added to an existing policy

    Edges may reference purposes of the fragment as well as of the policy it is merged
    into, so a fragment is not checked on its own.
    """

    purposes: FrozenSet[Purpose] = frozenset()
    composition: FrozenSet[UnderlyingPurposeEdge] = frozenset()
    hierarchy: FrozenSet[InheritanceEdge] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "purposes", frozenset(self.purposes))
        object.__setattr__(self, "composition", frozenset(self.composition))
        object.__setattr__(self, "hierarchy", frozenset(self.hierarchy))


def merge_fragment(
    policy: LayeredPrivacyPolicy, fragment: PolicyFragment
) -> LayeredPrivacyPolicy:
    """
    Add manually written purposes and edges to a policy

    Used for purposes which static analysis cannot find, e.g. processing which only
    happens in clients. The merged policy is not validated.

    Raises
    ------
    :class:`purposegraph.errors.SchemaError`
        A fragment purpose reuses the id of a policy purpose, or a
        fragment inheritance edge gives a purpose a second parent

    :class:`purposegraph.errors.DanglingEdgeError`
        A fragment edge references a purpose which is in neither
    """
    clashes = sorted({p.id for p in fragment.purposes} & set(policy.purpose_ids))
    if clashes:
        raise SchemaError("purposes", f"Purpose id(s) {clashes} are already defined")

    hierarchy = policy.hierarchy | fragment.hierarchy
    parents: Dict[str, str] = {}
    for edge in sorted(hierarchy):
        if edge.child in parents:
            raise SchemaError(
                "hierarchy",
                f"Purpose `{edge.child}` inherits from both `{parents[edge.child]}` "
                f"and `{edge.parent}`, multiple inheritance is forbidden",
            )
        parents[edge.child] = edge.parent

    return LayeredPrivacyPolicy(
        version=policy.version,
        name=policy.name,
        lang=policy.lang,
        pp_uri=policy.pp_uri,
        underlying_policies=policy.underlying_policies,
        purposes=policy.purposes | fragment.purposes,
        composition=policy.composition | fragment.composition,
        hierarchy=hierarchy,
    )

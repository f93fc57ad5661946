"""
Reading and writing of policy, service model and extraction result documents

All documents are UTF-8 JSON. Serialisation is canonical: object keys are sorted and
every set is emitted in lexicographic order, so that serialising the same value twice
gives byte-identical output and ``parse_policy(serialize_policy(p)) == p``.

An extraction result is a policy document with three additional top-level sections,
``gov``, ``services`` and ``stats``. These sections are therefore always accepted by
:func:`parse_policy`, even in strict mode.
"""
from __future__ import annotations

import json
import re
from logging import getLogger
from typing import Any, Dict, Iterable, List, Mapping, Optional, Set, Tuple, Union

import networkx as nx
from dateutil.parser import isoparser

from purposegraph._typing import JsonDict
from purposegraph.errors import (
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
    PolicyFragment,
    PrivacyModel,
    Purpose,
    RecipientKind,
    Retention,
    RetentionType,
    UnderlyingPurposeEdge,
)
from purposegraph.servicenet import (
    GovEdge,
    ServiceModel,
    ServiceNet,
    Transition,
    WebService,
    validate_net,
)

_logger = getLogger(__name__)

_ISO_PARSER = isoparser()
_ISO_DATE = re.compile(r"[0-9]{4}-[0-9]{2}-[0-9]{2}")

_POLICY_REQUIRED = ("version", "name", "lang", "ppURI", "purposes")
_POLICY_OPTIONAL = ("underlyingPolicies", "composition", "hierarchy")
_EXTRACTION_SECTIONS = ("gov", "services", "stats")
_PURPOSE_KEYS = {
    "id",
    "name",
    "optOut",
    "required",
    "descr",
    "recipients",
    "retention",
    "privacyModel",
    "data",
}
_SERVICE_KEYS = {
    "name",
    "desc",
    "loc",
    "url",
    "components",
    "net",
    "recipients",
    "underlyingPolicies",
}
_NET_KEYS = {"places", "transitions", "arcs", "input", "output"}


def _load_json(text: Union[str, bytes]) -> Any:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise PolicySyntaxError(1, 1, f"Invalid UTF-8: {exc.reason}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolicySyntaxError(exc.lineno, exc.colno, exc.msg) from exc


def dump_json(doc: Any) -> str:
    """
    Canonical JSON text: sorted keys, two-space indent, trailing newline
    """
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _expect(value: Any, kind: Union[type, Tuple[type, ...]], path: str) -> Any:
    # bool is a subclass of int, it must never pass as a number or string
    if isinstance(value, bool) and kind is not bool:
        raise SchemaError(path, f"Expected {_kind_name(kind)}, got a boolean")
    if not isinstance(value, kind):
        raise SchemaError(
            path, f"Expected {_kind_name(kind)}, got {type(value).__name__}"
        )
    return value


def _kind_name(kind: Union[type, Tuple[type, ...]]) -> str:
    names = {dict: "an object", list: "a list", str: "a string", bool: "a boolean"}
    if isinstance(kind, tuple):
        return "a number"
    return names.get(kind, kind.__name__)


def _check_keys(
    doc: Mapping[str, Any],
    path: str,
    allowed: Iterable[str],
    required: Iterable[str] = (),
    lenient: bool = False,
) -> None:
    missing = [k for k in required if k not in doc]
    if missing:
        raise SchemaError(path, f"Missing required key(s) {missing}")
    if lenient:
        return
    unknown = sorted(set(doc) - set(allowed))
    if unknown:
        raise SchemaError(path, f"Unknown key(s) {unknown}")


def _unique(items: List[Any], path: str, describe: Any = str) -> None:
    seen: Set[Any] = set()
    for item in items:
        if item in seen:
            raise SchemaError(path, f"Duplicate entry {describe(item)}")
        seen.add(item)


def _join(path: str, key: str) -> str:
    return f"{path}.{key}" if path else key


# Element codecs, shared with :mod:`purposegraph.config`
def recipient_from_doc(doc: Any, path: str, lenient: bool = False) -> DataRecipient:
    """
    Read a ``{"name", "kind"}`` object, unknown keys are ignored when ``lenient``
    """
    _expect(doc, dict, path)
    _check_keys(doc, path, ("name", "kind"), ("name", "kind"), lenient)
    try:
        kind = RecipientKind(_expect(doc["kind"], str, _join(path, "kind")))
    except ValueError as exc:
        raise SchemaError(
            _join(path, "kind"),
            f"Expected one of {[k.value for k in RecipientKind]}, got {doc['kind']!r}",
        ) from exc
    return DataRecipient(_expect(doc["name"], str, _join(path, "name")), kind)


def recipient_to_doc(recipient: DataRecipient) -> JsonDict:
    """
    Write a recipient as a ``{"name", "kind"}`` object
    """
    return {"name": recipient.name, "kind": recipient.kind.value}


def retention_from_doc(doc: Any, path: str, lenient: bool = False) -> Retention:
    """
    Read a ``{"type", "pointInTime"?}`` object
    """
    _expect(doc, dict, path)
    _check_keys(doc, path, ("type", "pointInTime"), ("type",), lenient)
    try:
        rtype = RetentionType(_expect(doc["type"], str, _join(path, "type")))
    except ValueError as exc:
        raise SchemaError(
            _join(path, "type"),
            f"Expected one of {[t.value for t in RetentionType]}, got {doc['type']!r}",
        ) from exc

    point_in_time = None
    if doc.get("pointInTime") is not None:
        raw = _expect(doc["pointInTime"], str, _join(path, "pointInTime"))
        message = f"Expected a YYYY-MM-DD date, got {raw!r}"
        # dateutil also accepts reduced and basic forms such as "2024" or "20240101"
        if not _ISO_DATE.fullmatch(raw):
            raise SchemaError(_join(path, "pointInTime"), message)
        try:
            point_in_time = _ISO_PARSER.parse_isodate(raw)
        except ValueError as exc:
            raise SchemaError(_join(path, "pointInTime"), message) from exc

    try:
        return Retention(rtype, point_in_time)
    except SchemaError as exc:
        raise SchemaError(path, str(exc).split(": ", 1)[-1]) from exc


def retention_to_doc(retention: Retention) -> JsonDict:
    """
    Write a retention, ``pointInTime`` is only emitted when present
    """
    out: JsonDict = {"type": retention.rtype.value}
    if retention.point_in_time is not None:
        out["pointInTime"] = retention.point_in_time.isoformat()
    return out


def privacy_model_from_doc(
    doc: Any, path: str, lenient: bool = False
) -> PrivacyModel:
    """
    Read a ``{"name", "attributes"}`` object
    """
    _expect(doc, dict, path)
    _check_keys(doc, path, ("name", "attributes"), ("name",), lenient)
    attributes = _expect(doc.get("attributes", {}), dict, _join(path, "attributes"))
    for key, value in attributes.items():
        _expect(value, (int, float), _join(_join(path, "attributes"), key))
    return PrivacyModel(_expect(doc["name"], str, _join(path, "name")), attributes)


def privacy_model_to_doc(model: PrivacyModel) -> JsonDict:
    """
    Write a privacy model as a ``{"name", "attributes"}`` object
    """
    return {"name": model.name, "attributes": dict(model.attributes)}


def _data_from_doc(doc: Any, path: str) -> List[DataElement]:
    _expect(doc, list, path)
    out = []
    for i, name in enumerate(doc):
        try:
            out.append(
                DataElement.from_qualified_name(_expect(name, str, f"{path}[{i}]"))
            )
        except SchemaError as exc:
            raise SchemaError(f"{path}[{i}]", f"Invalid data element {name!r}") from exc
    _unique(out, path)
    return out


def _data_to_doc(data: Iterable[DataElement]) -> List[str]:
    return sorted(d.qualified_name for d in data)


def _recipients_from_doc(
    doc: Any, path: str, lenient: bool = False
) -> List[DataRecipient]:
    _expect(doc, list, path)
    out = [
        recipient_from_doc(r, f"{path}[{i}]", lenient) for i, r in enumerate(doc)
    ]
    _unique(out, path)
    return out


def _recipients_to_doc(recipients: Iterable[DataRecipient]) -> List[JsonDict]:
    return [recipient_to_doc(r) for r in sorted(recipients)]


def _purpose_from_doc(doc: Any, path: str, lenient: bool) -> Purpose:
    _expect(doc, dict, path)
    _check_keys(doc, path, _PURPOSE_KEYS, ("id", "name"), lenient)

    kwargs: Dict[str, Any] = {
        "id": _expect(doc["id"], str, _join(path, "id")),
        "name": _expect(doc["name"], str, _join(path, "name")),
        "opt_out": _expect(doc.get("optOut", False), bool, _join(path, "optOut")),
        "required": _expect(doc.get("required", True), bool, _join(path, "required")),
        "descr": _expect(doc.get("descr", ""), str, _join(path, "descr")),
        "recipients": _recipients_from_doc(
            doc.get("recipients", []), _join(path, "recipients"), lenient
        ),
        "data": _data_from_doc(doc.get("data", []), _join(path, "data")),
    }
    if "retention" in doc:
        kwargs["retention"] = retention_from_doc(
            doc["retention"], _join(path, "retention"), lenient
        )
    if doc.get("privacyModel") is not None:
        kwargs["privacy_model"] = privacy_model_from_doc(
            doc["privacyModel"], _join(path, "privacyModel"), lenient
        )

    try:
        return Purpose(**kwargs)
    except SchemaError as exc:
        raise SchemaError(path, str(exc).split(": ", 1)[-1]) from exc


def _purpose_to_doc(purpose: Purpose) -> JsonDict:
    out: JsonDict = {
        "id": purpose.id,
        "name": purpose.name,
        "optOut": purpose.opt_out,
        "required": purpose.required,
        "descr": purpose.descr,
        "recipients": _recipients_to_doc(purpose.recipients),
        "retention": retention_to_doc(purpose.retention),
        "data": _data_to_doc(purpose.data),
    }
    if purpose.privacy_model is not None:
        out["privacyModel"] = privacy_model_to_doc(purpose.privacy_model)
    return out


def _edges_from_doc(doc: Any, path: str, edge_cls: type, lenient: bool) -> List[Any]:
    _expect(doc, list, path)
    out = []
    for i, item in enumerate(doc):
        item_path = f"{path}[{i}]"
        _expect(item, dict, item_path)
        _check_keys(item, item_path, ("parent", "child"), ("parent", "child"), lenient)
        out.append(
            edge_cls(
                _expect(item["parent"], str, _join(item_path, "parent")),
                _expect(item["child"], str, _join(item_path, "child")),
            )
        )
    _unique(out, path)
    return out


def _edges_to_doc(edges: Iterable[Any]) -> List[JsonDict]:
    return [{"parent": e.parent, "child": e.child} for e in sorted(edges)]


def _check_single_inheritance(hierarchy: Iterable[InheritanceEdge], path: str) -> None:
    parents: Dict[str, str] = {}
    for edge in hierarchy:
        if edge.child in parents:
            raise SchemaError(
                path,
                f"Purpose `{edge.child}` inherits from both `{parents[edge.child]}` "
                f"and `{edge.parent}`, multiple inheritance is forbidden",
            )
        parents[edge.child] = edge.parent


def policy_from_dict(
    doc: Any, *, lenient: bool = False, path: str = ""
) -> LayeredPrivacyPolicy:
    """
    Create a policy from a parsed JSON document

    See :func:`parse_policy` for details.
    """
    _expect(doc, dict, path or "<root>")
    allowed = _POLICY_REQUIRED + _POLICY_OPTIONAL + _EXTRACTION_SECTIONS
    _check_keys(doc, path, allowed, _POLICY_REQUIRED, lenient)

    header = {
        key: _expect(doc[key], str, _join(path, key))
        for key in ("version", "name", "lang", "ppURI")
    }

    upps_doc = _expect(doc.get("underlyingPolicies", []), list, _join(path, "underlyingPolicies"))
    underlying = [
        policy_from_dict(u, lenient=lenient, path=f"{_join(path, 'underlyingPolicies')}[{i}]")
        for i, u in enumerate(upps_doc)
    ]

    purposes_path = _join(path, "purposes")
    purposes = [
        _purpose_from_doc(p, f"{purposes_path}[{i}]", lenient)
        for i, p in enumerate(_expect(doc["purposes"], list, purposes_path))
    ]
    _unique([p.id for p in purposes], purposes_path, lambda pid: f"purpose id `{pid}`")

    composition = _edges_from_doc(
        doc.get("composition", []), _join(path, "composition"), UnderlyingPurposeEdge, lenient
    )
    hierarchy = _edges_from_doc(
        doc.get("hierarchy", []), _join(path, "hierarchy"), InheritanceEdge, lenient
    )
    _check_single_inheritance(hierarchy, _join(path, "hierarchy"))

    return LayeredPrivacyPolicy(
        version=header["version"],
        name=header["name"],
        lang=header["lang"],
        pp_uri=header["ppURI"],
        underlying_policies=underlying,
        purposes=purposes,
        composition=composition,
        hierarchy=hierarchy,
    )


def policy_to_dict(policy: LayeredPrivacyPolicy) -> JsonDict:
    """
    Canonical JSON-serialisable representation of a policy
    """
    return {
        "version": policy.version,
        "name": policy.name,
        "lang": policy.lang,
        "ppURI": policy.pp_uri,
        "underlyingPolicies": [policy_to_dict(u) for u in policy.underlying_policies],
        "purposes": [_purpose_to_doc(p) for p in sorted(policy.purposes, key=lambda p: p.id)],
        "composition": _edges_to_doc(policy.composition),
        "hierarchy": _edges_to_doc(policy.hierarchy),
    }


def parse_policy(
    text: Union[str, bytes], *, lenient: bool = False
) -> LayeredPrivacyPolicy:
    """
    Parse a policy document

    Parameters
    ----------
    text
        UTF-8 JSON document

    lenient
        If ``True``, unknown keys are ignored instead of rejected

    Returns
    -------
    :class:`purposegraph.lpl.LayeredPrivacyPolicy`

    Raises
    ------
    :class:`purposegraph.errors.PolicySyntaxError`
        ``text`` is not well-formed UTF-8 JSON

    :class:`purposegraph.errors.SchemaError`
        The document does not follow the policy schema, including a purpose with two
        inheritance parents

    :class:`purposegraph.errors.DanglingEdgeError`
        An edge references a purpose id which is not defined
    """
    return policy_from_dict(_load_json(text), lenient=lenient)


def serialize_policy(policy: LayeredPrivacyPolicy) -> str:
    """
    Serialise a policy to its canonical JSON form

    Parameters
    ----------
    policy
        Policy to serialise

    Returns
    -------
    str
        Canonical document, terminated by a newline
    """
    return dump_json(policy_to_dict(policy))


def parse_policy_fragment(
    text: Union[str, bytes], *, lenient: bool = False
) -> PolicyFragment:
    """
    Parse a hand-written policy fragment

    A fragment holds ``purposes``, ``composition`` and ``hierarchy`` lists in the
    policy schema, all optional. Edges are not resolved, they may reference purposes
    of the policy the fragment is merged into with
    :func:`purposegraph.lpl.merge_fragment`.

    Raises
    ------
    :class:`purposegraph.errors.PolicySyntaxError`
        ``text`` is not well-formed UTF-8 JSON

    :class:`purposegraph.errors.SchemaError`
        The document does not follow the fragment schema
    """
    doc = _expect(_load_json(text), dict, "<root>")
    _check_keys(doc, "", ("purposes", "composition", "hierarchy"), (), lenient)

    purposes = [
        _purpose_from_doc(p, f"purposes[{i}]", lenient)
        for i, p in enumerate(_expect(doc.get("purposes", []), list, "purposes"))
    ]
    _unique([p.id for p in purposes], "purposes", lambda pid: f"purpose id `{pid}`")
    hierarchy = _edges_from_doc(
        doc.get("hierarchy", []), "hierarchy", InheritanceEdge, lenient
    )
    _check_single_inheritance(hierarchy, "hierarchy")

    return PolicyFragment(
        purposes=frozenset(purposes),
        composition=frozenset(
            _edges_from_doc(
                doc.get("composition", []), "composition", UnderlyingPurposeEdge, lenient
            )
        ),
        hierarchy=frozenset(hierarchy),
    )


def _net_from_doc(doc: Any, path: str, lenient: bool) -> ServiceNet:
    _expect(doc, dict, path)
    _check_keys(doc, path, _NET_KEYS, _NET_KEYS, lenient)

    transitions = []
    for i, t in enumerate(_expect(doc["transitions"], list, _join(path, "transitions"))):
        t_path = f"{_join(path, 'transitions')}[{i}]"
        _expect(t, dict, t_path)
        _check_keys(t, t_path, ("id", "label", "data"), ("id",), lenient)
        transitions.append(
            Transition(
                _expect(t["id"], str, _join(t_path, "id")),
                _expect(t.get("label", ""), str, _join(t_path, "label")),
                _data_from_doc(t.get("data", []), _join(t_path, "data")),
            )
        )

    arcs = []
    for i, arc in enumerate(_expect(doc["arcs"], list, _join(path, "arcs"))):
        a_path = f"{_join(path, 'arcs')}[{i}]"
        if not isinstance(arc, list) or len(arc) != 2:
            raise SchemaError(a_path, "Expected a [source, target] pair")
        arcs.append((_expect(arc[0], str, a_path), _expect(arc[1], str, a_path)))

    places = [
        _expect(p, str, f"{_join(path, 'places')}[{i}]")
        for i, p in enumerate(_expect(doc["places"], list, _join(path, "places")))
    ]
    return ServiceNet(
        places=frozenset(places),
        transitions=frozenset(transitions),
        arcs=frozenset(arcs),
        input=_expect(doc["input"], str, _join(path, "input")),
        output=_expect(doc["output"], str, _join(path, "output")),
    )


def _net_to_doc(net: ServiceNet) -> JsonDict:
    return {
        "places": sorted(net.places),
        "transitions": [
            {"id": t.id, "label": t.label, "data": _data_to_doc(t.data)}
            for t in sorted(net.transitions, key=lambda t: (t.id, t.label))
        ],
        "arcs": [list(a) for a in sorted(net.arcs)],
        "input": net.input,
        "output": net.output,
    }


def services_from_list(
    doc: Any, path: str = "services", lenient: bool = False
) -> Tuple[WebService, ...]:
    """
    Build the web services described by a list of flat service records

    Components are referenced by name. Records which are components of another record
    only appear nested inside their composite in the returned roots.

    Raises
    ------
    :class:`purposegraph.errors.SchemaError`
        A record does not follow the schema

    :class:`purposegraph.errors.UnknownServiceError`
        A component name does not match any record

    :class:`purposegraph.errors.ServiceModelError`
        Duplicate service names, a component cycle or a structurally invalid net
    """
    records: Dict[str, JsonDict] = {}
    for i, record in enumerate(_expect(doc, list, path)):
        r_path = f"{path}[{i}]"
        _expect(record, dict, r_path)
        _check_keys(record, r_path, _SERVICE_KEYS, ("name",), lenient)
        name = _expect(record["name"], str, _join(r_path, "name"))
        if name in records:
            raise ServiceModelError(f"Service name `{name}` is used more than once")
        records[name] = dict(record, _path=r_path)

    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(records))
    for name, record in records.items():
        components = _expect(
            record.get("components", []), list, _join(record["_path"], "components")
        )
        for component in components:
            if component not in records:
                raise UnknownServiceError(component)
            graph.add_edge(name, component)
    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        cycle = None
    if cycle:
        names = [u for u, _ in cycle] + [cycle[0][0]]
        raise ServiceModelError(
            f"Service component cycle: {' -> '.join(names)}"
        )

    built: Dict[str, WebService] = {}
    # components before composites
    for name in reversed(list(nx.topological_sort(graph))):
        record = records[name]
        r_path = record["_path"]
        net = None
        if record.get("net") is not None:
            net = _net_from_doc(record["net"], _join(r_path, "net"), lenient)
            errors = validate_net(net)
            if errors:
                raise ServiceModelError(
                    f"Invalid service net of `{name}`: {'; '.join(errors)}"
                )
        built[name] = WebService(
            name=name,
            desc=_expect(record.get("desc", ""), str, _join(r_path, "desc")),
            loc=_expect(record.get("loc", ""), str, _join(r_path, "loc")),
            url=_expect(record.get("url", ""), str, _join(r_path, "url")),
            components=tuple(built[c] for c in graph.successors(name)),
            net=net,
            recipients=_recipients_from_doc(
                record.get("recipients", []), _join(r_path, "recipients"), lenient
            ),
            underlying_policies=[
                _expect(u, str, f"{_join(r_path, 'underlyingPolicies')}[{i}]")
                for i, u in enumerate(
                    _expect(
                        record.get("underlyingPolicies", []),
                        list,
                        _join(r_path, "underlyingPolicies"),
                    )
                )
            ],
        )

    roots = [n for n in sorted(records) if graph.in_degree(n) == 0]
    return tuple(built[n] for n in roots)


def services_to_list(services: Iterable[WebService]) -> List[JsonDict]:
    """
    Flatten web services, including all transitive components, to records ordered by
    name
    """
    by_name: Dict[str, WebService] = {}
    for root in services:
        for ws in root.walk():
            by_name[ws.name] = ws

    out = []
    for name in sorted(by_name):
        ws = by_name[name]
        record: JsonDict = {
            "name": ws.name,
            "desc": ws.desc,
            "loc": ws.loc,
            "url": ws.url,
            "components": [c.name for c in ws.components],
            "recipients": _recipients_to_doc(ws.recipients),
            "underlyingPolicies": sorted(ws.underlying_policies),
        }
        if ws.net is not None:
            record["net"] = _net_to_doc(ws.net)
        out.append(record)
    return out


def _gov_from_doc(doc: Any, path: str, lenient: bool) -> List[GovEdge]:
    out = []
    for i, item in enumerate(_expect(doc, list, path)):
        g_path = f"{path}[{i}]"
        _expect(item, dict, g_path)
        _check_keys(item, g_path, ("service", "purpose"), ("service", "purpose"), lenient)
        out.append(
            GovEdge(
                _expect(item["service"], str, _join(g_path, "service")),
                _expect(item["purpose"], str, _join(g_path, "purpose")),
            )
        )
    _unique(out, path)
    return out


def _gov_to_doc(gov: Iterable[GovEdge]) -> List[JsonDict]:
    return [{"service": g.service, "purpose": g.purpose} for g in sorted(set(gov))]


def service_model_from_dict(doc: Any, *, lenient: bool = False) -> ServiceModel:
    """
    Create a service model from a parsed JSON document

    See :func:`parse_service_model` for details.
    """
    _expect(doc, dict, "<root>")
    allowed = ("services", "gov") + _POLICY_REQUIRED + _POLICY_OPTIONAL + ("stats",)
    _check_keys(doc, "", allowed, ("services",), lenient)

    services = services_from_list(doc["services"], "services", lenient)
    gov = _gov_from_doc(doc.get("gov", []), "gov", lenient)
    return ServiceModel(services=services, gov=frozenset(gov))


def parse_service_model(
    text: Union[str, bytes], *, lenient: bool = False
) -> ServiceModel:
    """
    Parse a service model document

    The document holds a ``services`` list of flat service records whose
    ``components`` are referenced by name, and a ``gov`` list of
    ``{"service", "purpose"}`` pairs. Extraction results are valid service model
    documents.

    Parameters
    ----------
    text
        UTF-8 JSON document

    lenient
        If ``True``, unknown keys are ignored instead of rejected

    Returns
    -------
    :class:`purposegraph.servicenet.ServiceModel`

    Raises
    ------
    :class:`purposegraph.errors.PolicySyntaxError`
        ``text`` is not well-formed UTF-8 JSON

    :class:`purposegraph.errors.SchemaError`
        The document does not follow the service model schema

    :class:`purposegraph.errors.UnknownServiceError`
        A component references an unknown service

    :class:`purposegraph.errors.ServiceModelError`
        The services break a structural rule (cycles, duplicate names, invalid nets)
    """
    return service_model_from_dict(_load_json(text), lenient=lenient)


def serialize_service_model(model: ServiceModel) -> str:
    """
    Serialise a service model to its canonical JSON form
    """
    return dump_json(
        {"services": services_to_list(model.services), "gov": _gov_to_doc(model.gov)}
    )


def serialize_extraction(
    policy: LayeredPrivacyPolicy,
    services: Iterable[WebService],
    gov: Iterable[GovEdge],
    stats: Optional[JsonDict] = None,
) -> str:
    """
    Serialise an extraction result

    The result is the canonical policy document extended by ``gov``, ``services`` and
    ``stats`` sections.
    """
    doc = policy_to_dict(policy)
    doc["gov"] = _gov_to_doc(gov)
    doc["services"] = services_to_list(services)
    doc["stats"] = dict(stats) if stats is not None else {}
    return dump_json(doc)


def parse_extraction(
    text: Union[str, bytes], *, lenient: bool = False
) -> Tuple[LayeredPrivacyPolicy, ServiceModel, JsonDict]:
    """
    Parse an extraction result

    Returns
    -------
    :class:`purposegraph.lpl.LayeredPrivacyPolicy`, :class:`purposegraph.servicenet.ServiceModel`, dict
        The policy, the services with their gov relation and the raw statistics
    """
    doc = _load_json(text)
    policy = policy_from_dict(doc, lenient=lenient)
    model = ServiceModel(
        services=services_from_list(doc.get("services", []), "services", lenient),
        gov=frozenset(_gov_from_doc(doc.get("gov", []), "gov", lenient)),
    )
    stats = _expect(doc.get("stats", {}), dict, "stats")
    return policy, model, stats

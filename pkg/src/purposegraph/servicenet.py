"""
Web services, service nets and their coupling to policy purposes

A :class:`WebService` is a possibly composite service whose behaviour is described by a
:class:`ServiceNet`, a place/transition net whose transitions are labelled with the
personal data they process. Only the static structure of a net is checked, markings are
never simulated: :func:`pd` needs nothing but the union over all transitions.

The ``gov`` relation (:class:`GovEdge`) pairs a service with a purpose governing it.
:func:`check_coverage` checks that every service is governed by at least one purpose
whose data and recipients cover the service's processing.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from logging import getLogger
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

import networkx as nx
from typing_extensions import Self

from purposegraph._typing import JsonDict
from purposegraph.errors import (
    ServiceModelError,
    UnknownPurposeError,
    UnknownServiceError,
)
from purposegraph.lpl import DataElement, DataRecipient, LayeredPrivacyPolicy

_logger = getLogger(__name__)

UNDERLYING_POLICY_READING = (
    "underlying policies referenced by a service must each be named among the "
    "policy's underlyingPolicies"
)


@dataclass(frozen=True)
class Transition:
    """
    An operation of a service, labelled with the personal data it processes
    """

    id: str
    label: str = ""
    data: FrozenSet[DataElement] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "data", frozenset(self.data))


@dataclass(frozen=True)
class ServiceNet:
    """
    Place/transition net describing the behaviour of a web service

    Construction does not check the structure, use :func:`validate_net`.
    """

    places: FrozenSet[str]
    transitions: FrozenSet[Transition]
    arcs: FrozenSet[Tuple[str, str]]
    input: str
    output: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "places", frozenset(self.places))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "arcs", frozenset(tuple(a) for a in self.arcs))

    @classmethod
    def minimal(
        cls, label: str, data: Iterable[DataElement] = (), transition_id: str = "t"
    ) -> Self:
        """
        Net ``i -> t -> o`` with a single transition carrying ``data``
        """
        return cls(
            places=frozenset({"i", "o"}),
            transitions=frozenset({Transition(transition_id, label, frozenset(data))}),
            arcs=frozenset({("i", transition_id), (transition_id, "o")}),
            input="i",
            output="o",
        )

    @property
    def data(self) -> FrozenSet[DataElement]:
        """
        Union of the data processed by all transitions
        """
        return frozenset(d for t in self.transitions for d in t.data)

    def to_graph(self) -> nx.DiGraph:
        """
        Directed graph of places and transitions joined by the arcs
        """
        graph = nx.DiGraph()
        graph.add_nodes_from(sorted(self.places), kind="place")
        graph.add_nodes_from(sorted(t.id for t in self.transitions), kind="transition")
        graph.add_edges_from(sorted(self.arcs))
        return graph


def validate_net(net: ServiceNet) -> List[str]:
    """
    Check the structure of a service net

    Parameters
    ----------
    net
        Net to check

    Returns
    -------
    list of str
        Structural errors, each naming the offending element. Empty if the net is
        well-formed
    """
    errors = []
    transition_ids = sorted(t.id for t in net.transitions)
    if len(set(transition_ids)) != len(transition_ids):
        errors.append("duplicate transition ids")
    for overlap in sorted(net.places & set(transition_ids)):
        errors.append(f"`{overlap}` is both a place and a transition")

    if net.input not in net.places:
        errors.append(f"input `{net.input}` is not a place")
    if net.output not in net.places:
        errors.append(f"output `{net.output}` is not a place")
    if net.input == net.output:
        errors.append(f"input and output are the same place `{net.input}`")

    transitions = set(transition_ids)
    for source, target in sorted(net.arcs):
        known = net.places | transitions
        unknown = [n for n in (source, target) if n not in known]
        if unknown:
            errors.append(f"arc {source} -> {target} references unknown node(s) {unknown}")
        elif (source in net.places) == (target in net.places):
            errors.append(f"non-bipartite arc {source} -> {target}")

    if errors:
        return errors

    graph = net.to_graph()
    from_input = nx.descendants(graph, net.input)
    to_output = nx.ancestors(graph, net.output)
    for tid in transition_ids:
        if tid not in from_input or tid not in to_output:
            errors.append(f"transition `{tid}` is not on a path from input to output")

    return errors


@dataclass(frozen=True)
class WebService:
    """
    A web service, possibly composed of component services

    ``recipients`` and ``underlying_policies`` are declared metadata, they are never
    derived by analysis.
    """

    name: str
    desc: str = ""
    loc: str = ""
    url: str = ""
    components: Tuple[WebService, ...] = ()
    net: Optional[ServiceNet] = None
    recipients: FrozenSet[DataRecipient] = frozenset()
    underlying_policies: FrozenSet[str] = frozenset()

    def __post_init__(self) -> None:
        if not self.name:
            raise ServiceModelError("Service name cannot be empty")
        object.__setattr__(
            self, "components", tuple(sorted(self.components, key=lambda s: s.name))
        )
        object.__setattr__(self, "recipients", frozenset(self.recipients))
        object.__setattr__(self, "underlying_policies", frozenset(self.underlying_policies))
        if not self.components and self.net is None:
            raise ServiceModelError(f"Leaf service `{self.name}` must have a service net")

    def walk(self) -> Iterator[WebService]:
        """
        Iterate over this service and all its transitive components, depth first

        Services shared by several composites are yielded once per occurrence.
        """
        yield self
        for component in self.components:
            yield from component.walk()


@dataclass(frozen=True)
class PdResult:
    """
    Personal data processing of a web service
    """

    data: FrozenSet[DataElement] = frozenset()
    recipients: FrozenSet[DataRecipient] = frozenset()
    underlying_policies: FrozenSet[str] = frozenset()


def pd(ws: WebService) -> PdResult:
    """
    Inspect the personal data processing of a web service

    The data is the union over the transitions of the service's own net and,
    recursively, of all component services. Recipients and underlying policies are
    the values declared on the service itself.

    Parameters
    ----------
    ws
        Service to inspect

    Returns
    -------
    :class:`PdResult`
    """
    data = set(ws.net.data) if ws.net is not None else set()
    for component in ws.components:
        data |= pd(component).data

    return PdResult(
        data=frozenset(data),
        recipients=ws.recipients,
        underlying_policies=ws.underlying_policies,
    )


@dataclass(frozen=True, order=True)
class GovEdge:
    """
    ``purpose`` governs ``service``
    """

    service: str
    purpose: str


@dataclass(frozen=True)
class ServiceModel:
    """
    A set of web services together with the gov relation
    """

    services: Tuple[WebService, ...] = ()
    gov: FrozenSet[GovEdge] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "services", tuple(sorted(self.services, key=lambda s: s.name))
        )
        object.__setattr__(self, "gov", frozenset(self.gov))

    @property
    def by_name(self) -> Dict[str, WebService]:
        """
        Every service of the model, including transitive components, by name
        """
        return collect_services(self.services)

    @property
    def roots(self) -> Tuple[WebService, ...]:
        """
        Services which are not a component of any other service
        """
        components = {c.name for s in self.by_name.values() for c in s.components}
        return tuple(s for s in self.services if s.name not in components)


def collect_services(services: Iterable[WebService]) -> Dict[str, WebService]:
    """
    Services and all their transitive components, by name

    Raises
    ------
    :class:`purposegraph.errors.ServiceModelError`
        Two different services share a name
    """
    out: Dict[str, WebService] = {}
    for root in services:
        for ws in root.walk():
            existing = out.get(ws.name)
            if existing is not None and existing != ws:
                raise ServiceModelError(f"Service name `{ws.name}` is used more than once")
            out[ws.name] = ws
    return dict(sorted(out.items()))


class CoverageStatus(str, enum.Enum):
    """
    Outcome of the coverage check for a single service
    """

    COVERED = "covered"
    UNCOVERED = "uncovered"
    UNGOVERNED = "ungoverned"


@dataclass(frozen=True)
class ServiceCoverage:
    """
    Coverage of one web service

    For uncovered services ``closest_purpose`` is the governing purpose with the
    smallest missing element sets, which are given in the ``missing_*`` fields.
    """

    service: str
    status: CoverageStatus
    governing: Tuple[str, ...] = ()
    closest_purpose: Optional[str] = None
    missing_data: FrozenSet[DataElement] = frozenset()
    missing_recipients: FrozenSet[DataRecipient] = frozenset()
    missing_underlying_policies: FrozenSet[str] = frozenset()

    def to_dict(self) -> JsonDict:
        """
        JSON-serialisable representation
        """
        return {
            "service": self.service,
            "status": self.status.value,
            "governing": list(self.governing),
            "closestPurpose": self.closest_purpose,
            "missingData": sorted(d.qualified_name for d in self.missing_data),
            "missingRecipients": [
                {"name": r.name, "kind": r.kind.value}
                for r in sorted(self.missing_recipients)
            ],
            "missingUnderlyingPolicies": sorted(self.missing_underlying_policies),
        }


@dataclass(frozen=True)
class CoverageReport:
    """
    Coverage of all services, ordered by service name
    """

    services: Tuple[ServiceCoverage, ...]

    @property
    def uncovered(self) -> Tuple[ServiceCoverage, ...]:
        """
        Governed services which no governing purpose covers
        """
        return tuple(s for s in self.services if s.status == CoverageStatus.UNCOVERED)

    @property
    def ungoverned(self) -> Tuple[ServiceCoverage, ...]:
        """
        Services without any gov edge
        """
        return tuple(s for s in self.services if s.status == CoverageStatus.UNGOVERNED)

    @property
    def is_complete(self) -> bool:
        """
        Whether every service is governed and covered
        """
        return all(s.status == CoverageStatus.COVERED for s in self.services)

    def to_dict(self) -> JsonDict:
        """
        JSON-serialisable representation
        """
        return {
            "complete": self.is_complete,
            "underlyingPolicyReading": UNDERLYING_POLICY_READING,
            "services": [s.to_dict() for s in self.services],
        }


def check_coverage(
    policy: LayeredPrivacyPolicy,
    services: Iterable[WebService],
    gov: Iterable[GovEdge],
) -> CoverageReport:
    """
    Check that the processing of every service is covered by a governing purpose

    A service is covered if a single governing purpose ``p`` satisfies
    ``pd(ws).data <= p.data`` and ``pd(ws).recipients <= p.recipients`` and every
    underlying policy referenced by the service is one of the policy's underlying
    policies. Components are checked transitively. Gov edges may pair one purpose with
    many services and one service with many purposes.

    Parameters
    ----------
    policy
        Policy holding the governing purposes

    services
        Services to check, components are included automatically

    gov
        Gov relation

    Returns
    -------
    :class:`CoverageReport`

    Raises
    ------
    :class:`purposegraph.errors.UnknownServiceError`
        A gov edge references a service which is not known

    :class:`purposegraph.errors.UnknownPurposeError`
        A gov edge references a purpose which is not in the policy
    """
    by_name = collect_services(services)

    governing: Dict[str, List[str]] = {name: [] for name in by_name}
    for edge in sorted(set(gov)):
        if edge.service not in by_name:
            raise UnknownServiceError(edge.service)
        if edge.purpose not in policy:
            raise UnknownPurposeError(edge.purpose)
        governing[edge.service].append(edge.purpose)

    known_upps = policy.underlying_policy_names
    entries = []
    for name, ws in by_name.items():
        purposes = tuple(governing[name])
        if not purposes:
            _logger.debug("Service %s is not governed by any purpose", name)
            entries.append(ServiceCoverage(name, CoverageStatus.UNGOVERNED))
            continue

        processing = pd(ws)
        missing_upps = processing.underlying_policies - known_upps

        def _missing(purpose_id: str, processing: PdResult = processing):
            purpose = policy.purpose(purpose_id)
            return (
                processing.data - purpose.data,
                processing.recipients - purpose.recipients,
            )

        closest = min(
            purposes,
            key=lambda pid: (sum(len(m) for m in _missing(pid)), pid),
        )
        missing_data, missing_recipients = _missing(closest)
        covered = not (missing_data or missing_recipients or missing_upps)
        entries.append(
            ServiceCoverage(
                service=name,
                status=CoverageStatus.COVERED if covered else CoverageStatus.UNCOVERED,
                governing=purposes,
                closest_purpose=None if covered else closest,
                missing_data=missing_data,
                missing_recipients=missing_recipients,
                missing_underlying_policies=missing_upps,
            )
        )

    return CoverageReport(tuple(entries))

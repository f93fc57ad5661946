"""
Validity checks for policies with composed purposes

For every composition edge ``(p, p')``, where ``p'`` is a component of ``p``, a valid
policy requires

* ``p'.data <= p.data``
* ``p'.recipients <= p.recipients``
* ``p'.retention`` is not longer than ``p.retention``
* ``p'.privacy_model`` is at least as strong as ``p.privacy_model``
* ``p'.required == p.required``
* ``p'.opt_out == p.opt_out``

In addition the composition graph must be acyclic and every purpose may inherit from
at most one parent. Inheritance edges are only subject to the ordering constraints if
``strict_inheritance`` is requested.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from logging import getLogger
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

import networkx as nx

from purposegraph._typing import JsonDict
from purposegraph.errors import (
    CycleDetectedError,
    DanglingEdgeError,
    UnknownAttributeError,
    UnknownPurposeError,
)
from purposegraph.lpl import (
    InheritanceEdge,
    LayeredPrivacyPolicy,
    Ordering,
    PrivacyModelRegistry,
    UnderlyingPurposeEdge,
    privacy_model_compare,
    retention_compare,
)

_logger = getLogger(__name__)

Edge = Union[UnderlyingPurposeEdge, InheritanceEdge]


class Rule(enum.Enum):
    """
    Validity rule which a :class:`Violation` breaks
    """

    DATA_SUBSET = "DataSubset"
    RECIPIENT_SUBSET = "RecipientSubset"
    RETENTION_ORDER = "RetentionOrder"
    PRIVACY_MODEL_ORDER = "PrivacyModelOrder"
    REQUIRED_MISMATCH = "RequiredMismatch"
    OPT_OUT_MISMATCH = "OptOutMismatch"
    CYCLE = "Cycle"
    MULTIPLE_INHERITANCE = "MultipleInheritance"


_RULE_INDEX = {rule: i for i, rule in enumerate(Rule)}


@dataclass(frozen=True)
class Violation:
    """
    A broken validity rule

    ``edge`` is ``None`` for policy-level violations. For cycles, ``witness`` holds the
    purpose ids along the cycle, starting and ending with the same id.
    """

    edge: Optional[Edge]
    rule: Rule
    detail: str
    witness: Tuple[str, ...] = ()

    def sort_key(self) -> Tuple[int, str, str, int]:
        """
        Key giving the deterministic report order: composition edges, inheritance
        edges, policy-level violations, then rule
        """
        if isinstance(self.edge, UnderlyingPurposeEdge):
            group = 0
        elif isinstance(self.edge, InheritanceEdge):
            group = 1
        else:
            group = 2
        parent = self.edge.parent if self.edge is not None else ""
        child = self.edge.child if self.edge is not None else ""
        return group, parent, child, _RULE_INDEX[self.rule]

    def to_dict(self) -> JsonDict:
        """
        JSON-serialisable representation
        """
        if isinstance(self.edge, UnderlyingPurposeEdge):
            edge: Optional[JsonDict] = {
                "kind": "composition",
                "parent": self.edge.parent,
                "child": self.edge.child,
            }
        elif isinstance(self.edge, InheritanceEdge):
            edge = {
                "kind": "inheritance",
                "parent": self.edge.parent,
                "child": self.edge.child,
            }
        else:
            edge = None

        out: JsonDict = {"edge": edge, "rule": self.rule.value, "detail": self.detail}
        if self.witness:
            out["witness"] = list(self.witness)
        return out


@dataclass(frozen=True)
class ValidationReport:
    """
    Outcome of :func:`validate`
    """

    violations: Tuple[Violation, ...]
    roots: FrozenSet[str]

    @property
    def is_valid(self) -> bool:
        """
        Whether no rule is broken
        """
        return not self.violations

    def to_dict(self) -> JsonDict:
        """
        JSON-serialisable representation
        """
        return {
            "valid": self.is_valid,
            "roots": sorted(self.roots),
            "violations": [v.to_dict() for v in self.violations],
        }


def _fmt(items) -> str:
    return "{" + ", ".join(sorted(str(i) for i in items)) + "}"


def check_edge(
    policy: LayeredPrivacyPolicy,
    edge: Edge,
    registry: Optional[PrivacyModelRegistry] = None,
) -> List[Violation]:
    """
    Check the ordering constraints between the endpoints of an edge

    Parameters
    ----------
    policy
        Policy holding both endpoints

    edge
        Edge to check; ``edge.child`` must not be weaker than ``edge.parent``

    registry
        Privacy model strength directions, defaults to the global registry

    Returns
    -------
    list of :class:`Violation`
        Exactly the broken constraints, in rule order

    Raises
    ------
    :class:`purposegraph.errors.DanglingEdgeError`
        An endpoint of ``edge`` is not a purpose of ``policy``
    """
    missing = [pid for pid in (edge.parent, edge.child) if pid not in policy]
    if missing:
        raise DanglingEdgeError(edge, missing)

    parent = policy.purpose(edge.parent)
    child = policy.purpose(edge.child)
    out = []

    extra_data = child.data - parent.data
    if extra_data:
        out.append(
            Violation(
                edge, Rule.DATA_SUBSET, f"data not in `{parent.id}`: {_fmt(extra_data)}"
            )
        )

    extra_recipients = child.recipients - parent.recipients
    if extra_recipients:
        out.append(
            Violation(
                edge,
                Rule.RECIPIENT_SUBSET,
                f"recipients not in `{parent.id}`: {_fmt(extra_recipients)}",
            )
        )

    if retention_compare(child.retention, parent.retention) == Ordering.GREATER:
        out.append(
            Violation(
                edge,
                Rule.RETENTION_ORDER,
                f"retention {child.retention} exceeds {parent.retention}",
            )
        )

    try:
        pm_order = privacy_model_compare(
            child.privacy_model, parent.privacy_model, registry
        )
        pm_detail = (
            f"privacy model {child.privacy_model} is weaker than or incomparable "
            f"to {parent.privacy_model}"
        )
    except UnknownAttributeError as exc:
        pm_order = Ordering.INCOMPARABLE
        pm_detail = str(exc)
    if pm_order in (Ordering.LESS, Ordering.INCOMPARABLE):
        out.append(Violation(edge, Rule.PRIVACY_MODEL_ORDER, pm_detail))

    if child.required != parent.required:
        out.append(
            Violation(
                edge,
                Rule.REQUIRED_MISMATCH,
                f"required {child.required} differs from {parent.required}",
            )
        )

    if child.opt_out != parent.opt_out:
        out.append(
            Violation(
                edge,
                Rule.OPT_OUT_MISMATCH,
                f"optOut {child.opt_out} differs from {parent.opt_out}",
            )
        )

    return out


def _composition_graph(policy: LayeredPrivacyPolicy) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(policy.purpose_ids)
    graph.add_edges_from((e.parent, e.child) for e in sorted(policy.composition))
    return graph


def check_acyclic(policy: LayeredPrivacyPolicy) -> Optional[Violation]:
    """
    Check that the composition graph is a directed acyclic graph

    Returns
    -------
    :class:`Violation` or None
        ``None`` if the graph is acyclic, otherwise a ``Cycle`` violation whose
        ``witness`` lists one cycle, e.g. ``("a", "b", "a")``
    """
    graph = _composition_graph(policy)
    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        return None

    witness = tuple(u for u, _ in cycle) + (cycle[0][0],)
    _logger.debug("Found composition cycle %s", witness)
    return Violation(
        None, Rule.CYCLE, f"composition cycle {' -> '.join(witness)}", witness
    )


def roots(policy: LayeredPrivacyPolicy) -> FrozenSet[str]:
    """
    Purposes which are not a component of any other purpose

    Only composition edges are considered.
    """
    children = {e.child for e in policy.composition}
    return frozenset(pid for pid in policy.purpose_ids if pid not in children)


def validate(
    policy: LayeredPrivacyPolicy,
    *,
    strict_inheritance: bool = False,
    registry: Optional[PrivacyModelRegistry] = None,
) -> ValidationReport:
    """
    Check a policy against all validity rules

    Violations are collected exhaustively rather than stopping at the first one.

    Parameters
    ----------
    policy
        Policy to check

    strict_inheritance
        Also apply the ordering constraints along inheritance edges

    registry
        Privacy model strength directions, defaults to the global registry

    Returns
    -------
    :class:`ValidationReport`
        Violations are ordered by edge kind, parent, child and rule so that the report
        does not depend on iteration order
    """
    violations: List[Violation] = []
    for edge in sorted(policy.composition):
        violations.extend(check_edge(policy, edge, registry))

    cycle = check_acyclic(policy)
    if cycle is not None:
        violations.append(cycle)

    parents: Dict[str, List[str]] = {}
    for edge in sorted(policy.hierarchy):
        parents.setdefault(edge.child, []).append(edge.parent)
    for edge in sorted(policy.hierarchy):
        if len(parents[edge.child]) > 1:
            violations.append(
                Violation(
                    edge,
                    Rule.MULTIPLE_INHERITANCE,
                    f"`{edge.child}` inherits from {parents[edge.child]}",
                )
            )
        if strict_inheritance:
            violations.extend(check_edge(policy, edge, registry))

    violations.sort(key=Violation.sort_key)
    _logger.debug("Policy %s: %d violation(s)", policy.name, len(violations))
    return ValidationReport(tuple(violations), roots(policy))


def layers(policy: LayeredPrivacyPolicy, root: str) -> List[List[str]]:
    """
    Breadth-first layers of the composition closure of a purpose

    The first layer is ``[root]``, each further layer holds the not yet visited
    components of the previous layer, sorted by id.

    Raises
    ------
    :class:`purposegraph.errors.UnknownPurposeError`
        ``root`` is not a purpose of ``policy``

    :class:`purposegraph.errors.CycleDetectedError`
        The composition graph is cyclic
    """
    if root not in policy:
        raise UnknownPurposeError(root)
    cycle = check_acyclic(policy)
    if cycle is not None:
        raise CycleDetectedError(cycle.witness)

    graph = _composition_graph(policy)
    seen = {root}
    out = [[root]]
    while True:
        frontier = sorted(
            {c for p in out[-1] for c in graph.successors(p) if c not in seen}
        )
        if not frontier:
            return out
        seen.update(frontier)
        out.append(frontier)


def closure(policy: LayeredPrivacyPolicy, root: str) -> List[str]:
    """
    Transitive composition closure of a purpose in layered display order

    A data subject needs to study the first layers only, an interested party may read
    deeper.

    Parameters
    ----------
    policy
        Acyclic policy

    root
        Purpose id to start from

    Returns
    -------
    list of str
        Concatenation of :func:`layers`, ``root`` first; every purpose appears
        once

    Raises
    ------
    :class:`purposegraph.errors.CycleDetectedError`
        The composition graph is cyclic
    """
    return [pid for layer in layers(policy, root) for pid in layer]

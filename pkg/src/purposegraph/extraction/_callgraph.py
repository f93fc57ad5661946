"""
Function-dependency graph of a MiniSvc corpus
"""
from __future__ import annotations

from dataclasses import dataclass
from logging import getLogger
from typing import FrozenSet, List, Set, Tuple

import networkx as nx

from purposegraph.extraction._index import (
    REQUEST_MAPPING,
    AnalysisWarning,
    MethodRef,
    SymbolTable,
)
from purposegraph.minisvc.nodes import Call

_logger = getLogger(__name__)

ROUTE_SEPARATOR = "/"


def join_route(prefix: str, path: str) -> str:
    """
    Join a controller route prefix and a method path

    Empty segments are dropped, so repeated or missing separators do not matter. The
    result always starts with ``/``.

    Examples
    --------
    >>> join_route("/api/", "/users")
    '/api/users'
    >>> join_route("", "register")
    '/register'
    >>> join_route("", "")
    '/'
    """
    parts = [p for p in f"{prefix}{ROUTE_SEPARATOR}{path}".split(ROUTE_SEPARATOR) if p]
    return ROUTE_SEPARATOR + ROUTE_SEPARATOR.join(parts)


@dataclass(frozen=True, order=True)
class EntryPoint:
    """
    A ``@RequestMapping`` method of a controller
    """

    ref: MethodRef
    route: str


@dataclass(frozen=True)
class CallGraph:
    """
    Directed graph of function dependencies

    Interface calls are represented by edges to the implementation in every
    implementer of the interface.
    """

    nodes: FrozenSet[MethodRef]
    edges: FrozenSet[Tuple[MethodRef, MethodRef]]
    entry_points: Tuple[EntryPoint, ...] = ()
    warnings: Tuple[AnalysisWarning, ...] = ()

    def to_graph(self) -> nx.DiGraph:
        """
        :class:`networkx.DiGraph` with the same nodes and edges
        """
        graph = nx.DiGraph()
        graph.add_nodes_from(sorted(self.nodes))
        graph.add_edges_from(sorted(self.edges))
        return graph


def build_call_graph(st: SymbolTable) -> CallGraph:
    """
    Build the call graph of an indexed corpus

    A call ``r.n()`` in method ``A.m`` adds the edge ``A.m -> B.n`` if ``r`` is declared
    with class type ``B``. If ``r`` is declared with interface type ``I``, edges to
    ``C.n`` are added for every implementer ``C`` of ``I``. Calls on types declared
    outside the corpus, e.g. library classes, add no edge and are recorded as warnings.

    Parameters
    ----------
    st
        Indexed corpus

    Returns
    -------
    :class:`CallGraph`
        Entry-points are ordered by method
    """
    edges: Set[Tuple[MethodRef, MethodRef]] = set()
    warnings: List[AnalysisWarning] = []

    for ref, method in st.methods.items():
        path = st.paths[ref.cls]
        for stmt in method.body:
            if not isinstance(stmt, Call):
                continue

            def warn(message: str, stmt: Call = stmt) -> None:
                warnings.append(AnalysisWarning(path, stmt.line, stmt.col, message))

            receiver_type = st.receiver_type(ref, stmt.receiver)
            if receiver_type is None:
                # reported by the index
                continue

            if receiver_type in st.classes:
                target = MethodRef(receiver_type, stmt.method)
                if target in st.methods:
                    edges.add((ref, target))
                else:
                    warn(f"class `{receiver_type}` has no method `{stmt.method}`")

            elif receiver_type in st.interfaces:
                interface = st.interfaces[receiver_type]
                if stmt.method not in interface.signatures:
                    warn(f"interface `{receiver_type}` does not declare `{stmt.method}`")
                for implementer in sorted(interface.implementers):
                    target = MethodRef(implementer, stmt.method)
                    if target in st.methods:
                        edges.add((ref, target))
                    else:
                        warn(f"implementer `{implementer}` has no method `{stmt.method}`")

            else:
                warn(
                    f"call `{receiver_type}.{stmt.method}` leaves the corpus and is not "
                    "analysed"
                )

    entry_points = []
    for cls_name, controller in st.controllers.items():
        for method in st.classes[cls_name].methods:
            mapping = method.annotation(REQUEST_MAPPING)
            if mapping is None:
                continue
            route = join_route(controller.prefix, mapping.arg or "")
            entry_points.append(EntryPoint(MethodRef(cls_name, method.name), route))

    for warning in warnings:
        _logger.warning("%s", warning)
    _logger.info(
        "Call graph: %d methods, %d edges, %d entry-points",
        len(st.methods),
        len(edges),
        len(entry_points),
    )

    return CallGraph(
        nodes=frozenset(st.methods),
        edges=frozenset(edges),
        entry_points=tuple(sorted(entry_points)),
        warnings=tuple(sorted(warnings)),
    )

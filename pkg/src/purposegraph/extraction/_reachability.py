"""
Personal data reachable from call graph nodes

A method directly touches the personal data of entity ``E`` if it

* constructs ``E`` (``new E();``),
* declares a parameter or local variable of type ``E``, or
* calls a method on a field of its class whose type is ``E``.

The data reachable from a method is the union of the direct touches of every method
reachable from it, the method itself included. The analysis is flow-insensitive: it
considers what a method may touch, not on which paths.
"""
from __future__ import annotations

from logging import getLogger
from typing import Dict, FrozenSet, Set

import networkx as nx

from purposegraph.errors import UnknownEntryError
from purposegraph.extraction._callgraph import CallGraph
from purposegraph.extraction._index import MethodRef, SymbolTable
from purposegraph.lpl import DataElement
from purposegraph.minisvc.nodes import Call, LocalDecl, New

_logger = getLogger(__name__)


def touched_entities(st: SymbolTable, ref: MethodRef) -> FrozenSet[str]:
    """
    Entity types directly touched by a method
    """
    method = st.methods[ref]
    types: Set[str] = {p.type for p in method.params}
    for stmt in method.body:
        if isinstance(stmt, New):
            types.add(stmt.cls)
        elif isinstance(stmt, LocalDecl):
            types.add(stmt.type)
        elif isinstance(stmt, Call) and st.is_field_receiver(ref, stmt.receiver):
            types.add(st.classes[ref.cls].field(stmt.receiver).type)  # type: ignore

    return frozenset(t for t in types if t in st.entities)


def direct_data(st: SymbolTable, ref: MethodRef) -> FrozenSet[DataElement]:
    """
    Personal data directly touched by a method
    """
    return frozenset(d for e in touched_entities(st, ref) for d in st.entities[e])


def data_by_method(cg: CallGraph, st: SymbolTable) -> Dict[MethodRef, FrozenSet[DataElement]]:
    """
    Reachable personal data of every call graph node

    Strongly connected components are collapsed first, so recursion terminates and
    every method of a cycle gets the same result. Components are processed in reverse
    topological order.
    """
    graph = cg.to_graph()
    condensed = nx.condensation(graph)
    members = nx.get_node_attributes(condensed, "members")

    component_data: Dict[int, FrozenSet[DataElement]] = {}
    for component in reversed(list(nx.topological_sort(condensed))):
        data: Set[DataElement] = set()
        for ref in members[component]:
            data |= direct_data(st, ref)
        for successor in condensed.successors(component):
            data |= component_data[successor]
        component_data[component] = frozenset(data)

    mapping = condensed.graph["mapping"]
    return {ref: component_data[mapping[ref]] for ref in sorted(graph.nodes)}


def reachable_data(
    cg: CallGraph, st: SymbolTable, entry: MethodRef
) -> FrozenSet[DataElement]:
    """
    Personal data reachable from an entry-point

    Parameters
    ----------
    cg
        Call graph of the corpus

    st
        Symbol table of the corpus

    entry
        Method to start from

    Returns
    -------
    frozenset of :class:`purposegraph.lpl.DataElement`

    Raises
    ------
    :class:`purposegraph.errors.UnknownEntryError`
        ``entry`` is not a node of ``cg``
    """
    if entry not in cg.nodes:
        raise UnknownEntryError(entry)

    graph = cg.to_graph()
    reachable = nx.descendants(graph, entry) | {entry}
    sub = CallGraph(
        nodes=frozenset(reachable),
        edges=frozenset((u, v) for u, v in cg.edges if u in reachable),
    )
    return data_by_method(sub, st)[entry]

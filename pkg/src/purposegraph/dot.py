"""
DOT rendering of purpose graphs and service trees

Composition edges are drawn solid and inheritance edges dashed. Purposes are labelled
with their id and data set.
"""
from __future__ import annotations

from typing import Iterable, Optional

from graphviz import Digraph

from purposegraph.lpl import LayeredPrivacyPolicy, Purpose
from purposegraph.servicenet import ServiceModel, collect_services
from purposegraph.servicenet import pd as inspect_pd

PURPOSE_PREFIX = "purpose."
SERVICE_PREFIX = "service."


def _node(name: str) -> str:
    # ":" separates node and port in DOT edge statements
    return name.replace(":", "%3A")


def _data_label(data: Iterable) -> str:
    return "{" + ", ".join(sorted(d.qualified_name for d in data)) + "}"


def purpose_label(purpose: Purpose) -> str:
    """
    ``id`` and data set on two lines
    """
    return f"{purpose.id}\\n{_data_label(purpose.data)}"


def policy_to_dot(policy: LayeredPrivacyPolicy) -> str:
    """
    Render the purposes of a policy with their composition and inheritance edges

    Parameters
    ----------
    policy
        Policy to render

    Returns
    -------
    str
        DOT source of a digraph called ``purposes``. Nodes and edges are sorted, so
        the output is deterministic
    """
    dot = Digraph("purposes")
    for purpose in sorted(policy.purposes, key=lambda p: p.id):
        dot.node(_node(purpose.id), label=purpose_label(purpose))
    for edge in sorted(policy.composition):
        dot.edge(_node(edge.parent), _node(edge.child))
    for edge in sorted(policy.hierarchy):
        dot.edge(_node(edge.parent), _node(edge.child), style="dashed")
    return dot.source


def services_to_dot(
    model: ServiceModel, policy: Optional[LayeredPrivacyPolicy] = None
) -> str:
    """
    Render web services, their components and the gov relation

    Services are boxes labelled with their name and the data found by
    :func:`purposegraph.servicenet.pd`. Component edges point from a composite to its
    components. If ``policy`` is given, governing purposes are drawn as ellipses with a
    dotted edge to each service they govern.

    Returns
    -------
    str
        DOT source of a digraph called ``services``
    """
    dot = Digraph("services")
    services = collect_services(model.services)
    for name, ws in services.items():
        dot.node(
            _node(SERVICE_PREFIX + name),
            label=f"{name}\\n{_data_label(inspect_pd(ws).data)}",
            shape="box",
        )
    for name, ws in services.items():
        for component in ws.components:
            dot.edge(_node(SERVICE_PREFIX + name), _node(SERVICE_PREFIX + component.name))

    if policy is not None:
        governing = sorted({g.purpose for g in model.gov if g.purpose in policy})
        for purpose_id in governing:
            dot.node(
                _node(PURPOSE_PREFIX + purpose_id),
                label=purpose_label(policy.purpose(purpose_id)),
                shape="ellipse",
            )
        for edge in sorted(model.gov):
            if edge.purpose in policy and edge.service in services:
                dot.edge(
                    _node(PURPOSE_PREFIX + edge.purpose),
                    _node(SERVICE_PREFIX + edge.service),
                    style="dotted",
                    label="gov",
                )
    return dot.source

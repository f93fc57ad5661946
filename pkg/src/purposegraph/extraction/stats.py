"""
Summary statistics of an extracted purpose tree

The extracted tree has three levels: the root purpose, one purpose per controller and
one purpose per entry-point. Controllers whose data is empty are excluded from the
"with personal data" figures but remain in the tree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, List, Mapping, Optional

import pandas as pd

from purposegraph._typing import JsonDict
from purposegraph.errors import SchemaError
from purposegraph.lpl import LayeredPrivacyPolicy
from purposegraph.servicenet import WebService, collect_services

NOT_AVAILABLE = "n/a"


@dataclass(frozen=True)
class Spread:
    """
    Range and mean of a count

    ``min`` and ``max`` are ``None`` and ``mean`` is ``0.0`` if there were no values.
    """

    min: Optional[int] = None
    max: Optional[int] = None
    mean: float = 0.0

    @classmethod
    def from_series(cls, values: pd.Series) -> Spread:
        """
        Summarise a series of counts
        """
        if values.empty:
            return cls()
        return cls(int(values.min()), int(values.max()), float(values.mean()))

    @property
    def range(self) -> str:
        """
        ``[min, max]``, or ``n/a`` without values
        """
        if self.min is None:
            return NOT_AVAILABLE
        return f"[{self.min}, {self.max}]"

    def to_dict(self) -> JsonDict:
        """
        JSON-serialisable representation
        """
        return {"min": self.min, "max": self.max, "mean": self.mean}

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> Spread:
        """
        Inverse of :meth:`to_dict`
        """
        return cls(doc["min"], doc["max"], float(doc["mean"]))


@dataclass(frozen=True)
class Stats:
    """
    Controller, entry-point and entity counts of an extraction
    """

    n_controllers: int = 0
    n_endpoints: int = 0
    endpoints_per_controller: Spread = Spread()
    n_controllers_with_pd: int = 0
    n_endpoints_under_them: int = 0
    with_pd_spread: Spread = Spread()
    n_entity_types: int = 0
    purpose_data_counts: Mapping[str, int] = field(default_factory=dict, hash=False)
    entity_usage: Mapping[str, int] = field(default_factory=dict, hash=False)

    def to_dict(self) -> JsonDict:
        """
        JSON-serialisable representation with camelCase keys
        """
        return {
            "nControllers": self.n_controllers,
            "nEndpoints": self.n_endpoints,
            "endpointsPerController": self.endpoints_per_controller.to_dict(),
            "nControllersWithPd": self.n_controllers_with_pd,
            "nEndpointsUnderThem": self.n_endpoints_under_them,
            "withPdEndpointsPerController": self.with_pd_spread.to_dict(),
            "nEntityTypes": self.n_entity_types,
            "purposeDataCounts": dict(sorted(self.purpose_data_counts.items())),
            "entityUsage": dict(sorted(self.entity_usage.items())),
        }

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> Stats:
        """
        Read the ``stats`` section of an extraction result

        Raises
        ------
        :class:`purposegraph.errors.SchemaError`
            A key is missing or has the wrong type
        """
        try:
            return cls(
                n_controllers=int(doc["nControllers"]),
                n_endpoints=int(doc["nEndpoints"]),
                endpoints_per_controller=Spread.from_dict(doc["endpointsPerController"]),
                n_controllers_with_pd=int(doc["nControllersWithPd"]),
                n_endpoints_under_them=int(doc["nEndpointsUnderThem"]),
                with_pd_spread=Spread.from_dict(doc["withPdEndpointsPerController"]),
                n_entity_types=int(doc["nEntityTypes"]),
                purpose_data_counts=dict(doc.get("purposeDataCounts", {})),
                entity_usage=dict(doc.get("entityUsage", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError("stats", f"Invalid statistics section: {exc!r}") from exc


def compute_stats(
    policy: LayeredPrivacyPolicy, root: str, entities: Iterable[str]
) -> Stats:
    """
    Compute the statistics of an extracted purpose tree

    Parameters
    ----------
    policy
        Policy holding the tree

    root
        Id of the root purpose; its components are the controller purposes whose
        components are the entry-point purposes

    entities
        Names of the entity types of the corpus

    Returns
    -------
    :class:`Stats`
    """
    rows = []
    for controller in policy.children(root):
        rows.append(
            {
                "controller": controller,
                "n_endpoints": len(policy.children(controller)),
                "has_pd": bool(policy.purpose(controller).data),
            }
        )
    controllers = pd.DataFrame(rows, columns=["controller", "n_endpoints", "has_pd"])
    with_pd = controllers[controllers["has_pd"].astype(bool)]

    endpoints: List[str] = [
        e for c in controllers["controller"] for e in policy.children(c)
    ]
    entities = sorted(set(entities))
    usage = {
        entity: sum(
            any(d.entity == entity for d in policy.purpose(e).data) for e in endpoints
        )
        for entity in entities
    }

    return Stats(
        n_controllers=len(controllers),
        n_endpoints=int(controllers["n_endpoints"].sum()),
        endpoints_per_controller=Spread.from_series(controllers["n_endpoints"]),
        n_controllers_with_pd=len(with_pd),
        n_endpoints_under_them=int(with_pd["n_endpoints"].sum()),
        with_pd_spread=Spread.from_series(with_pd["n_endpoints"]),
        n_entity_types=len(entities),
        purpose_data_counts={p.id: len(p.data) for p in policy.purposes},
        entity_usage=usage,
    )


@dataclass(frozen=True)
class Transparency:
    """
    Purpose-to-service ratio and breadth of the composition graph

    No threshold for the breadth is defined, it is reported as is.
    """

    n_purposes: int
    n_services: int
    breadth: int

    @property
    def ratio(self) -> Optional[float]:
        """
        ``n_purposes / n_services``, ``None`` without services
        """
        if not self.n_services:
            return None
        return self.n_purposes / self.n_services

    @property
    def flagged(self) -> bool:
        """
        Whether purposes do not outnumber services
        """
        return self.ratio is not None and self.ratio <= 1

    def to_dict(self) -> JsonDict:
        """
        JSON-serialisable representation, including the derived ratio and flag
        """
        return {
            "nPurposes": self.n_purposes,
            "nServices": self.n_services,
            "ratio": self.ratio,
            "ratioFlagged": self.flagged,
            "breadth": self.breadth,
        }


def transparency(
    policy: LayeredPrivacyPolicy, services: Iterable[WebService]
) -> Transparency:
    """
    Compute the transparency metrics of a policy and its services

    Components of ``services`` are counted as services too. The breadth is the
    largest number of direct components of any purpose.
    """
    parents = pd.Series([e.parent for e in policy.composition], dtype=object)
    breadth = int(parents.value_counts().max()) if not parents.empty else 0
    return Transparency(
        n_purposes=len(policy.purposes),
        n_services=len(collect_services(services)),
        breadth=breadth,
    )


def _fmt_ratio(ratio: Optional[float]) -> str:
    return NOT_AVAILABLE if ratio is None else str(round(ratio, 2))


def format_table(stats: Stats, metrics: Transparency) -> str:
    """
    Human-readable summary

    The first line reads e.g. ``controllers: 30, endpoints: 245, mean: 8.2, ratio: 1.0``.
    Means are given with one decimal.
    """
    spread = stats.endpoints_per_controller
    with_pd = stats.with_pd_spread
    lines = [
        f"controllers: {stats.n_controllers}, endpoints: {stats.n_endpoints}, "
        f"mean: {spread.mean:.1f}, ratio: {_fmt_ratio(metrics.ratio)}",
        f"endpoints per controller: range {spread.range}, mean {spread.mean:.1f}",
        f"controllers with personal data: {stats.n_controllers_with_pd}, "
        f"endpoints under them: {stats.n_endpoints_under_them}, "
        f"range {with_pd.range}, mean {with_pd.mean:.1f}",
        f"entity types: {stats.n_entity_types}",
        f"purposes: {metrics.n_purposes}, services: {metrics.n_services}, "
        f"breadth: {metrics.breadth}",
    ]
    if metrics.flagged:
        lines.append(
            f"WARNING: transparency ratio {_fmt_ratio(metrics.ratio)} <= 1, purposes "
            "do not outnumber services"
        )
    if stats.entity_usage:
        lines.append("entity usage:")
        lines.extend(f"  {e}: {n}" for e, n in sorted(stats.entity_usage.items()))
    return "\n".join(lines) + "\n"

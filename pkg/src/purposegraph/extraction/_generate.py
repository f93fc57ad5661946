"""
Generation of the composed-purpose tree from an analysed corpus
"""
from __future__ import annotations

from dataclasses import dataclass
from logging import getLogger
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import tqdm.autonotebook as tqdman

from purposegraph.config import PurposeDefaults
from purposegraph.extraction._callgraph import CallGraph, EntryPoint
from purposegraph.extraction._index import (
    DESCRIPTION,
    AnalysisWarning,
    ControllerInfo,
    SymbolTable,
)
from purposegraph.extraction._reachability import data_by_method
from purposegraph.extraction.stats import Stats, compute_stats
from purposegraph.lpl import (
    DataElement,
    LayeredPrivacyPolicy,
    Purpose,
    UnderlyingPurposeEdge,
)
from purposegraph.servicenet import GovEdge, ServiceNet, WebService

_logger = getLogger(__name__)

DISAMBIGUATION_SEPARATOR = "#"


@dataclass(frozen=True)
class ExtractionResult:
    """
    Composed purposes, services and statistics extracted from a corpus

    ``policy`` holds every generated purpose and composition edge. ``services`` is the
    root web service whose components mirror the purpose tree.
    """

    policy: LayeredPrivacyPolicy
    root_purpose: Purpose
    controller_purposes: Tuple[Purpose, ...]
    endpoint_purposes: Tuple[Purpose, ...]
    composition: FrozenSet[UnderlyingPurposeEdge]
    gov: FrozenSet[GovEdge]
    services: WebService
    stats: Stats
    warnings: Tuple[AnalysisWarning, ...] = ()


def _unique_id(candidate: str, qualifier: str, taken: Set[str]) -> str:
    out = candidate
    if out in taken:
        out = base = f"{candidate}{DISAMBIGUATION_SEPARATOR}{qualifier}"
        counter = 2
        while out in taken:
            out = f"{base}{DISAMBIGUATION_SEPARATOR}{counter}"
            counter += 1
        _logger.warning("Purpose id `%s` is taken, using `%s`", candidate, out)
    taken.add(out)
    return out


def _endpoint_id(controller: ControllerInfo, entry: EntryPoint) -> str:
    return f"{controller.label}{entry.route}"


def _purpose(
    purpose_id: str,
    name: str,
    descr: str,
    data: Iterable[DataElement],
    defaults: PurposeDefaults,
    controller_of_record: str,
) -> Purpose:
    return Purpose(
        id=purpose_id,
        name=name,
        opt_out=defaults.opt_out,
        required=defaults.required,
        descr=descr,
        recipients=defaults.recipients_for(controller_of_record),
        retention=defaults.retention,
        privacy_model=defaults.privacy_model,
        data=frozenset(data),
    )


def _service(
    purpose: Purpose,
    url: str,
    label: str,
    defaults: PurposeDefaults,
    components: Tuple[WebService, ...] = (),
) -> WebService:
    # services without components get a minimal net so every leaf has one
    net = None if components else ServiceNet.minimal(label, purpose.data)
    return WebService(
        name=purpose.id,
        desc=purpose.descr,
        loc=defaults.loc,
        url=url,
        components=components,
        net=net,
        recipients=purpose.recipients,
    )


def generate(
    st: SymbolTable,
    cg: CallGraph,
    corpus_name: str,
    defaults: Optional[PurposeDefaults] = None,
    progress: bool = False,
) -> ExtractionResult:
    """
    Generate the composed purposes of a corpus

    One purpose is generated per entry-point, with id ``label + route`` (e.g.
    ``account/register``), the method name as name and the reachable personal data as
    data. One purpose is generated per controller, with the controller label as id and
    the union of its entry-points' data. A root purpose, with ``corpus_name`` as id,
    composes all controllers. Colliding ids get a ``#qualifier`` suffix.

    Fields which cannot be derived from code are taken from ``defaults``, hence every
    composition edge is valid by construction. Each purpose governs one generated web
    service of the same name.

    Parameters
    ----------
    st
        Indexed corpus

    cg
        Call graph of the corpus

    corpus_name
        Name of the corpus, also the controller of record when ``defaults`` declares
        no recipients

    defaults
        Values of the fields which cannot be derived, defaults to
        :class:`purposegraph.config.PurposeDefaults`

    progress
        Show a progress bar while the entry-points are processed

    Returns
    -------
    :class:`ExtractionResult`
    """
    defaults = defaults if defaults is not None else PurposeDefaults()
    data = data_by_method(cg, st)

    by_controller: Dict[str, List[EntryPoint]] = {name: [] for name in st.controllers}
    for entry in cg.entry_points:
        by_controller[entry.ref.cls].append(entry)

    taken: Set[str] = {corpus_name}
    controller_purposes: List[Purpose] = []
    endpoint_purposes: List[Purpose] = []
    controller_services: List[WebService] = []
    composition: Set[UnderlyingPurposeEdge] = set()

    for cls_name in tqdman.tqdm(
        sorted(st.controllers),
        desc="Generating purposes",
        leave=False,
        disable=not progress,
    ):
        controller = st.controllers[cls_name]
        controller_id = _unique_id(controller.label, cls_name, taken)

        endpoints: List[Purpose] = []
        endpoint_services: List[WebService] = []
        for entry in sorted(by_controller[cls_name], key=lambda e: (e.route, e.ref)):
            method = st.methods[entry.ref]
            description = method.annotation(DESCRIPTION)
            purpose = _purpose(
                _unique_id(_endpoint_id(controller, entry), entry.ref.method, taken),
                name=entry.ref.method,
                descr=description.arg
                if description is not None and description.arg
                else f"Entry-point {entry.ref} serving {entry.route}",
                data=data[entry.ref],
                defaults=defaults,
                controller_of_record=corpus_name,
            )
            _logger.debug("%s: %d data element(s)", purpose.id, len(purpose.data))
            endpoints.append(purpose)
            endpoint_services.append(
                _service(purpose, entry.route, entry.ref.method, defaults)
            )
            composition.add(UnderlyingPurposeEdge(controller_id, purpose.id))

        controller_purpose = _purpose(
            controller_id,
            name=cls_name,
            descr=controller.description or f"Controller {cls_name}",
            data=(d for p in endpoints for d in p.data),
            defaults=defaults,
            controller_of_record=corpus_name,
        )
        controller_purposes.append(controller_purpose)
        endpoint_purposes.extend(endpoints)
        controller_services.append(
            _service(
                controller_purpose,
                controller.prefix,
                cls_name,
                defaults,
                tuple(endpoint_services),
            )
        )
        composition.add(UnderlyingPurposeEdge(corpus_name, controller_id))

    root = _purpose(
        corpus_name,
        name=corpus_name,
        descr=f"All entry-points of {corpus_name}",
        data=(d for p in controller_purposes for d in p.data),
        defaults=defaults,
        controller_of_record=corpus_name,
    )
    root_service = _service(root, "", corpus_name, defaults, tuple(controller_services))

    purposes = [root] + controller_purposes + endpoint_purposes
    policy = LayeredPrivacyPolicy(
        version=defaults.version,
        name=corpus_name,
        lang=defaults.lang,
        pp_uri=defaults.pp_uri,
        purposes=frozenset(purposes),
        composition=frozenset(composition),
    )
    gov = frozenset(GovEdge(p.id, p.id) for p in purposes)

    stats = compute_stats(policy, corpus_name, st.entities)
    _logger.info(
        "Generated %d purposes for %d controllers and %d entry-points",
        len(purposes),
        len(controller_purposes),
        len(endpoint_purposes),
    )

    return ExtractionResult(
        policy=policy,
        root_purpose=root,
        controller_purposes=tuple(controller_purposes),
        endpoint_purposes=tuple(endpoint_purposes),
        composition=frozenset(composition),
        gov=gov,
        services=root_service,
        stats=stats,
        warnings=tuple(sorted(set(st.warnings) | set(cg.warnings))),
    )

"""
Static extraction of composed purposes from annotated MiniSvc source code

Every entry-point (``@RequestMapping`` method) becomes a purpose whose data are the
``@PersonalData`` fields of the ``@Document`` entities reachable from it in the call
graph. Entry-point purposes are composed into one purpose per controller, which in
turn compose a root purpose for the whole corpus.

Calls through interfaces are resolved pessimistically: the data of every implementer
is included. Calls leaving the corpus are not analysed and reported as warnings.
"""
from __future__ import annotations

from logging import getLogger
from pathlib import Path
from typing import Iterable, Optional

from purposegraph._typing import FilePath
from purposegraph.config import PurposeDefaults
from purposegraph.extraction._callgraph import (  # noqa: F401
    CallGraph,
    EntryPoint,
    build_call_graph,
    join_route,
)
from purposegraph.extraction._corpus import (  # noqa: F401
    find_sources,
    get_joblib_parallel_processor,
    load_corpus,
)
from purposegraph.extraction._generate import ExtractionResult, generate  # noqa: F401
from purposegraph.extraction._index import (  # noqa: F401
    AnalysisWarning,
    ControllerInfo,
    InterfaceInfo,
    MethodRef,
    SymbolTable,
    index,
)
from purposegraph.extraction._reachability import (  # noqa: F401
    data_by_method,
    direct_data,
    reachable_data,
    touched_entities,
)
from purposegraph.extraction.stats import Stats, compute_stats  # noqa: F401
from purposegraph.serialisation import serialize_extraction

_logger = getLogger(__name__)

DEFAULT_CORPUS_NAME = "corpus"


def corpus_name_for(src_dir: FilePath) -> str:
    """
    Default corpus name: the name of the source directory
    """
    return Path(src_dir).resolve().name or DEFAULT_CORPUS_NAME


def extract(
    src_dir: FilePath,
    corpus_name: Optional[str] = None,
    defaults: Optional[PurposeDefaults] = None,
    n_jobs: Optional[int] = None,
    progress: bool = False,
) -> ExtractionResult:
    """
    Extract the composed purposes of a source directory

    Parameters
    ----------
    src_dir
        Directory searched recursively for ``.msvc`` files

    corpus_name
        Id of the root purpose, defaults to the name of ``src_dir``

    defaults
        Values of the purpose fields which cannot be derived from code

    n_jobs
        If given, parse files in parallel with this many :mod:`joblib` workers

    progress
        Show progress bars

    Returns
    -------
    :class:`ExtractionResult`
    """
    processor = get_joblib_parallel_processor(n_jobs) if n_jobs else None
    units = load_corpus(src_dir, parallel_processor=processor, progress=progress)
    table = index(units)
    graph = build_call_graph(table)
    return generate(
        table,
        graph,
        corpus_name or corpus_name_for(src_dir),
        defaults=defaults,
        progress=progress,
    )


def result_to_json(result: ExtractionResult) -> str:
    """
    Serialise an extraction result

    See :func:`purposegraph.serialisation.serialize_extraction`.
    """
    return serialize_extraction(
        result.policy, (result.services,), result.gov, result.stats.to_dict()
    )


def format_warnings(warnings: Iterable[AnalysisWarning]) -> str:
    """
    One ``file:line:col message`` line per warning
    """
    return "".join(f"{w}\n" for w in warnings)

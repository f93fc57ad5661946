"""
Loading of MiniSvc source directories
"""
from __future__ import annotations

from logging import getLogger
from pathlib import Path
from typing import TYPE_CHECKING, Any, Callable, Iterable, List, Optional

import tqdm.autonotebook as tqdman

from purposegraph._typing import FilePath
from purposegraph.minisvc.nodes import CompilationUnit
from purposegraph.minisvc.parser import parse_source

if TYPE_CHECKING:
    ParallelProcessor = Callable[
        [Callable[..., CompilationUnit], Iterable[str], Iterable[str]],
        Iterable[CompilationUnit],
    ]

_logger = getLogger(__name__)

SOURCE_SUFFIX = ".msvc"


def _parse_file(root: str, relative: str) -> CompilationUnit:
    with open(Path(root) / relative, encoding="utf-8") as fh:
        text = fh.read()
    return parse_source(text, relative)


def find_sources(src_dir: FilePath) -> List[str]:
    """
    Source files below a directory

    Returns
    -------
    list of str
        Paths relative to ``src_dir`` in POSIX form, sorted

    Raises
    ------
    NotADirectoryError
        ``src_dir`` is not a directory
    """
    root = Path(src_dir)
    if not root.is_dir():
        raise NotADirectoryError(f"{src_dir} is not a directory")
    return sorted(
        p.relative_to(root).as_posix()
        for p in root.rglob(f"*{SOURCE_SUFFIX}")
        if p.is_file()
    )


def load_corpus(
    src_dir: FilePath,
    parallel_processor: Optional[ParallelProcessor] = None,
    progress: bool = False,
) -> List[CompilationUnit]:
    """
    Parse every ``.msvc`` file below a directory

    Parameters
    ----------
    src_dir
        Root of the corpus, searched recursively

    parallel_processor
        Applies the parser to the files, e.g. the result of
        :func:`get_joblib_parallel_processor`. If ``None``, files are parsed one after
        the other

    progress
        Show a progress bar. Ignored if ``parallel_processor`` is given

    Returns
    -------
    list of :class:`purposegraph.minisvc.nodes.CompilationUnit`
        Ordered by path, independent of ``parallel_processor``. Unit paths are
        relative to ``src_dir``

    Raises
    ------
    :class:`purposegraph.errors.LexError`, :class:`purposegraph.errors.ParseError`
        The first file which cannot be parsed, the error names the relative path

    OSError
        A file cannot be read

    UnicodeDecodeError
        A file is not UTF-8
    """
    sources = find_sources(src_dir)
    _logger.info("Parsing %d source file(s) below %s", len(sources), src_dir)
    root = str(src_dir)

    if parallel_processor is None:
        units = [
            _parse_file(root, relative)
            for relative in tqdman.tqdm(
                sources, desc="Parsing sources", leave=False, disable=not progress
            )
        ]
    else:
        units = list(parallel_processor(_parse_file, [root] * len(sources), sources))

    return sorted(units, key=lambda u: u.path)


def get_joblib_parallel_processor(
    n_jobs: int = -1,
    backend: str = "loky",
    *args: Any,
    **kwargs: Any,
) -> ParallelProcessor:
    """
    Get parallel processor using :mod:`joblib` as the backend.

    Parameters
    ----------
    n_jobs
        Number of jobs to run in parallel. If `-1` all CPUs are used.

    backend
        Backend used for parallelisation. Defaults to 'loky' which uses separate
        processes for each worker.
        See :class:`joblib.Parallel` for a more complete description of the available
        options.

    *args
        Passed to initialiser of :class:`joblib.Parallel`

    **kwargs
        Passed to initialiser of :class:`joblib.Parallel`

    Returns
    -------
        Function that can be used as ``parallel_processor`` in :func:`load_corpus`
    """
    try:
        import joblib
    except ImportError as e:  # pragma: no cover
        raise ImportError("joblib is not installed. Run 'pip install joblib'") from e

    processor = joblib.Parallel(*args, n_jobs=n_jobs, backend=backend, **kwargs)

    def joblib_parallel_processor(
        func: Callable[..., CompilationUnit],
        roots: Iterable[str],
        sources: Iterable[str],
    ) -> Iterable[CompilationUnit]:
        prepped = (
            joblib.delayed(func)(root, source) for root, source in zip(roots, sources)
        )
        return processor(prepped)

    return joblib_parallel_processor

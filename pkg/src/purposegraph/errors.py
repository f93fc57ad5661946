"""
Custom errors and exceptions used by purposegraph
"""
from __future__ import annotations

from typing import Any, Iterable, Optional, Sequence


class PurposeGraphError(ValueError):
    """
    Base class of all errors raised deliberately by purposegraph
    """


class PolicySyntaxError(PurposeGraphError):
    """
    Error raised when a policy document is not well-formed JSON
    """

    def __init__(self, line: int, col: int, message: str):
        self.line = line
        self.col = col
        msg = f"{line}:{col}: {message}"

        super().__init__(msg)


class SchemaError(PurposeGraphError):
    """
    Error raised when a document does not follow the expected schema

    ``path`` locates the offending element, e.g. ``purposes[2].retention.type``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        msg = f"{path or '<root>'}: {message}"

        super().__init__(msg)


class DanglingEdgeError(PurposeGraphError):
    """
    Error raised when an edge references a purpose which is not in the policy
    """

    def __init__(self, edge: Any, missing: Iterable[str] = ()):
        self.edge = edge
        self.missing = tuple(missing)
        msg = f"Edge {edge} references unknown purpose(s): {list(self.missing)}"

        super().__init__(msg)


class UnknownAttributeError(PurposeGraphError):
    """
    Error raised when privacy model attributes cannot be compared
    """

    def __init__(self, model: str, attribute: str):
        self.model = model
        self.attribute = attribute
        msg = f"Attribute `{attribute}` of privacy model `{model}` cannot be compared"

        super().__init__(msg)


class CycleDetectedError(PurposeGraphError):
    """
    Error raised when an operation requires an acyclic composition graph
    """

    def __init__(self, cycle: Sequence[str]):
        self.cycle = tuple(cycle)
        msg = f"Composition graph contains a cycle: {' -> '.join(self.cycle)}"

        super().__init__(msg)


class _PositionedError(PurposeGraphError):
    def __init__(self, line: int, col: int, message: str, path: Optional[str] = None):
        self.line = line
        self.col = col
        self.path = path
        self.message = message
        prefix = f"{path}:" if path else ""

        super().__init__(f"{prefix}{line}:{col}: {message}")


class LexError(_PositionedError):
    """
    Error raised when MiniSvc source contains a character which cannot be lexed
    """

    def __init__(self, line: int, col: int, char: str, path: Optional[str] = None):
        self.char = char
        super().__init__(line, col, f"unexpected character {char!r}", path)


class ParseError(_PositionedError):
    """
    Error raised when a MiniSvc token stream does not follow the grammar

    Only the first error is reported.
    """

    def __init__(
        self, expected: str, found: str, line: int, col: int, path: Optional[str] = None
    ):
        self.expected = expected
        self.found = found
        super().__init__(line, col, f"expected {expected}, found {found}", path)


class DuplicateNameError(PurposeGraphError):
    """
    Error raised when a name is declared more than once in a corpus
    """

    def __init__(self, name: str, paths: Iterable[str]):
        self.name = name
        self.paths = tuple(paths)
        msg = f"`{name}` is declared more than once: {list(self.paths)}"

        super().__init__(msg)


class UnknownInterfaceError(PurposeGraphError):
    """
    Error raised when a class implements an interface which is not declared
    """

    def __init__(self, name: str, implementer: Optional[str] = None):
        self.name = name
        self.implementer = implementer
        msg = f"Unknown interface `{name}`"
        if implementer:
            msg = f"{msg} (implemented by `{implementer}`)"

        super().__init__(msg)


class UnknownEntryError(PurposeGraphError):
    """
    Error raised when a reachability query starts from an unknown method
    """

    def __init__(self, entry: Any):
        self.entry = entry
        msg = f"`{entry}` is not a node of the call graph"

        super().__init__(msg)


class UnknownPurposeError(PurposeGraphError):
    """
    Error raised when a gov edge references a purpose which is not in the policy
    """

    def __init__(self, purpose: str):
        self.purpose = purpose
        msg = f"Unknown purpose `{purpose}`"

        super().__init__(msg)


class UnknownServiceError(PurposeGraphError):
    """
    Error raised when a gov edge or component list references an unknown service
    """

    def __init__(self, service: str):
        self.service = service
        msg = f"Unknown service `{service}`"

        super().__init__(msg)


class ServiceModelError(PurposeGraphError):
    """
    Error raised when web services break the structural rules of a service model
    """

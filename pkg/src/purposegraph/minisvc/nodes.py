"""
Syntax tree of the MiniSvc language

Every node records the 1-based position of its first token.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union


@dataclass(frozen=True)
class Annotation:
    """
    ``@Name`` or ``@Name("arg")``
    """

    name: str
    arg: Optional[str] = None
    line: int = 1
    col: int = 1


@dataclass(frozen=True)
class FieldDecl:
    """
    ``@Annotations Type name;`` inside a class body
    """

    type: str
    name: str
    annotations: Tuple[Annotation, ...] = ()
    line: int = 1
    col: int = 1

    def has_annotation(self, name: str) -> bool:
        """
        Whether an annotation called ``name`` is present
        """
        return any(a.name == name for a in self.annotations)


@dataclass(frozen=True)
class Param:
    """
    ``Type name`` in a parameter list
    """

    type: str
    name: str
    line: int = 1
    col: int = 1


@dataclass(frozen=True)
class Call:
    """
    ``receiver.method(args);``
    """

    receiver: str
    method: str
    args: Tuple[str, ...] = ()
    line: int = 1
    col: int = 1


@dataclass(frozen=True)
class New:
    """
    ``new Class();``
    """

    cls: str
    line: int = 1
    col: int = 1


@dataclass(frozen=True)
class LocalDecl:
    """
    ``Type name;``
    """

    type: str
    name: str
    line: int = 1
    col: int = 1


Stmt = Union[Call, New, LocalDecl]


@dataclass(frozen=True)
class MethodDecl:
    """
    Method of a class, with its body
    """

    return_type: str
    name: str
    annotations: Tuple[Annotation, ...] = ()
    params: Tuple[Param, ...] = ()
    body: Tuple[Stmt, ...] = ()
    line: int = 1
    col: int = 1

    def annotation(self, name: str) -> Optional[Annotation]:
        """
        First annotation called ``name``, if any
        """
        return next((a for a in self.annotations if a.name == name), None)


@dataclass(frozen=True)
class MethodSig:
    """
    Method signature declared by an interface
    """

    return_type: str
    name: str
    params: Tuple[Param, ...] = ()
    line: int = 1
    col: int = 1


@dataclass(frozen=True)
class ClassDecl:
    """
    ``class Name [implements Interface] { ... }``
    """

    name: str
    annotations: Tuple[Annotation, ...] = ()
    implements: Optional[str] = None
    fields: Tuple[FieldDecl, ...] = ()
    methods: Tuple[MethodDecl, ...] = ()
    line: int = 1
    col: int = 1

    def annotation(self, name: str) -> Optional[Annotation]:
        """
        First annotation called ``name``, if any
        """
        return next((a for a in self.annotations if a.name == name), None)

    def field(self, name: str) -> Optional[FieldDecl]:
        """
        Field called ``name``, if any
        """
        return next((f for f in self.fields if f.name == name), None)


@dataclass(frozen=True)
class InterfaceDecl:
    """
    ``interface Name { ... }``, only method signatures are allowed
    """

    name: str
    methods: Tuple[MethodSig, ...] = ()
    line: int = 1
    col: int = 1


@dataclass(frozen=True)
class CompilationUnit:
    """
    Declarations of one source file, in source order
    """

    path: str
    classes: Tuple[ClassDecl, ...] = ()
    interfaces: Tuple[InterfaceDecl, ...] = ()

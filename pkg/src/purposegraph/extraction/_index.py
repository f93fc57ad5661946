"""
Symbol table of a parsed MiniSvc corpus
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from logging import getLogger
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from purposegraph.errors import DuplicateNameError, UnknownInterfaceError
from purposegraph.lpl import DataElement
from purposegraph.minisvc.nodes import (
    Call,
    ClassDecl,
    CompilationUnit,
    InterfaceDecl,
    LocalDecl,
    MethodDecl,
)

_logger = getLogger(__name__)

CONTROLLER = "Controller"
REQUEST_MAPPING = "RequestMapping"
DOCUMENT = "Document"
PERSONAL_DATA = "PersonalData"
DESCRIPTION = "Description"


@dataclass(frozen=True, order=True)
class AnalysisWarning:
    """
    A construct which the analysis could not resolve

    Warnings never stop the analysis.
    """

    path: str
    line: int
    col: int
    message: str

    def __str__(self) -> str:
        return f"{self.path}:{self.line}:{self.col} {self.message}"


@dataclass(frozen=True, order=True)
class MethodRef:
    """
    A method of a corpus class, the node type of the call graph
    """

    cls: str
    method: str

    def __str__(self) -> str:
        return f"{self.cls}.{self.method}"


@dataclass(frozen=True)
class InterfaceInfo:
    """
    An interface and the names of the corpus classes implementing it
    """

    decl: InterfaceDecl
    implementers: FrozenSet[str] = frozenset()

    @property
    def signatures(self) -> Tuple[str, ...]:
        """
        Names of the declared methods
        """
        return tuple(m.name for m in self.decl.methods)


@dataclass(frozen=True)
class ControllerInfo:
    """
    A controller class

    ``label`` is the ``@Controller`` argument or the class name, ``prefix`` the
    class-level ``@RequestMapping`` argument or ``""``.
    """

    label: str
    prefix: str = ""
    description: Optional[str] = None


@dataclass(frozen=True)
class SymbolTable:
    """
    Declarations of a corpus, indexed by name
    """

    classes: Dict[str, ClassDecl] = field(default_factory=dict)
    interfaces: Dict[str, InterfaceInfo] = field(default_factory=dict)
    entities: Dict[str, FrozenSet[DataElement]] = field(default_factory=dict)
    controllers: Dict[str, ControllerInfo] = field(default_factory=dict)
    methods: Dict[MethodRef, MethodDecl] = field(default_factory=dict)
    paths: Dict[str, str] = field(default_factory=dict)
    warnings: Tuple[AnalysisWarning, ...] = ()

    def receiver_type(self, ref: MethodRef, receiver: str) -> Optional[str]:
        """
        Declared type of a name used inside a method

        Locals shadow parameters, which shadow fields of the enclosing class.
        Declarations are flow-insensitive, a local declared after its use still counts.
        """
        method = self.methods[ref]
        for stmt in method.body:
            if isinstance(stmt, LocalDecl) and stmt.name == receiver:
                return stmt.type
        for param in method.params:
            if param.name == receiver:
                return param.type
        decl = self.classes[ref.cls].field(receiver)
        return decl.type if decl is not None else None

    def is_field_receiver(self, ref: MethodRef, receiver: str) -> bool:
        """
        Whether ``receiver`` resolves to a field of the enclosing class
        """
        method = self.methods[ref]
        shadowed = {s.name for s in method.body if isinstance(s, LocalDecl)}
        shadowed |= {p.name for p in method.params}
        return receiver not in shadowed and self.classes[ref.cls].field(receiver) is not None


def _is_controller(cls: ClassDecl) -> bool:
    return cls.annotation(CONTROLLER) is not None or any(
        m.annotation(REQUEST_MAPPING) is not None for m in cls.methods
    )


def _check_members(cls: ClassDecl, path: str) -> None:
    names: List[str] = [f.name for f in cls.fields] + [m.name for m in cls.methods]
    seen = set()
    for name in names:
        if name in seen:
            raise DuplicateNameError(f"{cls.name}.{name}", [path])
        seen.add(name)


def index(units: Sequence[CompilationUnit]) -> SymbolTable:
    """
    Index a parsed corpus

    Entities are the ``@Document`` classes with at least one ``@PersonalData`` field.
    Controllers are the classes annotated with ``@Controller`` or declaring at least
    one ``@RequestMapping`` method.

    Parameters
    ----------
    units
        Parsed source files

    Returns
    -------
    :class:`SymbolTable`
        Calls through names which are neither locals, parameters nor fields are
        recorded as warnings

    Raises
    ------
    :class:`purposegraph.errors.DuplicateNameError`
        A class or interface is declared more than once, or a class declares a member
        name more than once

    :class:`purposegraph.errors.UnknownInterfaceError`
        A class implements an interface which is not declared in the corpus
    """
    declared: Dict[str, List[str]] = {}
    for unit in units:
        for decl in list(unit.classes) + list(unit.interfaces):
            declared.setdefault(decl.name, []).append(unit.path)
    for name in sorted(declared):
        if len(declared[name]) > 1:
            raise DuplicateNameError(name, declared[name])

    classes: Dict[str, ClassDecl] = {}
    interface_decls: Dict[str, InterfaceDecl] = {}
    paths: Dict[str, str] = {}
    for unit in units:
        for cls in unit.classes:
            _check_members(cls, unit.path)
            classes[cls.name] = cls
            paths[cls.name] = unit.path
        for interface in unit.interfaces:
            interface_decls[interface.name] = interface
            paths[interface.name] = unit.path

    implementers: Dict[str, List[str]] = {name: [] for name in interface_decls}
    for name in sorted(classes):
        implemented = classes[name].implements
        if implemented is None:
            continue
        if implemented not in interface_decls:
            raise UnknownInterfaceError(implemented, name)
        implementers[implemented].append(name)

    interfaces = {
        name: InterfaceInfo(interface_decls[name], frozenset(implementers[name]))
        for name in sorted(interface_decls)
    }

    entities: Dict[str, FrozenSet[DataElement]] = {}
    controllers: Dict[str, ControllerInfo] = {}
    methods: Dict[MethodRef, MethodDecl] = {}
    for name in sorted(classes):
        cls = classes[name]
        if cls.annotation(DOCUMENT) is not None:
            personal = frozenset(
                DataElement(name, f.name) for f in cls.fields if f.has_annotation(PERSONAL_DATA)
            )
            if personal:
                entities[name] = personal
            else:
                _logger.debug("Entity %s has no personal data fields", name)

        if _is_controller(cls):
            controller = cls.annotation(CONTROLLER)
            mapping = cls.annotation(REQUEST_MAPPING)
            description = cls.annotation(DESCRIPTION)
            controllers[name] = ControllerInfo(
                label=controller.arg if controller is not None and controller.arg else name,
                prefix=(mapping.arg or "") if mapping is not None else "",
                description=description.arg if description is not None else None,
            )

        for method in cls.methods:
            methods[MethodRef(name, method.name)] = method

    table = SymbolTable(
        classes=dict(sorted(classes.items())),
        interfaces=interfaces,
        entities=entities,
        controllers=controllers,
        methods=dict(sorted(methods.items())),
        paths=paths,
    )
    warnings = tuple(sorted(_undeclared_receivers(table)))
    for warning in warnings:
        _logger.warning("%s", warning)

    _logger.info(
        "Indexed %d classes, %d interfaces, %d entities, %d controllers",
        len(classes),
        len(interfaces),
        len(entities),
        len(controllers),
    )
    return replace(table, warnings=warnings)


def _undeclared_receivers(table: SymbolTable) -> Iterable[AnalysisWarning]:
    for ref, method in table.methods.items():
        for stmt in method.body:
            if isinstance(stmt, Call) and table.receiver_type(ref, stmt.receiver) is None:
                yield AnalysisWarning(
                    table.paths[ref.cls],
                    stmt.line,
                    stmt.col,
                    f"receiver `{stmt.receiver}` is not declared in {ref}",
                )

"""
Pretty printer of MiniSvc syntax trees

The printer emits classes before interfaces and, inside a class, fields before
methods. Printing a parsed printout gives the same text again.
"""
from __future__ import annotations

from typing import Iterable, List

from purposegraph.minisvc.nodes import (
    Annotation,
    Call,
    ClassDecl,
    CompilationUnit,
    InterfaceDecl,
    LocalDecl,
    MethodDecl,
    New,
    Param,
    Stmt,
)

INDENT = "    "


def _quote(value: str) -> str:
    escaped = (
        value.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\t", "\\t")
    )
    return f'"{escaped}"'


def format_annotation(annotation: Annotation) -> str:
    """
    Source text of an annotation, the argument is quoted and escaped
    """
    if annotation.arg is None:
        return f"@{annotation.name}"
    return f"@{annotation.name}({_quote(annotation.arg)})"


def _params(params: Iterable[Param]) -> str:
    return ", ".join(f"{p.type} {p.name}" for p in params)


def format_stmt(stmt: Stmt) -> str:
    """
    Source text of a statement, including the trailing ``;``
    """
    if isinstance(stmt, New):
        return f"new {stmt.cls}();"
    if isinstance(stmt, LocalDecl):
        return f"{stmt.type} {stmt.name};"
    if isinstance(stmt, Call):
        return f"{stmt.receiver}.{stmt.method}({', '.join(stmt.args)});"
    raise TypeError(f"Unknown statement {stmt!r}")


def _method(method: MethodDecl) -> List[str]:
    lines = [INDENT + format_annotation(a) for a in method.annotations]
    header = f"{method.return_type} {method.name}({_params(method.params)})"
    if not method.body:
        return lines + [f"{INDENT}{header} {{}}"]
    lines.append(f"{INDENT}{header} {{")
    lines.extend(INDENT * 2 + format_stmt(s) for s in method.body)
    lines.append(INDENT + "}")
    return lines


def _class(cls: ClassDecl) -> List[str]:
    lines = [format_annotation(a) for a in cls.annotations]
    header = f"class {cls.name}"
    if cls.implements:
        header = f"{header} implements {cls.implements}"
    if not cls.fields and not cls.methods:
        return lines + [header + " {}"]

    lines.append(header + " {")
    for field in cls.fields:
        lines.extend(INDENT + format_annotation(a) for a in field.annotations)
        lines.append(f"{INDENT}{field.type} {field.name};")
    for i, method in enumerate(cls.methods):
        if i or cls.fields:
            lines.append("")
        lines.extend(_method(method))
    lines.append("}")
    return lines


def _interface(interface: InterfaceDecl) -> List[str]:
    if not interface.methods:
        return [f"interface {interface.name} {{}}"]
    lines = [f"interface {interface.name} {{"]
    lines.extend(
        f"{INDENT}{m.return_type} {m.name}({_params(m.params)});"
        for m in interface.methods
    )
    lines.append("}")
    return lines


def format_unit(unit: CompilationUnit) -> str:
    """
    Format a compilation unit as MiniSvc source

    Parameters
    ----------
    unit
        Compilation unit to format

    Returns
    -------
    str
        Source text with one blank line between declarations, terminated by a newline
        unless ``unit`` is empty
    """
    blocks = [_class(c) for c in unit.classes] + [_interface(i) for i in unit.interfaces]
    return "\n\n".join("\n".join(block) for block in blocks) + ("\n" if blocks else "")

"""
Recursive-descent parser of the MiniSvc language

Grammar::

    file          := (classDecl | interfaceDecl)* ;
    annotation    := '@' Ident ( '(' StringLit ')' )? ;
    classDecl     := annotation* 'class' Ident ('implements' Ident)? '{' member* '}' ;
    interfaceDecl := 'interface' Ident '{' methodSig* '}' ;
    methodSig     := Ident Ident '(' paramList? ')' ';' ;
    member        := fieldDecl | methodDecl ;
    fieldDecl     := annotation* Ident Ident ';' ;
    methodDecl    := annotation* Ident Ident '(' paramList? ')' '{' stmt* '}' ;
    paramList     := Ident Ident (',' Ident Ident)* ;
    stmt          := localDecl | call | construction ;
    localDecl     := Ident Ident ';' ;
    call          := Ident '.' Ident '(' argList? ')' ';' ;
    argList       := Ident (',' Ident)* ;
    construction  := 'new' Ident '(' ')' ';' ;
"""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple, Union

from purposegraph.errors import ParseError
from purposegraph.minisvc.lexer import tokenize
from purposegraph.minisvc.nodes import (
    Annotation,
    Call,
    ClassDecl,
    CompilationUnit,
    FieldDecl,
    InterfaceDecl,
    LocalDecl,
    MethodDecl,
    MethodSig,
    New,
    Param,
    Stmt,
)
from purposegraph.minisvc.tokens import Token, TokenKind

END_OF_INPUT = "end of input"


class _Parser:
    def __init__(self, tokens: Sequence[Token], path: str):
        self.tokens = tokens
        self.pos = 0
        self.path = path

    def peek(self, offset: int = 0) -> Optional[Token]:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def at(self, kind: TokenKind, offset: int = 0) -> bool:
        token = self.peek(offset)
        return token is not None and token.kind == kind

    def error(self, expected: str) -> ParseError:
        token = self.peek()
        if token is None:
            last = self.tokens[-1]
            return ParseError(expected, END_OF_INPUT, last.line, last.col, self.path)
        return ParseError(expected, token.describe(), token.line, token.col, self.path)

    def expect(self, kind: TokenKind, expected: str) -> Token:
        if not self.at(kind):
            raise self.error(expected)
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def match(self, kind: TokenKind) -> Optional[Token]:
        if self.at(kind):
            token = self.tokens[self.pos]
            self.pos += 1
            return token
        return None

    def parse_file(self) -> CompilationUnit:
        classes: List[ClassDecl] = []
        interfaces: List[InterfaceDecl] = []
        while self.peek() is not None:
            if self.at(TokenKind.KW_INTERFACE):
                interfaces.append(self.parse_interface())
            elif self.at(TokenKind.AT) or self.at(TokenKind.KW_CLASS):
                classes.append(self.parse_class())
            else:
                raise self.error("'class', 'interface' or annotation")
        return CompilationUnit(self.path, tuple(classes), tuple(interfaces))

    def parse_annotations(self) -> Tuple[Annotation, ...]:
        out = []
        while self.at(TokenKind.AT):
            at = self.expect(TokenKind.AT, "'@'")
            name = self.expect(TokenKind.IDENT, "annotation name")
            arg = None
            if self.match(TokenKind.LPAREN):
                arg = self.expect(TokenKind.STRING_LIT, "string literal").text
                self.expect(TokenKind.RPAREN, "')'")
            out.append(Annotation(name.text, arg, at.line, at.col))
        return tuple(out)

    def parse_class(self) -> ClassDecl:
        annotations = self.parse_annotations()
        keyword = self.expect(TokenKind.KW_CLASS, "'class'")
        start = annotations[0] if annotations else keyword
        name = self.expect(TokenKind.IDENT, "class name")
        implements = None
        if self.match(TokenKind.KW_IMPLEMENTS):
            implements = self.expect(TokenKind.IDENT, "interface name").text
        self.expect(TokenKind.LBRACE, "'{'")

        fields: List[FieldDecl] = []
        methods: List[MethodDecl] = []
        while not self.match(TokenKind.RBRACE):
            member = self.parse_member()
            if isinstance(member, FieldDecl):
                fields.append(member)
            else:
                methods.append(member)

        return ClassDecl(
            name=name.text,
            annotations=annotations,
            implements=implements,
            fields=tuple(fields),
            methods=tuple(methods),
            line=start.line,
            col=start.col,
        )

    def parse_member(self) -> Union[FieldDecl, MethodDecl]:
        annotations = self.parse_annotations()
        type_ = self.expect(
            TokenKind.IDENT, "member type" if annotations else "member type or '}'"
        )
        start = annotations[0] if annotations else type_
        name = self.expect(TokenKind.IDENT, "member name")
        if self.match(TokenKind.SEMI):
            return FieldDecl(type_.text, name.text, annotations, start.line, start.col)

        if not self.at(TokenKind.LPAREN):
            raise self.error("';' or '('")
        params = self.parse_params()
        self.expect(TokenKind.LBRACE, "'{'")
        body: List[Stmt] = []
        while not self.match(TokenKind.RBRACE):
            body.append(self.parse_stmt())

        return MethodDecl(
            return_type=type_.text,
            name=name.text,
            annotations=annotations,
            params=params,
            body=tuple(body),
            line=start.line,
            col=start.col,
        )

    def parse_params(self) -> Tuple[Param, ...]:
        self.expect(TokenKind.LPAREN, "'('")
        params: List[Param] = []
        if self.match(TokenKind.RPAREN):
            return ()
        while True:
            expected = "parameter" if params else "parameter or ')'"
            type_ = self.expect(TokenKind.IDENT, expected)
            name = self.expect(TokenKind.IDENT, "parameter name")
            params.append(Param(type_.text, name.text, type_.line, type_.col))
            if self.match(TokenKind.RPAREN):
                return tuple(params)
            self.expect(TokenKind.COMMA, "',' or ')'")

    def parse_stmt(self) -> Stmt:
        if self.at(TokenKind.KW_NEW):
            new = self.expect(TokenKind.KW_NEW, "'new'")
            cls = self.expect(TokenKind.IDENT, "class name")
            self.expect(TokenKind.LPAREN, "'('")
            self.expect(TokenKind.RPAREN, "')'")
            self.expect(TokenKind.SEMI, "';'")
            return New(cls.text, new.line, new.col)

        first = self.expect(TokenKind.IDENT, "statement or '}'")
        if self.match(TokenKind.DOT):
            method = self.expect(TokenKind.IDENT, "method name")
            self.expect(TokenKind.LPAREN, "'('")
            args: List[str] = []
            if not self.match(TokenKind.RPAREN):
                while True:
                    args.append(self.expect(TokenKind.IDENT, "argument").text)
                    if self.match(TokenKind.RPAREN):
                        break
                    self.expect(TokenKind.COMMA, "',' or ')'")
            self.expect(TokenKind.SEMI, "';'")
            return Call(first.text, method.text, tuple(args), first.line, first.col)

        if not self.at(TokenKind.IDENT):
            raise self.error("'.' or local variable name")
        name = self.expect(TokenKind.IDENT, "local variable name")
        self.expect(TokenKind.SEMI, "';'")
        return LocalDecl(first.text, name.text, first.line, first.col)

    def parse_interface(self) -> InterfaceDecl:
        start = self.expect(TokenKind.KW_INTERFACE, "'interface'")
        name = self.expect(TokenKind.IDENT, "interface name")
        self.expect(TokenKind.LBRACE, "'{'")
        methods = []
        while not self.match(TokenKind.RBRACE):
            type_ = self.expect(TokenKind.IDENT, "method signature or '}'")
            method = self.expect(TokenKind.IDENT, "method name")
            params = self.parse_params()
            self.expect(TokenKind.SEMI, "';'")
            methods.append(
                MethodSig(type_.text, method.text, params, type_.line, type_.col)
            )
        return InterfaceDecl(name.text, tuple(methods), start.line, start.col)


def parse(tokens: Sequence[Token], path: str = "<string>") -> CompilationUnit:
    """
    Parse a token stream

    Parameters
    ----------
    tokens
        Output of :func:`purposegraph.minisvc.lexer.tokenize`

    path
        Source file recorded on the compilation unit and in error messages

    Returns
    -------
    :class:`purposegraph.minisvc.nodes.CompilationUnit`

    Raises
    ------
    :class:`purposegraph.errors.ParseError`
        The first point where the tokens do not follow the grammar. At the end of the
        input the error is reported at the last token
    """
    return _Parser(tokens, path).parse_file()


def parse_source(text: str, path: str = "<string>") -> CompilationUnit:
    """
    Tokenise and parse MiniSvc source

    Raises
    ------
    :class:`purposegraph.errors.LexError`
        See :func:`purposegraph.minisvc.lexer.tokenize`

    :class:`purposegraph.errors.ParseError`
        See :func:`parse`
    """
    return parse(tokenize(text, path), path)

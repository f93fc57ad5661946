"""
Tokens of the MiniSvc language
"""
from __future__ import annotations

import enum
from dataclasses import dataclass


class TokenKind(enum.Enum):
    """
    Kind of a :class:`Token`
    """

    IDENT = "Ident"
    AT = "At"
    LBRACE = "LBrace"
    RBRACE = "RBrace"
    LPAREN = "LParen"
    RPAREN = "RParen"
    SEMI = "Semi"
    COMMA = "Comma"
    DOT = "Dot"
    STRING_LIT = "StringLit"
    KW_CLASS = "KwClass"
    KW_INTERFACE = "KwInterface"
    KW_IMPLEMENTS = "KwImplements"
    KW_NEW = "KwNew"


KEYWORDS = {
    "class": TokenKind.KW_CLASS,
    "interface": TokenKind.KW_INTERFACE,
    "implements": TokenKind.KW_IMPLEMENTS,
    "new": TokenKind.KW_NEW,
}

PUNCTUATION = {
    "@": TokenKind.AT,
    "{": TokenKind.LBRACE,
    "}": TokenKind.RBRACE,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    ";": TokenKind.SEMI,
    ",": TokenKind.COMMA,
    ".": TokenKind.DOT,
}


@dataclass(frozen=True)
class Token:
    """
    A lexed token

    For string literals ``text`` holds the unescaped value, without quotes. ``line``
    and ``col`` are 1-based and point at the first character of the token.
    """

    kind: TokenKind
    text: str
    line: int
    col: int

    def describe(self) -> str:
        """
        Human-readable description used in parse errors
        """
        if self.kind == TokenKind.IDENT:
            return f"identifier '{self.text}'"
        if self.kind == TokenKind.STRING_LIT:
            return f"string {self.text!r}"
        return f"'{self.text}'"

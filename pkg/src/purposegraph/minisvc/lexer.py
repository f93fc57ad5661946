"""
Lexer of the MiniSvc language
"""
from __future__ import annotations

import re
from typing import List, Optional

from purposegraph.errors import LexError
from purposegraph.minisvc.tokens import KEYWORDS, PUNCTUATION, Token, TokenKind

_WHITESPACE = re.compile(r"[ \t\r\n]+")
_COMMENT = re.compile(r"//[^\n]*")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_STRING = re.compile(r'"((?:[^"\\\n]|\\[^\n])*)"')
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


def _unescape(raw: str, line: int, col: int, path: Optional[str]) -> str:
    out = []
    i = 0
    while i < len(raw):
        char = raw[i]
        if char == "\\":
            escaped = raw[i + 1]
            if escaped not in _ESCAPES:
                # +1 for the opening quote
                raise LexError(line, col + 1 + i, char, path)
            out.append(_ESCAPES[escaped])
            i += 2
        else:
            out.append(char)
            i += 1
    return "".join(out)


def tokenize(text: str, path: Optional[str] = None) -> List[Token]:
    """
    Split MiniSvc source into tokens

    Lexing is longest-match. Whitespace and ``//`` line comments are skipped.
    Identifiers are ASCII. String literals are delimited by double quotes, may not
    span lines and support the escapes ``\\"``, ``\\\\``, ``\\n`` and ``\\t``.

    Parameters
    ----------
    text
        Source text

    path
        Source file, only used in error messages

    Returns
    -------
    list of :class:`purposegraph.minisvc.tokens.Token`

    Raises
    ------
    :class:`purposegraph.errors.LexError`
        ``text`` contains a character which does not start a token. Unterminated
        string literals are reported at their opening quote
    """
    tokens = []
    pos = 0
    line = 1
    line_start = 0

    while pos < len(text):
        col = pos - line_start + 1

        match = _WHITESPACE.match(text, pos) or _COMMENT.match(text, pos)
        if match:
            chunk = match.group()
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                line_start = pos + chunk.rindex("\n") + 1
            pos = match.end()
            continue

        char = text[pos]
        if char in PUNCTUATION:
            tokens.append(Token(PUNCTUATION[char], char, line, col))
            pos += 1
            continue

        match = _IDENT.match(text, pos)
        if match:
            word = match.group()
            tokens.append(Token(KEYWORDS.get(word, TokenKind.IDENT), word, line, col))
            pos = match.end()
            continue

        match = _STRING.match(text, pos)
        if match:
            value = _unescape(match.group(1), line, col, path)
            tokens.append(Token(TokenKind.STRING_LIT, value, line, col))
            pos = match.end()
            continue

        raise LexError(line, col, char, path)

    return tokens

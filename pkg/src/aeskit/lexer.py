"""Tokenizers for the two supported source dialects.

`arduino` covers C/C++-style sketches: line and block comments, include
directives, string/char literals, numbers, identifiers. `scl` covers the
Pascal-like structured control language: (* *) and // comments, quoted
strings, numbers, identifiers (keywords are case-insensitive).

Lexing is total: any byte that matches nothing becomes a one-character
punct token. Comment tokens carry the body verbatim, without delimiters.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class TokenKind(str, Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    NUMBER = "number"
    STRING_LITERAL = "string_literal"
    COMMENT_TEXT = "comment_text"
    INCLUDE_TARGET = "include_target"
    PUNCT = "punct"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int


TokenStream = list[Token]

ARDUINO_KEYWORDS = frozenset("""
    alignas alignof and and_eq asm auto bitand bitor bool break case catch
    char char16_t char32_t class compl const constexpr const_cast continue
    decltype default delete do double dynamic_cast else enum explicit export
    extern false float for friend goto if inline int long mutable namespace
    new noexcept not not_eq nullptr operator or or_eq private protected
    public register reinterpret_cast return short signed sizeof static
    static_assert static_cast struct switch template this thread_local throw
    true try typedef typeid typename union unsigned using virtual void
    volatile wchar_t while xor xor_eq
""".split())

SCL_KEYWORDS = frozenset("""
    AND ARRAY AT BEGIN BOOL BY BYTE CASE CONST CONSTANT DINT DO DWORD ELSE
    ELSIF END_CASE END_CONST END_FOR END_FUNCTION END_FUNCTION_BLOCK END_IF
    END_ORGANIZATION_BLOCK END_REPEAT END_STRUCT END_TYPE END_VAR END_WHILE
    EXIT FALSE FOR FUNCTION FUNCTION_BLOCK GOTO IF INT LABEL LREAL MOD NOT
    OF OR ORGANIZATION_BLOCK REAL REPEAT RETURN SINT STRING STRUCT THEN TIME
    TO TRUE TYPE UDINT UINT UNTIL USINT VAR VAR_INPUT VAR_IN_OUT VAR_OUTPUT
    VAR_TEMP VOID WHILE WORD XOR
""".split())

_NUMBER = r"""
    0[xX][0-9a-fA-F]+[uUlL]*
  | 0[bB][01]+[uUlL]*
  | (?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?[uUlLfF]*
"""

_ARDUINO_PATTERN = re.compile(
    rf"""
    (?P<comment>//[^\n]*|/\*.*?\*/|/\*.*)
  | (?P<include>\#\s*include\s*(?:<[^>\n]*>|"[^"\n]*"))
  | (?P<string>"(?:\\.|[^"\\\n])*"|'(?:\\.|[^'\\\n])*')
  | (?P<number>{_NUMBER})
  | (?P<ident>[A-Za-z_]\w*)
    """,
    re.VERBOSE | re.DOTALL,
)

_SCL_PATTERN = re.compile(
    rf"""
    (?P<comment>//[^\n]*|\(\*.*?\*\)|\(\*.*)
  | (?P<string>'[^'\n]*'?)
  | (?P<number>{_NUMBER})
  | (?P<ident>[A-Za-z_]\w*)
    """,
    re.VERBOSE | re.DOTALL,
)

_INCLUDE_TARGET = re.compile(r'[<"]([^>"\n]*)[>"]')


def _comment_body(text: str) -> str:
    if text.startswith("//"):
        return text[2:]
    if text.startswith("/*"):
        return text[2:-2] if text.endswith("*/") else text[2:]
    if text.startswith("(*"):
        return text[2:-2] if text.endswith("*)") else text[2:]
    return text


def lex_source(text: str, dialect: str) -> TokenStream:
    """Tokenize `text`. Total: never raises on any input string."""
    if dialect == "arduino":
        pattern, keywords, fold = _ARDUINO_PATTERN, ARDUINO_KEYWORDS, False
    elif dialect == "scl":
        pattern, keywords, fold = _SCL_PATTERN, SCL_KEYWORDS, True
    else:
        raise ValueError(f"unknown dialect {dialect!r}")

    tokens: TokenStream = []
    pos = 0
    line = 1
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch == "\n":
            line += 1
            pos += 1
            continue
        if ch in " \t\r\f\v":
            pos += 1
            continue
        m = pattern.match(text, pos)
        if m is None:
            tokens.append(Token(TokenKind.PUNCT, ch, line))
            pos += 1
            continue
        group = m.lastgroup
        raw = m.group()
        if group == "comment":
            tokens.append(Token(TokenKind.COMMENT_TEXT, _comment_body(raw), line))
        elif group == "include":
            target = _INCLUDE_TARGET.search(raw)
            tokens.append(
                Token(TokenKind.INCLUDE_TARGET, target.group(1) if target else "", line)
            )
        elif group == "string":
            tokens.append(Token(TokenKind.STRING_LITERAL, raw, line))
        elif group == "number":
            tokens.append(Token(TokenKind.NUMBER, raw, line))
        else:
            key = raw.upper() if fold else raw
            kind = TokenKind.KEYWORD if key in keywords else TokenKind.IDENTIFIER
            tokens.append(Token(kind, raw, line))
        line += raw.count("\n")
        pos = m.end()
    return tokens

"""Feature channels extracted from a document, and channel selection.

Each document yields a FeatureBundle with one list of strings per channel.
Channel availability depends on the dialect: scl function blocks have no
includes and no project metadata, so those channels stay empty and asking
for them raises ChannelUnavailable.

For scl, the category marker line `FAMILY: X` inside comments supplies the
document label (when not already set) and is stripped from every channel.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .corpus import CodeDocument
from .errors import ChannelUnavailable
from .lexer import TokenKind, lex_source

CHANNELS = (
    "includes", "functions", "comments", "tokens", "code",
    "tags", "title", "description",
)
ARDUINO_ONLY_CHANNELS = frozenset({"includes", "tags", "title", "description"})

_FAMILY_MARKER = re.compile(r"FAMILY\s*:")
_FAMILY_LABEL = re.compile(r"FAMILY\s*:\s*([A-Za-z0-9_]+)")


@dataclass
class FeatureBundle:
    dialect: str
    includes: list[str] = field(default_factory=list)
    functions: list[str] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)
    tokens: list[str] = field(default_factory=list)
    code: list[str] = field(default_factory=list)
    loc: int = 0
    tags: list[str] = field(default_factory=list)
    title_tokens: list[str] = field(default_factory=list)
    description_tokens: list[str] = field(default_factory=list)
    label: str | None = None  # populated from FAMILY line for scl

    def channel(self, name: str) -> list[str]:
        if name == "title":
            return self.title_tokens
        if name == "description":
            return self.description_tokens
        return getattr(self, name)


@dataclass(frozen=True)
class FeatureSetSpec:
    """Ordered choice of channels to concatenate into one token sequence."""

    channels: tuple[str, ...]

    def __post_init__(self):
        if not self.channels:
            raise ValueError("feature set must name at least one channel")
        if len(set(self.channels)) != len(self.channels):
            raise ValueError("duplicate channels in feature set")
        for ch in self.channels:
            if ch not in CHANNELS:
                raise ValueError(f"unknown channel {ch!r}")

    @classmethod
    def parse(cls, text: str) -> "FeatureSetSpec":
        return cls(tuple(c.strip() for c in text.split(",") if c.strip()))


def _strip_family_lines(body: str) -> str:
    kept = [ln for ln in body.split("\n") if not _FAMILY_MARKER.search(ln)]
    return "\n".join(kept)


def extract_features(doc: CodeDocument) -> FeatureBundle:
    """Lex all sources of `doc` and split tokens into feature channels.

    Pure function of the document: same input, same bundle.
    """
    bundle = FeatureBundle(dialect=doc.dialect)
    seen_functions: set[str] = set()
    comment_bodies: list[str] = []

    for _, text in doc.sources:
        stream = lex_source(text, doc.dialect)
        # code view with comments dropped, so `name ( ` detection is not
        # broken by a comment between the name and the parenthesis
        code_stream = [t for t in stream if t.kind != TokenKind.COMMENT_TEXT]
        for i, tok in enumerate(code_stream):
            if tok.kind == TokenKind.INCLUDE_TARGET:
                bundle.includes.append(tok.text)
            elif tok.kind in (TokenKind.IDENTIFIER, TokenKind.KEYWORD):
                bundle.tokens.append(tok.text)
                bundle.code.append(tok.text)
                if (
                    tok.kind == TokenKind.IDENTIFIER
                    and i + 1 < len(code_stream)
                    and code_stream[i + 1].kind == TokenKind.PUNCT
                    and code_stream[i + 1].text == "("
                    and tok.text not in seen_functions
                ):
                    seen_functions.add(tok.text)
                    bundle.functions.append(tok.text)
            elif tok.kind in (TokenKind.NUMBER, TokenKind.STRING_LITERAL):
                bundle.tokens.append(tok.text)
        for tok in stream:
            if tok.kind == TokenKind.COMMENT_TEXT:
                comment_bodies.append(tok.text)
        bundle.loc += sum(1 for ln in text.split("\n") if ln.strip())

    if doc.dialect == "scl":
        family = None
        for body in comment_bodies:
            m = _FAMILY_LABEL.search(body)
            if m and family is None:
                family = m.group(1)
        comment_bodies = [_strip_family_lines(b) for b in comment_bodies]
        bundle.label = doc.label if doc.label is not None else family
    else:
        bundle.label = doc.label
        bundle.tags = list(doc.tags)
        if doc.title:
            bundle.title_tokens = doc.title.split()
        if doc.description:
            bundle.description_tokens = doc.description.split()

    for body in comment_bodies:
        bundle.comments.extend(body.split())
    return bundle


def select_features(bundle: FeatureBundle, spec: FeatureSetSpec) -> list[str]:
    """Concatenate the requested channels, lowercased, in spec order."""
    out: list[str] = []
    for name in spec.channels:
        if bundle.dialect == "scl" and name in ARDUINO_ONLY_CHANNELS:
            raise ChannelUnavailable(name, bundle.dialect)
        out.extend(tok.lower() for tok in bundle.channel(name))
    return out

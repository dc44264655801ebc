"""Deterministic, offset-preserving sentence splitting and word tokenization.

Both operations are pure rule-based passes over codepoints so that identical
input always yields identical spans, with no model or locale dependence.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from .corpusio import Document

# Clinical abbreviations (Spanish/French) that suppress a sentence split when
# they immediately precede the period.
DEFAULT_ABBREVIATIONS = (
    "Dr.", "Dra.", "Dres.", "Pr.", "Prof.", "Mme.", "Mlle.", "M.", "MM.",
    "Sr.", "Sra.", "Srta.", "D.", "Dña.", "St.", "Ste.",
    "approx.", "env.", "cf.", "ej.", "p.ej.", "etc.", "vs.", "resp.",
    "fig.", "Fig.", "ref.", "Ref.", "tab.", "Tab.", "no.", "No.", "núm.",
    "máx.", "mín.", "max.", "min.", "mg.", "ml.", "cm.", "mm.", "kg.",
    "art.", "cap.", "vol.", "pág.", "p.",
)

_TERMINATORS = frozenset(".!?…")
_APOSTROPHES = frozenset("'’")


@dataclass(frozen=True)
class Sentence:
    """A half-open codepoint span of one sentence within a document."""

    index: int
    start: int
    end: int


@dataclass(frozen=True)
class Token:
    """A half-open codepoint span of one token within a sentence."""

    sent_index: int
    index_in_sentence: int
    start: int
    end: int
    surface: str


def load_abbreviations(path: str) -> frozenset[str]:
    """Load an abbreviation list: one per line, ``#`` comments allowed."""
    abbrevs = set()
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#"):
                abbrevs.add(line)
    return frozenset(abbrevs)


def _ends_with_abbreviation(text: str, dot_pos: int, abbrevs: frozenset[str]) -> bool:
    # The candidate abbreviation is the maximal non-whitespace run ending at
    # the terminator (inclusive), e.g. "Dr." or "p.ej.".
    i = dot_pos
    while i > 0 and not text[i - 1].isspace():
        i -= 1
    return text[i : dot_pos + 1] in abbrevs


def split_sentences(
    doc: Document, abbreviations: frozenset[str] | None = None
) -> list[Sentence]:
    """Split a document into sentences.

    Splits after {. ! ? …} followed by whitespace and an uppercase letter or
    digit, with hard breaks on blank lines; abbreviations from the exception
    list never end a sentence. Every non-whitespace codepoint falls in exactly
    one sentence.
    """
    if abbreviations is None:
        abbreviations = frozenset(DEFAULT_ABBREVIATIONS)
    text = doc.text
    n = len(text)
    boundaries: list[int] = []  # positions where a new sentence may begin
    i = 0
    while i < n:
        ch = text[i]
        if ch in _TERMINATORS:
            # Look ahead: whitespace then uppercase or digit starts a new sentence.
            j = i + 1
            while j < n and text[j].isspace():
                j += 1
            nxt = text[j] if j < n else ""
            if (
                j > i + 1
                and (nxt.isupper() or nxt.isdigit())
                and not (ch == "." and _ends_with_abbreviation(text, i, abbreviations))
            ):
                boundaries.append(i + 1)
        elif ch == "\n":
            # Blank line (two newlines with only spaces between) is a hard break.
            j = i + 1
            while j < n and text[j].isspace() and text[j] != "\n":
                j += 1
            if j < n and text[j] == "\n":
                boundaries.append(i)
        i += 1

    sentences: list[Sentence] = []
    cursor = 0
    for boundary in boundaries + [n]:
        if boundary < cursor:
            continue
        start = cursor
        while start < boundary and text[start].isspace():
            start += 1
        end = boundary
        while end > start and text[end - 1].isspace():
            end -= 1
        if start < end:
            sentences.append(Sentence(len(sentences), start, end))
        cursor = boundary
    return sentences


def _is_word_char(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("L", "N", "M")


def tokenize(doc: Document, sent: Sentence) -> list[Token]:
    """Tokenize one sentence into word and punctuation tokens.

    Maximal runs of letters/digits/combining marks form word tokens; internal
    hyphens stay inside a token, as do , and . flanked by digits ("1,5");
    apostrophes end a token so French clitics split ("l'hépatite" -> "l'",
    "hépatite"); every other punctuation mark is its own token.
    """
    text = doc.text
    tokens: list[Token] = []
    i = sent.start
    while i < sent.end:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        start = i
        if _is_word_char(ch):
            i += 1
            while i < sent.end:
                c = text[i]
                if _is_word_char(c):
                    i += 1
                elif (
                    c == "-"
                    and i + 1 < sent.end
                    and _is_word_char(text[i + 1])
                ):
                    i += 1
                elif (
                    c in ",."
                    and text[i - 1].isdigit()
                    and i + 1 < sent.end
                    and text[i + 1].isdigit()
                ):
                    i += 1
                elif c in _APOSTROPHES:
                    i += 1  # clitic boundary: apostrophe closes this token
                    break
                else:
                    break
        else:
            i += 1  # single-codepoint punctuation token
        tokens.append(Token(sent.index, len(tokens), start, i, text[start:i]))
    return tokens


def tokenize_text(text: str) -> list[Token]:
    """Tokenize a bare string as a single pseudo-sentence (offsets local)."""
    doc = Document("_", text)
    return tokenize(doc, Sentence(0, 0, len(text)))

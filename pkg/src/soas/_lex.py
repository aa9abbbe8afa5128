"""Tokeniser shared by the spec, term and proof-script readers."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass

from .errors import SoasError

PUNCT = set("()[],.;")
QUOTES = {"'": "'", "‘": "’"}

# ASCII spellings accepted for the paper's Unicode symbols.
ALIASES = {
    "=>": "↣",
    "|>": "▷",
    "|-": "⊢",
    "~": "≈",
    "→": "->",
    "⁎": "*",
}

# Symbol characters that may still appear inside names (the hole marker).
NAME_SYMBOLS = set("∘⬚")

_COMMENT = re.compile(r"(^|\s)--(\s.*)?$")


@dataclass(frozen=True)
class Token:
    kind: str  # NAME | NUM | SYM | PUNCT | QUOTED | EOF
    text: str
    line: int
    col: int

    @property
    def pos(self):
        return (self.line, self.col)

    def __repr__(self):
        return f"{self.kind}({self.text!r}@{self.line}:{self.col})"


def strip_comment(line):
    return _COMMENT.sub(r"\1", line).rstrip()


def is_name_start(ch):
    return ch == "_" or ch in NAME_SYMBOLS or unicodedata.category(ch).startswith("L")


def is_name_char(ch):
    if ch in ("_", "'") or ch in NAME_SYMBOLS:
        return True
    cat = unicodedata.category(ch)
    return cat.startswith("L") or cat.startswith("N") or cat == "Mn" or cat == "Lm"


def is_sym_char(ch):
    if ch.isspace() or ch in PUNCT or ch in QUOTES or ch in "’":
        return False
    return not is_name_char(ch)


def tokenize(text, line=1, col=1, error=SoasError):
    """Split ``text`` into tokens; ``line``/``col`` give the origin of ``text``."""
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if text.startswith("--", i) and (i + 2 >= n or text[i + 2].isspace()) and (
            i == 0 or text[i - 1].isspace()
        ):
            while i < n and text[i] != "\n":
                i += 1
            continue
        j = i
        if ch in PUNCT:
            kind, j = "PUNCT", i + 1
        elif ch in QUOTES:
            close = QUOTES[ch]
            j = text.find(close, i + 1)
            if j < 0 or "\n" in text[i:j]:
                raise error("unterminated quotation", kind="lexical-error", pos=(line, col))
            toks.append(Token("QUOTED", text[i + 1:j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        elif ch.isdigit():
            while j < n and text[j].isdigit():
                j += 1
            kind = "NUM"
            if j < n and is_name_char(text[j]) and not text[j].isdigit():
                while j < n and is_name_char(text[j]):
                    j += 1
                kind = "NAME"
        elif is_name_start(ch):
            while j < n and is_name_char(text[j]):
                j += 1
            kind = "NAME"
        elif is_sym_char(ch):
            while j < n and is_sym_char(text[j]):
                j += 1
            kind = "SYM"
        else:
            raise error(f"unexpected character {ch!r}", kind="lexical-error", pos=(line, col))
        word = text[i:j]
        if kind == "SYM":
            word = ALIASES.get(word, word)
        toks.append(Token(kind, word, line, col))
        col += j - i
        i = j
    toks.append(Token("EOF", "", line, col))
    return toks


class TokenStream:
    """Cursor over a token list with the usual peek/expect helpers."""

    def __init__(self, toks, error=SoasError):
        self.toks = toks
        self.i = 0
        self.error = error

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def at(self, text, kind=None):
        t = self.tok
        return t.text == text and (kind is None or t.kind == kind) and t.kind != "EOF"

    def accept(self, text):
        if self.at(text):
            return self.next()
        return None

    def expect(self, text):
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.describe(self.tok)}")
        return self.next()

    def expect_kind(self, *kinds):
        if self.tok.kind not in kinds:
            self.fail(f"expected {' or '.join(k.lower() for k in kinds)}, found {self.describe(self.tok)}")
        return self.next()

    def at_eof(self):
        return self.tok.kind == "EOF"

    @staticmethod
    def describe(t):
        return "end of input" if t.kind == "EOF" else repr(t.text)

    def fail(self, message, tok=None, kind="parse-error"):
        tok = tok or self.tok
        raise self.error(message, kind=kind, pos=tok.pos)

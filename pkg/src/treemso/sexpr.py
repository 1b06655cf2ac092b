"""Minimal S-expression reader/writer used by all text formats.

Values are nested Python lists of atoms.  Atoms are ints, plain symbols
(str) or keywords (`Keyword`, written ``:name``).  The reader tracks
line/column positions so format errors can point at the offending token.
"""

from dataclasses import dataclass

from .errors import FormulaSyntaxError


@dataclass(frozen=True)
class Keyword:
    name: str

    def __repr__(self):
        return f":{self.name}"


class _Token:
    __slots__ = ("text", "line", "col")

    def __init__(self, text, line, col):
        self.text = text
        self.line = line
        self.col = col

    @property
    def pos(self):
        return (self.line, self.col)


def tokenize(text):
    tokens = []
    line, col = 1, 0
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 0
            i += 1
        elif c in " \t\r":
            col += 1
            i += 1
        elif c == ";":  # comment to end of line
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            tokens.append(_Token(c, line, col))
            col += 1
            i += 1
        else:
            j = i
            while j < n and text[j] not in " \t\r\n();":
                j += 1
            tokens.append(_Token(text[i:j], line, col))
            col += j - i
            i = j
    return tokens


def _atom(tok):
    t = tok.text
    if t.startswith(":"):
        return Keyword(t[1:])
    try:
        return int(t)
    except ValueError:
        return t


def parse(text):
    """Parse a single S-expression; trailing junk is an error."""
    forms, rest = _parse_many(tokenize(text))
    if rest:
        raise FormulaSyntaxError("trailing input", rest[0].pos)
    if len(forms) != 1:
        raise FormulaSyntaxError("expected exactly one expression")
    return forms[0]


def parse_all(text):
    forms, rest = _parse_many(tokenize(text))
    assert not rest
    return forms


def _parse_many(tokens):
    forms = []
    stack = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.text == "(":
            stack.append([])
        elif tok.text == ")":
            if not stack:
                raise FormulaSyntaxError("unbalanced ')'", tok.pos)
            done = stack.pop()
            if stack:
                stack[-1].append(done)
            else:
                forms.append(done)
        else:
            value = _atom(tok)
            if stack:
                stack[-1].append(value)
            else:
                forms.append(value)
        i += 1
    if stack:
        raise FormulaSyntaxError("unbalanced '('", tokens[-1].pos)
    return forms, []


def unparse(value):
    if isinstance(value, list):
        return "(" + " ".join(unparse(v) for v in value) + ")"
    if isinstance(value, Keyword):
        return f":{value.name}"
    return str(value)


def pretty(value, width=100):
    """One level of wrapping: top-level list items on their own lines."""
    flat = unparse(value)
    if len(flat) <= width or not isinstance(value, list):
        return flat
    head = []
    body = []
    for item in value:
        if isinstance(item, list):
            body.append(item)
        elif body:
            body.append(item)
        else:
            head.append(item)
    lines = ["(" + " ".join(unparse(h) for h in head)]
    for item in body:
        lines.append("  " + unparse(item))
    return "\n".join(lines) + ")"

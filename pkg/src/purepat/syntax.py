"""Concrete syntax shared by both term families.

Grammar (whitespace insignificant, `--` comments to end of line):

    term  := app
    app   := atom+                         -- left-associative application
    atom  := SYM | '^' SYM                 -- named variable / matchable
           | INT '.' INT | '^' INT '.' INT -- indexed variable / matchable
           | '(' term ')' | abs
    abs   := '\\[' SYM (',' SYM)* ']' term '.' term    -- named
           | '\\[' ']' term '.' term                   -- empty binder list
           | '\\{' INT '}' term '.' term               -- indexed

An abstraction body extends maximally to the right.  Index components are
written without spaces (`1.2`); a lone `.` separates pattern from body.
Named and indexed atoms may not be mixed in one term.
"""
from __future__ import annotations

import json

from . import indexed, named
from .core import DuplicateBinder, ParseError

_SYM_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
_SYM_CONT = _SYM_START | set("0123456789_'")


class _Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col

    def __repr__(self):
        return f"{self.kind}({self.value!r})@{self.line}:{self.col}"


def tokenize(src: str) -> list[_Token]:
    toks: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "-" and i + 1 < n and src[i + 1] == "-":
            while i < n and src[i] != "\n":
                i += 1
            continue
        start_col = col
        if c in _SYM_START:
            j = i
            while j < n and src[j] in _SYM_CONT:
                j += 1
            toks.append(_Token("SYM", src[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            # a contiguous INT '.' INT is one bidimensional index token
            if j + 1 < n and src[j] == "." and src[j + 1].isdigit():
                k = j + 1
                while k < n and src[k].isdigit():
                    k += 1
                toks.append(_Token("INDEX",
                                   (int(src[i:j]), int(src[j + 1:k])),
                                   line, start_col))
                col += k - i
                i = k
            else:
                toks.append(_Token("INT", int(src[i:j]), line, start_col))
                col += j - i
                i = j
            continue
        if c == "\\":
            if i + 1 < n and src[i + 1] == "[":
                toks.append(_Token("LAMNAMED", "\\[", line, start_col))
                i += 2
                col += 2
                continue
            if i + 1 < n and src[i + 1] == "{":
                toks.append(_Token("LAMIDX", "\\{", line, start_col))
                i += 2
                col += 2
                continue
            raise ParseError("stray backslash", line, start_col,
                             expected=("\\[", "\\{"))
        simple = {"^": "HAT", "(": "LPAREN", ")": "RPAREN", ".": "DOT",
                  ",": "COMMA", "]": "RBRACKET", "}": "RBRACE"}
        if c in simple:
            toks.append(_Token(simple[c], c, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {c!r}", line, start_col)
    toks.append(_Token("EOF", None, line, col))
    return toks


_ATOM_STARTS = ("SYM", "INDEX", "HAT", "LPAREN", "LAMNAMED", "LAMIDX")


class _Parser:
    def __init__(self, toks: list[_Token], side: str | None):
        self.toks = toks
        self.pos = 0
        self.side = side  # 'named' | 'indexed' | None (inferred)

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def take(self) -> _Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"unexpected {tok.kind}", tok.line, tok.col,
                             expected=(kind,))
        return self.take()

    def note_side(self, side: str, tok: _Token):
        if self.side is None:
            self.side = side
        elif self.side != side:
            raise ParseError(f"{side} syntax is not allowed in a "
                             f"{self.side} term", tok.line, tok.col)

    def parse_term(self):
        tok = self.peek()
        if tok.kind not in _ATOM_STARTS:
            raise ParseError(f"unexpected {tok.kind}", tok.line, tok.col,
                             expected=_ATOM_STARTS)
        t = self.parse_atom()
        while self.peek().kind in _ATOM_STARTS:
            arg = self.parse_atom()
            t = (named.App(t, arg) if self.side == "named"
                 else indexed.App(t, arg))
        return t

    def parse_atom(self):
        tok = self.take()
        if tok.kind == "SYM":
            self.note_side("named", tok)
            return named.Var(tok.value)
        if tok.kind == "INDEX":
            self.note_side("indexed", tok)
            i, j = tok.value
            if i < 1 or j < 1:
                raise ParseError("index components must be >= 1",
                                 tok.line, tok.col)
            return indexed.VarIdx(i, j)
        if tok.kind == "HAT":
            inner = self.take()
            if inner.kind == "SYM":
                self.note_side("named", inner)
                return named.Matchable(inner.value)
            if inner.kind == "INDEX":
                self.note_side("indexed", inner)
                i, j = inner.value
                if i < 1 or j < 1:
                    raise ParseError("index components must be >= 1",
                                     inner.line, inner.col)
                return indexed.MatchIdx(i, j)
            raise ParseError(f"unexpected {inner.kind} after '^'",
                             inner.line, inner.col, expected=("SYM", "INDEX"))
        if tok.kind == "LPAREN":
            t = self.parse_term()
            self.expect("RPAREN")
            return t
        if tok.kind == "LAMNAMED":
            self.note_side("named", tok)
            theta: list[str] = []
            if self.peek().kind != "RBRACKET":
                theta.append(self.expect("SYM").value)
                while self.peek().kind == "COMMA":
                    self.take()
                    theta.append(self.expect("SYM").value)
            if len(set(theta)) != len(theta):
                raise DuplicateBinder("duplicate symbol in binder list",
                                      tok.line, tok.col)
            self.expect("RBRACKET")
            pattern = self.parse_term()
            self.expect("DOT")
            body = self.parse_term()
            return named.Abs(tuple(theta), pattern, body)
        if tok.kind == "LAMIDX":
            self.note_side("indexed", tok)
            arity_tok = self.peek()
            if arity_tok.kind != "INT":
                raise ParseError(f"unexpected {arity_tok.kind}",
                                 arity_tok.line, arity_tok.col,
                                 expected=("INT",))
            arity = self.take().value
            self.expect("RBRACE")
            pattern = self.parse_term()
            self.expect("DOT")
            body = self.parse_term()
            return indexed.Abs(arity, pattern, body)
        raise ParseError(f"unexpected {tok.kind}", tok.line, tok.col,
                         expected=_ATOM_STARTS)


def parse(src: str, side: str | None = None):
    """Parse one term.  side may be 'named', 'indexed', or None to infer."""
    if side not in (None, "named", "indexed"):
        raise ValueError(f"unknown side {side!r}")
    p = _Parser(tokenize(src), side)
    t = p.parse_term()
    tok = p.peek()
    if tok.kind != "EOF":
        raise ParseError(f"unexpected {tok.kind} after term", tok.line, tok.col,
                         expected=("EOF",))
    return t


def parse_named(src: str) -> named.Term:
    return parse(src, "named")


def parse_indexed(src: str) -> indexed.Term:
    return parse(src, "indexed")


def term_side(t) -> str:
    if isinstance(t, (named.Var, named.Matchable, named.Abs)):
        return "named"
    if isinstance(t, (indexed.VarIdx, indexed.MatchIdx, indexed.Abs)):
        return "indexed"
    if isinstance(t, (named.App, indexed.App)):
        return term_side(t.fun)
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# Printing with minimal parentheses.  Context levels: 0 top/pattern/body,
# 1 function position, 2 argument position.  Abstractions need parentheses
# whenever applied (their body extends maximally right), applications only in
# argument position.


def unparse(t) -> str:
    return _pp(t, 0)


def _pp(t, level: int) -> str:
    match t:
        case named.Var(x):
            return x
        case named.Matchable(x):
            return f"^{x}"
        case indexed.VarIdx(i, j):
            return f"{i}.{j}"
        case indexed.MatchIdx(i, j):
            return f"^{i}.{j}"
        case named.App(f, a) | indexed.App(f, a):
            s = f"{_pp(f, 1)} {_pp(a, 2)}"
            return f"({s})" if level > 1 else s
        case named.Abs(theta, p, b):
            s = f"\\[{','.join(theta)}] {_pp(p, 0)} . {_pp(b, 0)}"
            return f"({s})" if level > 0 else s
        case indexed.Abs(n, p, b):
            s = f"\\{{{n}}} {_pp(p, 0)} . {_pp(b, 0)}"
            return f"({s})" if level > 0 else s
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# JSON AST export/import.  One schema for both sides; named abstractions
# carry "theta", indexed ones carry "arity".


def to_json(t) -> dict:
    match t:
        case named.Var(x):
            return {"kind": "var", "name": x}
        case named.Matchable(x):
            return {"kind": "match", "name": x}
        case indexed.VarIdx(i, j):
            return {"kind": "varidx", "i": i, "j": j}
        case indexed.MatchIdx(i, j):
            return {"kind": "matchidx", "i": i, "j": j}
        case named.App(f, a) | indexed.App(f, a):
            return {"kind": "app", "fun": to_json(f), "arg": to_json(a)}
        case named.Abs(theta, p, b):
            return {"kind": "abs", "theta": list(theta),
                    "pattern": to_json(p), "body": to_json(b)}
        case indexed.Abs(n, p, b):
            return {"kind": "abs", "arity": n,
                    "pattern": to_json(p), "body": to_json(b)}
    raise TypeError(f"not a term: {t!r}")


def from_json(obj):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError(f"not a term object: {obj!r}")
    kind = obj["kind"]
    if kind == "var":
        return named.Var(obj["name"])
    if kind == "match":
        return named.Matchable(obj["name"])
    if kind == "varidx":
        return indexed.VarIdx(obj["i"], obj["j"])
    if kind == "matchidx":
        return indexed.MatchIdx(obj["i"], obj["j"])
    if kind == "app":
        fun = from_json(obj["fun"])
        arg = from_json(obj["arg"])
        if term_side(fun) != term_side(arg):
            raise ValueError("application mixes named and indexed subterms")
        return (named.App(fun, arg) if term_side(fun) == "named"
                else indexed.App(fun, arg))
    if kind == "abs":
        pattern = from_json(obj["pattern"])
        body = from_json(obj["body"])
        if "theta" in obj:
            theta = tuple(obj["theta"])
            if len(set(theta)) != len(theta):
                raise ValueError("duplicate symbol in binder list")
            if term_side(pattern) != "named" or term_side(body) != "named":
                raise ValueError("named abstraction over indexed subterms")
            return named.Abs(theta, pattern, body)
        if "arity" in obj:
            if term_side(pattern) != "indexed" or term_side(body) != "indexed":
                raise ValueError("indexed abstraction over named subterms")
            return indexed.Abs(int(obj["arity"]), pattern, body)
        raise ValueError("abs object needs either theta or arity")
    raise ValueError(f"unknown kind {kind!r}")


def dumps(t, **kwargs) -> str:
    return json.dumps(to_json(t), sort_keys=True, **kwargs)


def loads(text: str):
    return from_json(json.loads(text))

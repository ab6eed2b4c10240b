"""Shared plumbing: error types, match outcomes, subterm paths, fresh names."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class EngineError(Exception):
    """An internal contract of the rewriting engine was violated."""


class WaitApplication(EngineError):
    """A wait match was applied to a term; reduction never does this."""


class DanglingIndex(EngineError):
    """A decrement would produce primary index 0 or capture a bound index."""


class UnmappedSecondary(EngineError):
    """A variable index at the substitution level has no mapped secondary."""


class IllFormedTerm(EngineError):
    """An indexed term violates the well-formedness conditions."""


class MissingName(EngineError):
    """A free index has no entry in the name table."""


class UnboundSymbol(EngineError):
    """A free symbol is not covered by the name table."""


class ThetaTooShort(EngineError):
    """The binder list cannot name every mapped secondary index."""


class DomainNotEnumerated(EngineError):
    """The substitution domain is not contained in the binder list."""


class NotARedex(Exception):
    """The addressed position is not a contractible redex."""


class BadPath(Exception):
    """The path does not address an existing subterm."""


class ParseError(Exception):
    """Syntax error with source location and the expected token set."""

    def __init__(self, message: str, line: int = 0, col: int = 0,
                 expected: tuple[str, ...] = ()):
        self.line = line
        self.col = col
        self.expected = expected
        loc = f"{line}:{col}: " if line else ""
        hint = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"{loc}{message}{hint}")


class DuplicateBinder(ParseError):
    """A binder list contains the same symbol twice."""


# ---------------------------------------------------------------------------
# Match outcomes.  A match either succeeds with a substitution, fails, or is
# undetermined (wait).  Success and Fail are the decided outcomes; only they
# fire redexes.

@dataclass(frozen=True)
class Success:
    subst: Any

    def __repr__(self):
        return f"Success({self.subst!r})"


class _Fail:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Fail"


class _Wait:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Wait"


FAIL = _Fail()
WAIT = _Wait()


def is_decided(m) -> bool:
    return m is not WAIT


# ---------------------------------------------------------------------------
# Paths address subterms.  Steps: 'f' (function of an application), 'a'
# (argument), 'p' (pattern of an abstraction), 'b' (body).  The empty path is
# the root.  Both term families expose fun/arg and pattern/body attributes,
# so navigation is shared.

Path = tuple[str, ...]

_STEPS = {"f": "fun", "a": "arg", "p": "pattern", "b": "body"}


def parse_path(text: str) -> Path:
    if text in ("", "<root>"):
        return ()
    steps = tuple(text.split("/"))
    for s in steps:
        if s not in _STEPS:
            raise BadPath(f"invalid path step {s!r} (use f, a, p, b)")
    return steps


def format_path(path: Path) -> str:
    return "/".join(path) if path else "<root>"


def subterm(t, path: Path):
    for s in path:
        attr = _STEPS.get(s)
        if attr is None or not hasattr(t, attr):
            raise BadPath(f"path {format_path(path)} does not address a subterm")
        t = getattr(t, attr)
    return t


def replace_at(t, path: Path, new):
    """Rebuild t with the subterm at path replaced by new."""
    if not path:
        return new
    s, rest = path[0], path[1:]
    attr = _STEPS.get(s)
    if attr is None or not hasattr(t, attr):
        raise BadPath(f"path {format_path(path)} does not address a subterm")
    child = replace_at(getattr(t, attr), rest, new)
    cls = type(t)
    if s == "f":
        return cls(child, t.arg)
    if s == "a":
        return cls(t.fun, child)
    # abstraction nodes: named carries theta, indexed carries arity
    first = t.theta if hasattr(t, "theta") else t.arity
    if s == "p":
        return cls(first, child, t.body)
    return cls(first, t.pattern, child)


# ---------------------------------------------------------------------------
# Deterministic fresh-name generation: candidates are base0, base1, ...,
# skipping every reserved symbol.  The counter is monotone so one generator
# never hands out the same name twice.

@dataclass
class FreshGen:
    reserved: set[str] = field(default_factory=set)
    counter: int = 0

    def fresh(self, base: str = "x") -> str:
        while True:
            name = f"{base}{self.counter}"
            self.counter += 1
            if name not in self.reserved:
                self.reserved.add(name)
                return name

    def fresh_many(self, n: int, base: str = "x") -> tuple[str, ...]:
        return tuple(self.fresh(base) for _ in range(n))

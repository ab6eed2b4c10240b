"""Translations between the named and indexed calculi.

Both directions are steered by two name tables V (variables) and M
(matchables): lists of rows, where the row number is the primary index and
the position within the row the secondary index.  Translating an abstraction
pushes its binder as a new first row on the appropriate side.

Going named -> indexed, a symbol resolves to the smallest row containing it
(and the smallest position within that row), so inner binders shadow outer
ones.  Going indexed -> named, each abstraction draws fresh symbols for its
binder, one per slot in ascending secondary order; with the default tables
the two directions are mutually inverse.

The default table convention mirrors a fixed global enumeration x1, x2, ...:
a free index i.1 is named x_i, and a named term whose free symbols all look
like x<k> places x_k on row k (gaps included).  Terms with other free
symbols get rows in lexicographic order, which keeps worked examples such as
tables [[y],[z]] intact.
"""
from __future__ import annotations

import re

from . import indexed, named
from .core import (
    DomainNotEnumerated,
    FreshGen,
    IllFormedTerm,
    MissingName,
    ThetaTooShort,
    UnboundSymbol,
)

Rows = tuple[tuple[str, ...], ...]

_DEFAULT_NAME = re.compile(r"x[1-9][0-9]*")


def freeze_rows(rows) -> Rows:
    return tuple(tuple(row) for row in rows)


def _lookup_min(x: str, rows: Rows) -> tuple[int, int] | None:
    for i, row in enumerate(rows, start=1):
        if x in row:
            return i, row.index(x) + 1
    return None


def _push(theta, rows: Rows) -> Rows:
    return (tuple(theta),) + rows


# ---------------------------------------------------------------------------
# Named -> indexed.


def to_indexed(t: named.Term, vrows, mrows) -> indexed.Term:
    return _to_indexed(t, freeze_rows(vrows), freeze_rows(mrows))


def _to_indexed(t, vrows: Rows, mrows: Rows) -> indexed.Term:
    match t:
        case named.Var(x):
            hit = _lookup_min(x, vrows)
            if hit is None:
                raise UnboundSymbol(f"variable {x} is not covered by the table")
            return indexed.VarIdx(*hit)
        case named.Matchable(x):
            hit = _lookup_min(x, mrows)
            if hit is None:
                raise UnboundSymbol(f"matchable ^{x} is not covered by the table")
            return indexed.MatchIdx(*hit)
        case named.App(f, a):
            return indexed.App(_to_indexed(f, vrows, mrows),
                               _to_indexed(a, vrows, mrows))
        case named.Abs(theta, p, b):
            return indexed.Abs(len(theta),
                               _to_indexed(p, vrows, _push(theta, mrows)),
                               _to_indexed(b, _push(theta, vrows), mrows))
    raise TypeError(f"not a named term: {t!r}")


def default_rows_for_named(t: named.Term) -> Rows:
    """Singleton rows covering the free symbols of t.

    Free symbols following the default enumeration (x1, x2, ...) keep their
    numeric position as the row number; any other free symbol set is laid
    out in lexicographic order.
    """
    frees = sorted(named.fv(t) | named.fm(t))
    if frees and all(_DEFAULT_NAME.fullmatch(s) for s in frees):
        top = max(int(s[1:]) for s in frees)
        return tuple((f"x{k}",) for k in range(1, top + 1))
    return tuple((s,) for s in frees)


def to_indexed_default(t: named.Term) -> indexed.Term:
    rows = default_rows_for_named(t)
    return _to_indexed(t, rows, rows)


# ---------------------------------------------------------------------------
# Indexed -> named.


def to_named(t: indexed.Term, vrows, mrows, gen: FreshGen | None = None,
             base: str = "x") -> named.Term:
    """Translate t, naming free indices from the tables and drawing fresh
    symbols for binders (slot j gets the j-th drawn symbol)."""
    vrows = freeze_rows(vrows)
    mrows = freeze_rows(mrows)
    if gen is None:
        gen = FreshGen(reserved={s for row in vrows + mrows for s in row})
    return _to_named(t, vrows, mrows, gen, base)


def _to_named(t, vrows: Rows, mrows: Rows, gen: FreshGen, base: str) -> named.Term:
    match t:
        case indexed.VarIdx(i, j):
            if i > len(vrows) or j > len(vrows[i - 1]):
                raise MissingName(f"variable index {i}.{j} has no table entry")
            return named.Var(vrows[i - 1][j - 1])
        case indexed.MatchIdx(i, j):
            if i > len(mrows) or j > len(mrows[i - 1]):
                raise MissingName(f"matchable index {i}.{j} has no table entry")
            return named.Matchable(mrows[i - 1][j - 1])
        case indexed.App(f, a):
            return named.App(_to_named(f, vrows, mrows, gen, base),
                             _to_named(a, vrows, mrows, gen, base))
        case indexed.Abs(n, p, b):
            theta = gen.fresh_many(n, base)
            return named.Abs(theta,
                             _to_named(p, vrows, _push(theta, mrows), gen, base),
                             _to_named(b, _push(theta, vrows), mrows, gen, base))
    raise TypeError(f"not an indexed term: {t!r}")


def default_rows_for_indexed(t: indexed.Term) -> Rows:
    """Rows x1 .. xn where n is the largest free primary index of t."""
    frees = indexed.fv(t) | indexed.fm(t)
    top = max((i for (i, _) in frees), default=0)
    return tuple((f"x{k}",) for k in range(1, top + 1))


def to_named_default(t: indexed.Term) -> named.Term:
    err = indexed.check_well_formed(t)
    if err:
        raise IllFormedTerm(err)
    rows = default_rows_for_indexed(t)
    gen = FreshGen(reserved={s for row in rows for s in row})
    return _to_named(t, rows, rows, gen, "x")


# ---------------------------------------------------------------------------
# Substitutions and matches.


def subst_to_indexed(sigma: named.Subst, theta, vrows, mrows) -> indexed.LevelSubst:
    """Translate a named substitution to level 1, using theta to number its
    domain (x at position j becomes secondary j)."""
    theta = tuple(theta)
    missing = set(sigma) - set(theta)
    if missing:
        raise DomainNotEnumerated(
            f"domain symbols {sorted(missing)} missing from the binder list")
    mapping = {theta.index(x) + 1: to_indexed(u, vrows, mrows)
               for x, u in sigma.items()}
    return indexed.LevelSubst(1, mapping)


def subst_to_named(sigma: indexed.LevelSubst, theta, vrows, mrows,
                   gen: FreshGen | None = None) -> named.Subst:
    """Translate a level-1 substitution; secondary j maps to theta's j-th symbol."""
    if sigma.level != 1:
        raise ValueError("only level-1 substitutions translate to named terms")
    theta = tuple(theta)
    if sigma.mapping and max(sigma.mapping) > len(theta):
        raise ThetaTooShort(
            f"binder list of length {len(theta)} cannot name secondary "
            f"{max(sigma.mapping)}")
    if gen is None:
        gen = FreshGen(reserved={s for row in freeze_rows(vrows) +
                                 freeze_rows(mrows) for s in row} | set(theta))
    return {theta[j - 1]: to_named(u, vrows, mrows, gen)
            for j, u in sigma.mapping.items()}


def match_to_indexed(theta, p: named.Term, u: named.Term, vrows, mrows):
    """The indexed image of a named matching problem: theta is pushed onto the
    matchable rows of the pattern, mirroring abstraction translation."""
    theta = tuple(theta)
    return indexed.match(len(theta),
                         to_indexed(p, vrows, _push(theta, freeze_rows(mrows))),
                         to_indexed(u, vrows, mrows))


def match_to_named(arity: int, p: indexed.Term, u: indexed.Term, theta,
                   vrows, mrows, gen: FreshGen | None = None):
    """The named image of an indexed matching problem, relative to a list of
    fresh symbols naming the binder slots."""
    theta = tuple(theta)
    if len(theta) != arity:
        raise ValueError("binder list length must equal the arity")
    vrows = freeze_rows(vrows)
    mrows = freeze_rows(mrows)
    if gen is None:
        gen = FreshGen(reserved={s for row in vrows + mrows for s in row}
                       | set(theta))
    return named.match(theta,
                       to_named(p, vrows, _push(theta, mrows), gen),
                       to_named(u, vrows, mrows, gen))

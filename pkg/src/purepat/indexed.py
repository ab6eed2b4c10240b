"""The pattern calculus over bidimensional de Bruijn indices.

An index i.j has a primary component i (distance to the binding abstraction)
and a secondary component j (which of the binder's n slots it names).
Variable indices count abstraction bodies on the way to their binder,
matchable indices count abstraction patterns.  An abstraction `\\{n} p . b`
captures matchable indices 1.j in its pattern and variable indices 1.j in
its body, for j in 1..n.

Alpha-conversion disappears, but equality is still taken modulo the
per-binder assignment of secondary indices; `canonicalize_secondary` picks
the first-occurrence representative of each class.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import (
    FAIL,
    WAIT,
    BadPath,
    DanglingIndex,
    IllFormedTerm,
    NotARedex,
    Path,
    Success,
    UnmappedSecondary,
    WaitApplication,
    format_path,
    is_decided,
    replace_at,
    subterm,
)


@dataclass(frozen=True)
class VarIdx:
    i: int
    j: int


@dataclass(frozen=True)
class MatchIdx:
    i: int
    j: int


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Abs:
    arity: int
    pattern: "Term"
    body: "Term"


Term = VarIdx | MatchIdx | App | Abs

# The reduct of a failed match: the indexed identity function.
IDENTITY = Abs(1, MatchIdx(1, 1), VarIdx(1, 1))


class IdxKind(Enum):
    VAR = "var"
    MATCH = "match"


def term_size(t: Term) -> int:
    match t:
        case App(f, a):
            return 1 + term_size(f) + term_size(a)
        case Abs(_, p, b):
            return 1 + term_size(p) + term_size(b)
        case _:
            return 1


def _shift_down(pairs: set[tuple[int, int]]) -> set[tuple[int, int]]:
    return {(i - 1, j) for (i, j) in pairs if i > 1}


def fv(t: Term) -> set[tuple[int, int]]:
    """Free variable pairs; crossing an abstraction body costs one primary."""
    match t:
        case VarIdx(i, j):
            return {(i, j)}
        case MatchIdx(_, _):
            return set()
        case App(f, a):
            return fv(f) | fv(a)
        case Abs(_, p, b):
            return fv(p) | _shift_down(fv(b))
    raise TypeError(f"not an indexed term: {t!r}")


def fm(t: Term) -> set[tuple[int, int]]:
    """Free matchable pairs; crossing an abstraction pattern costs one primary."""
    match t:
        case VarIdx(_, _):
            return set()
        case MatchIdx(i, j):
            return {(i, j)}
        case App(f, a):
            return fm(f) | fm(a)
        case Abs(_, p, b):
            return _shift_down(fm(p)) | fm(b)
    raise TypeError(f"not an indexed term: {t!r}")


def check_well_formed(t: Term) -> str | None:
    """None when well-formed, else a message naming the first violation.

    Well-formed: every free pair has secondary index 1, and each abstraction
    of arity n captures only pairs 1.j with j <= n.
    """

    def walk(t, path) -> str | None:
        if isinstance(t, Abs):
            captured = ({j for (i, j) in fm(t.pattern) if i == 1}
                        | {j for (i, j) in fv(t.body) if i == 1})
            bad = sorted(j for j in captured if j > t.arity)
            if bad:
                return (f"abstraction of arity {t.arity} at {format_path(path)} "
                        f"captures secondary index {bad[0]}")
            err = walk(t.pattern, path + ("p",))
            return err if err else walk(t.body, path + ("b",))
        if isinstance(t, App):
            err = walk(t.fun, path + ("f",))
            return err if err else walk(t.arg, path + ("a",))
        return None

    for (i, j) in sorted(fv(t) | fm(t)):
        if j > 1:
            return f"free index {i}.{j} has secondary index {j} > 1"
    return walk(t, ())


def well_formed(t: Term) -> bool:
    return check_well_formed(t) is None


# ---------------------------------------------------------------------------
# Index arithmetic.  finc bumps the primary indices of one kind strictly above
# the depth; fdec is its inverse and refuses to cross the depth boundary.


def finc(kind: IdxKind, depth: int, t: Term) -> Term:
    match t:
        case VarIdx(i, j):
            if kind is IdxKind.VAR and i > depth:
                return VarIdx(i + 1, j)
            return t
        case MatchIdx(i, j):
            if kind is IdxKind.MATCH and i > depth:
                return MatchIdx(i + 1, j)
            return t
        case App(f, a):
            return App(finc(kind, depth, f), finc(kind, depth, a))
        case Abs(n, p, b):
            if kind is IdxKind.VAR:
                return Abs(n, finc(kind, depth, p), finc(kind, depth + 1, b))
            return Abs(n, finc(kind, depth + 1, p), finc(kind, depth, b))
    raise TypeError(f"not an indexed term: {t!r}")


def fdec(kind: IdxKind, depth: int, t: Term) -> Term:
    match t:
        case VarIdx(i, j):
            if kind is IdxKind.VAR and i > depth:
                if i == depth + 1:
                    raise DanglingIndex(
                        f"decrement at depth {depth} hits variable index {i}.{j}")
                return VarIdx(i - 1, j)
            return t
        case MatchIdx(i, j):
            if kind is IdxKind.MATCH and i > depth:
                if i == depth + 1:
                    raise DanglingIndex(
                        f"decrement at depth {depth} hits matchable index {i}.{j}")
                return MatchIdx(i - 1, j)
            return t
        case App(f, a):
            return App(fdec(kind, depth, f), fdec(kind, depth, a))
        case Abs(n, p, b):
            if kind is IdxKind.VAR:
                return Abs(n, fdec(kind, depth, p), fdec(kind, depth + 1, b))
            return Abs(n, fdec(kind, depth + 1, p), fdec(kind, depth, b))
    raise TypeError(f"not an indexed term: {t!r}")


# ---------------------------------------------------------------------------
# Substitution at a level.  The map sends secondary indices to terms; only
# variable indices whose primary equals the level are replaced.  Descending
# into an abstraction keeps the pattern at the same level (bumping matchable
# indices of the values) and moves the body one level up (bumping variable
# indices of the values).


@dataclass
class LevelSubst:
    level: int
    mapping: dict[int, Term]

    def __eq__(self, other):
        return (isinstance(other, LevelSubst)
                and self.level == other.level and self.mapping == other.mapping)

    def __repr__(self):
        inside = ", ".join(f"{self.level}.{j} := {u!r}"
                           for j, u in sorted(self.mapping.items()))
        return f"{{{inside}}}"


def finc_subst(depth: int, sigma: LevelSubst) -> LevelSubst:
    return LevelSubst(sigma.level,
                      {j: finc(IdxKind.VAR, depth, u)
                       for j, u in sigma.mapping.items()})


def finc_match(depth: int, m):
    """Lift the variable-index increment over a match outcome."""
    if isinstance(m, Success):
        return Success(finc_subst(depth, m.subst))
    return m


def apply_subst(sigma: LevelSubst, t: Term) -> Term:
    match t:
        case VarIdx(i, j):
            if i != sigma.level:
                return t
            if j not in sigma.mapping:
                raise UnmappedSecondary(
                    f"variable index {i}.{j} at substitution level {i} "
                    f"has no mapping")
            return sigma.mapping[j]
        case MatchIdx(_, _):
            return t
        case App(f, a):
            return App(apply_subst(sigma, f), apply_subst(sigma, a))
        case Abs(n, p, b):
            psub = LevelSubst(sigma.level,
                              {j: finc(IdxKind.MATCH, 0, u)
                               for j, u in sigma.mapping.items()})
            bsub = LevelSubst(sigma.level + 1,
                              {j: finc(IdxKind.VAR, 0, u)
                               for j, u in sigma.mapping.items()})
            return Abs(n, apply_subst(psub, p), apply_subst(bsub, b))
    raise TypeError(f"not an indexed term: {t!r}")


# ---------------------------------------------------------------------------
# Matchable forms and matching.


def is_data(t: Term) -> bool:
    while isinstance(t, App):
        t = t.fun
    return isinstance(t, MatchIdx)


def is_matchable_form(t: Term) -> bool:
    return isinstance(t, Abs) or is_data(t)


def disjoint_union(m1, m2):
    """Fail dominates, then wait; overlapping secondaries fail; else merge."""
    if m1 is FAIL or m2 is FAIL:
        return FAIL
    if m1 is WAIT or m2 is WAIT:
        return WAIT
    s1, s2 = m1.subst, m2.subst
    if set(s1.mapping) & set(s2.mapping):
        return FAIL
    return Success(LevelSubst(1, {**s1.mapping, **s2.mapping}))


def match(arity: int, p: Term, u: Term):
    """Match p against u under a binder of the given arity.

    A matchable 1.j in the pattern binds the whole argument; a matchable
    (i+1).j matches exactly the matchable i.j (one binder fewer on the
    argument side of a redex).  A successful result must bind exactly the
    secondaries 1..arity, otherwise the match fails.
    """
    m = _match(p, u)
    if isinstance(m, Success) and set(m.subst.mapping) != set(range(1, arity + 1)):
        return FAIL
    return m


def _match(p: Term, u: Term):
    if isinstance(p, MatchIdx):
        if p.i == 1:
            return Success(LevelSubst(1, {p.j: u}))
        if isinstance(u, MatchIdx) and u.i == p.i - 1 and u.j == p.j:
            return Success(LevelSubst(1, {}))
    if (isinstance(p, App) and isinstance(u, App)
            and is_matchable_form(p) and is_matchable_form(u)):
        return disjoint_union(_match(p.fun, u.fun), _match(p.arg, u.arg))
    if is_matchable_form(p) and is_matchable_form(u):
        return FAIL
    return WAIT


def apply_match(m, t: Term) -> Term:
    if isinstance(m, Success):
        return apply_subst(m.subst, t)
    if m is FAIL:
        return IDENTITY
    raise WaitApplication("cannot apply an undetermined match")


# ---------------------------------------------------------------------------
# Reduction: (\\{n} p . s) u contracts to fdec({p /n finc u} s).  The argument
# sits outside the binder, so its variable indices are incremented before
# matching; the decrement compensates for the binder lost over s.


def _root_match(t: Term):
    f = t.fun
    return match(f.arity, f.pattern, finc(IdxKind.VAR, 0, t.arg))


def redexes(t: Term) -> list[Path]:
    out: list[Path] = []

    def walk(t, path):
        if isinstance(t, App) and isinstance(t.fun, Abs):
            if is_decided(_root_match(t)):
                out.append(path)
        match t:
            case App(f, a):
                walk(f, path + ("f",))
                walk(a, path + ("a",))
            case Abs(_, p, b):
                walk(p, path + ("p",))
                walk(b, path + ("b",))

    walk(t, ())
    return out


def contract(t: Term) -> Term:
    if not (isinstance(t, App) and isinstance(t.fun, Abs)):
        raise NotARedex("term is not an abstraction applied to an argument")
    m = _root_match(t)
    if not is_decided(m):
        raise NotARedex("match is undetermined")
    return fdec(IdxKind.VAR, 0, apply_match(m, t.fun.body))


def step(t: Term, pos: Path) -> Term:
    try:
        sub = subterm(t, pos)
    except BadPath as e:
        raise NotARedex(str(e)) from None
    return replace_at(t, pos, contract(sub))


@dataclass(frozen=True)
class NormalizeResult:
    term: Term
    status: str  # normal | blocked | step_limit
    trace: tuple[tuple[Path, Term], ...]

    @property
    def steps(self) -> int:
        return len(self.trace)


def head_blocked(t: Term) -> bool:
    while isinstance(t, App):
        if isinstance(t.fun, Abs) and not is_decided(_root_match(t)):
            return True
        t = t.fun
    return False


def normalize(t: Term, max_steps: int = 1000) -> NormalizeResult:
    """Contract the leftmost-outermost redex until none remains."""
    trace: list[tuple[Path, Term]] = []
    for _ in range(max_steps):
        rs = redexes(t)
        if not rs:
            status = "blocked" if head_blocked(t) else "normal"
            return NormalizeResult(t, status, tuple(trace))
        t = step(t, rs[0])
        trace.append((rs[0], t))
    status = "step_limit" if redexes(t) else (
        "blocked" if head_blocked(t) else "normal")
    return NormalizeResult(t, status, tuple(trace))


# ---------------------------------------------------------------------------
# Equality modulo the assignment of secondary indices.  For each binder the
# bound secondaries are renumbered 1..n by first occurrence: matchable
# occurrences in the pattern first (preorder), then variable occurrences in
# the body, then unused slots in ascending old order.  The renumbering is
# applied consistently to that binder's pattern matchables and body
# variables, so canonical forms are equal exactly for terms that differ only
# in how binders number their slots.


def _bound_occurrences(t: Term, depth: int, kind: IdxKind, out: list[int]) -> None:
    match t:
        case VarIdx(i, j):
            if kind is IdxKind.VAR and i == depth + 1:
                out.append(j)
        case MatchIdx(i, j):
            if kind is IdxKind.MATCH and i == depth + 1:
                out.append(j)
        case App(f, a):
            _bound_occurrences(f, depth, kind, out)
            _bound_occurrences(a, depth, kind, out)
        case Abs(_, p, b):
            if kind is IdxKind.MATCH:
                _bound_occurrences(p, depth + 1, kind, out)
                _bound_occurrences(b, depth, kind, out)
            else:
                _bound_occurrences(p, depth, kind, out)
                _bound_occurrences(b, depth + 1, kind, out)


def _renumber(t: Term, depth: int, kind: IdxKind, perm: dict[int, int]) -> Term:
    match t:
        case VarIdx(i, j):
            if kind is IdxKind.VAR and i == depth + 1:
                return VarIdx(i, perm[j])
            return t
        case MatchIdx(i, j):
            if kind is IdxKind.MATCH and i == depth + 1:
                return MatchIdx(i, perm[j])
            return t
        case App(f, a):
            return App(_renumber(f, depth, kind, perm),
                       _renumber(a, depth, kind, perm))
        case Abs(n, p, b):
            if kind is IdxKind.MATCH:
                return Abs(n, _renumber(p, depth + 1, kind, perm),
                           _renumber(b, depth, kind, perm))
            return Abs(n, _renumber(p, depth, kind, perm),
                       _renumber(b, depth + 1, kind, perm))
    raise TypeError(f"not an indexed term: {t!r}")


def canonicalize_secondary(t: Term) -> Term:
    err = check_well_formed(t)
    if err:
        raise IllFormedTerm(err)
    return _canon(t)


def _canon(t: Term) -> Term:
    match t:
        case App(f, a):
            return App(_canon(f), _canon(a))
        case Abs(n, p, b):
            p, b = _canon(p), _canon(b)
            occs: list[int] = []
            _bound_occurrences(p, 0, IdxKind.MATCH, occs)
            _bound_occurrences(b, 0, IdxKind.VAR, occs)
            order: list[int] = []
            for j in occs:
                if j not in order:
                    order.append(j)
            order.extend(j for j in range(1, n + 1) if j not in order)
            perm = {old: new for new, old in enumerate(order, start=1)}
            if all(old == new for old, new in perm.items()):
                return Abs(n, p, b)
            return Abs(n, _renumber(p, 0, IdxKind.MATCH, perm),
                       _renumber(b, 0, IdxKind.VAR, perm))
        case _:
            return t


def eq_mod_secondary(t: Term, u: Term) -> bool:
    """Structural equality of canonical forms."""
    return canonicalize_secondary(t) == canonicalize_secondary(u)

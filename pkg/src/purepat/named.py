"""The named pure pattern calculus.

Terms are variables `x`, matchables `^x`, applications, and abstractions
`\\[theta] p . b` over a duplicate-free binder list theta.  An abstraction
binds the matchable occurrences of its theta symbols in the pattern and the
variable occurrences in the body.  Matching a pattern against an argument
either succeeds with a substitution, fails, or waits until both sides are
sufficiently evaluated; only decided matches (success or fail) fire redexes,
and a failed match rewrites to the identity function.

All values are immutable; every operation is a pure function.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (
    FAIL,
    WAIT,
    BadPath,
    FreshGen,
    NotARedex,
    Path,
    Success,
    WaitApplication,
    is_decided,
    replace_at,
    subterm,
)

# ---------------------------------------------------------------------------
# Terms.  Symbols are plain strings.


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Matchable:
    name: str


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Abs:
    theta: tuple[str, ...]
    pattern: "Term"
    body: "Term"


Term = Var | Matchable | App | Abs

# The reduct of a failed match: the identity function.
IDENTITY = Abs(("x",), Matchable("x"), Var("x"))

# A substitution maps symbols to terms.
Subst = dict[str, Term]


def term_size(t: Term) -> int:
    match t:
        case App(f, a):
            return 1 + term_size(f) + term_size(a)
        case Abs(_, p, b):
            return 1 + term_size(p) + term_size(b)
        case _:
            return 1


def fv(t: Term) -> set[str]:
    """Free variable symbols: theta is removed from the body's contribution."""
    match t:
        case Var(x):
            return {x}
        case Matchable(_):
            return set()
        case App(f, a):
            return fv(f) | fv(a)
        case Abs(theta, p, b):
            return fv(p) | (fv(b) - set(theta))
    raise TypeError(f"not a named term: {t!r}")


def fm(t: Term) -> set[str]:
    """Free matchable symbols: theta is removed from the pattern's contribution."""
    match t:
        case Var(_):
            return set()
        case Matchable(x):
            return {x}
        case App(f, a):
            return fm(f) | fm(a)
        case Abs(theta, p, b):
            return (fm(p) - set(theta)) | fm(b)
    raise TypeError(f"not a named term: {t!r}")


def symbols(t: Term) -> set[str]:
    """Every symbol occurring anywhere in t, bound or free."""
    match t:
        case Var(x) | Matchable(x):
            return {x}
        case App(f, a):
            return symbols(f) | symbols(a)
        case Abs(theta, p, b):
            return set(theta) | symbols(p) | symbols(b)
    raise TypeError(f"not a named term: {t!r}")


# ---------------------------------------------------------------------------
# Alpha-equivalence.  Each abstraction pair contributes one scope holding a
# partial bijection between the two binder lists, built up as occurrences are
# compared.  Matchable occurrences consult the chain of enclosing-pattern
# scopes, variable occurrences the chain of enclosing-body scopes; the scope
# object is shared so pattern and body constrain the same bijection.  Binder
# lists are compared as unordered sets: any bijection will do, and the
# occurrences force it.


class _Scope:
    __slots__ = ("left", "right", "fwd", "bwd")

    def __init__(self, left: tuple[str, ...], right: tuple[str, ...]):
        self.left = set(left)
        self.right = set(right)
        self.fwd: dict[str, str] = {}
        self.bwd: dict[str, str] = {}


def _alpha_sym(x: str, y: str, scopes) -> bool:
    for sc in scopes:
        xin = x in sc.left
        yin = y in sc.right
        if xin != yin:
            return False
        if xin:
            if x in sc.fwd:
                return sc.fwd[x] == y
            if y in sc.bwd:
                return False
            sc.fwd[x] = y
            sc.bwd[y] = x
            return True
    return x == y


def _alpha(t: Term, u: Term, vscopes, mscopes) -> bool:
    match t, u:
        case Var(x), Var(y):
            return _alpha_sym(x, y, vscopes)
        case Matchable(x), Matchable(y):
            return _alpha_sym(x, y, mscopes)
        case App(f1, a1), App(f2, a2):
            return _alpha(f1, f2, vscopes, mscopes) and _alpha(a1, a2, vscopes, mscopes)
        case Abs(th1, p1, b1), Abs(th2, p2, b2):
            if len(th1) != len(th2):
                return False
            sc = _Scope(th1, th2)
            return (_alpha(p1, p2, vscopes, (sc, *mscopes))
                    and _alpha(b1, b2, (sc, *vscopes), mscopes))
        case _:
            return False


def alpha_eq(t: Term, u: Term) -> bool:
    """True iff t and u are equal up to bijective renaming of bound symbols."""
    return _alpha(t, u, (), ())


def alpha_key(t: Term) -> str:
    """A string equal for two terms exactly when they are alpha-equivalent.

    Bound occurrences are rendered as (kind, binder distance, slot) where
    slots are numbered by first occurrence, pattern before body; free
    occurrences keep their names.  Used for fast deduplication.
    """
    parts: list[str] = []

    def sym(x, scopes, kind):
        for d, sc in enumerate(scopes):
            if x in sc[0]:
                slots = sc[1]
                if x not in slots:
                    slots[x] = len(slots) + 1
                parts.append(f"{kind}{d}.{slots[x]}")
                return
        parts.append(f"{kind.upper()}:{x};")

    def walk(t, vscopes, mscopes):
        match t:
            case Var(x):
                sym(x, vscopes, "v")
            case Matchable(x):
                sym(x, mscopes, "m")
            case App(f, a):
                parts.append("(")
                walk(f, vscopes, mscopes)
                parts.append(" ")
                walk(a, vscopes, mscopes)
                parts.append(")")
            case Abs(theta, p, b):
                sc = (set(theta), {})
                parts.append(f"L{len(theta)}[")
                walk(p, vscopes, (sc, *mscopes))
                parts.append("][")
                walk(b, (sc, *vscopes), mscopes)
                parts.append("]")

    walk(t, (), ())
    return "".join(parts)


# ---------------------------------------------------------------------------
# Substitution.


def subst_symbols(sigma: Subst) -> set[str]:
    """dom(sigma) plus all free symbols of its images."""
    out = set(sigma)
    for u in sigma.values():
        out |= fv(u) | fm(u)
    return out


def apply_subst(sigma: Subst, t: Term) -> Term:
    """Replace free variable occurrences of dom(sigma); matchables untouched.

    When a binder clashes with the symbols of sigma it is renamed to fresh
    symbols first (deterministically: base + counter, skipping every symbol
    of the inputs), so descent never captures.
    """
    if not sigma:
        return t
    sym_sigma = subst_symbols(sigma)
    gen = FreshGen(reserved=symbols(t) | sym_sigma)
    return _subst(sigma, sym_sigma, t, gen)


def _subst(sigma: Subst, sym_sigma: set[str], t: Term, gen: FreshGen) -> Term:
    match t:
        case Var(x):
            return sigma.get(x, t)
        case Matchable(_):
            return t
        case App(f, a):
            return App(_subst(sigma, sym_sigma, f, gen),
                       _subst(sigma, sym_sigma, a, gen))
        case Abs(theta, p, b):
            if set(theta) & sym_sigma:
                for z in theta:
                    if z in sym_sigma:
                        z2 = gen.fresh(z)
                        p = rename_bound_matchable(p, z, z2)
                        b = rename_bound_var(b, z, z2)
                        theta = tuple(z2 if s == z else s for s in theta)
            return Abs(theta, _subst(sigma, sym_sigma, p, gen),
                       _subst(sigma, sym_sigma, b, gen))
    raise TypeError(f"not a named term: {t!r}")


def rename_bound_matchable(t: Term, old: str, new: str) -> Term:
    """Rename free matchable occurrences of old to new (new must be fresh)."""
    match t:
        case Matchable(x) if x == old:
            return Matchable(new)
        case App(f, a):
            return App(rename_bound_matchable(f, old, new),
                       rename_bound_matchable(a, old, new))
        case Abs(theta, p, b):
            p2 = p if old in theta else rename_bound_matchable(p, old, new)
            return Abs(theta, p2, rename_bound_matchable(b, old, new))
        case _:
            return t


def rename_bound_var(t: Term, old: str, new: str) -> Term:
    """Rename free variable occurrences of old to new (new must be fresh)."""
    match t:
        case Var(x) if x == old:
            return Var(new)
        case App(f, a):
            return App(rename_bound_var(f, old, new),
                       rename_bound_var(a, old, new))
        case Abs(theta, p, b):
            b2 = b if old in theta else rename_bound_var(b, old, new)
            return Abs(theta, rename_bound_var(p, old, new), b2)
        case _:
            return t


# ---------------------------------------------------------------------------
# Match algebra.


def disjoint_union(m1, m2):
    """Fail dominates, then wait; overlapping domains fail; else merge."""
    if m1 is FAIL or m2 is FAIL:
        return FAIL
    if m1 is WAIT or m2 is WAIT:
        return WAIT
    s1, s2 = m1.subst, m2.subst
    if set(s1) & set(s2):
        return FAIL
    return Success({**s1, **s2})


def compose_match(m1, m2):
    """Composition: x maps to m1 applied to m2(x); fail dominates, then wait."""
    if m1 is FAIL or m2 is FAIL:
        return FAIL
    if m1 is WAIT or m2 is WAIT:
        return WAIT
    s1, s2 = m1.subst, m2.subst
    out = {x: apply_subst(s1, u) for x, u in s2.items()}
    for x, u in s1.items():
        out.setdefault(x, u)
    return Success(out)


# ---------------------------------------------------------------------------
# Matchable forms and matching.


def is_data(t: Term) -> bool:
    """data ::= matchable | data term"""
    while isinstance(t, App):
        t = t.fun
    return isinstance(t, Matchable)


def is_matchable_form(t: Term) -> bool:
    """matchable form ::= data | abstraction"""
    return isinstance(t, Abs) or is_data(t)


def match(theta, p: Term, u: Term):
    """Match pattern p against u relative to the binder list theta.

    The five rules apply in order; a successful result must bind exactly
    theta, otherwise the match fails (this keeps bound symbols from escaping
    their scope).
    """
    bound = frozenset(theta)
    if len(bound) != len(tuple(theta)):
        raise ValueError("duplicate symbols in binder list")
    m = _match(bound, p, u)
    if isinstance(m, Success) and set(m.subst) != set(bound):
        return FAIL
    return m


def _match(bound: frozenset, p: Term, u: Term):
    if isinstance(p, Matchable):
        if p.name in bound:
            return Success({p.name: u})
        if isinstance(u, Matchable) and u.name == p.name:
            return Success({})
    if (isinstance(p, App) and isinstance(u, App)
            and is_matchable_form(p) and is_matchable_form(u)):
        return disjoint_union(_match(bound, p.fun, u.fun),
                              _match(bound, p.arg, u.arg))
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
# Reduction: (\\[theta] p . s) u contracts to the match applied to s whenever
# the match is decided.  Redexes are listed in preorder, so the first one is
# the leftmost-outermost.


def redexes(t: Term) -> list[Path]:
    out: list[Path] = []

    def walk(t, path):
        if isinstance(t, App) and isinstance(t.fun, Abs):
            f = t.fun
            if is_decided(match(f.theta, f.pattern, t.arg)):
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
    """Contract a root redex (\\[theta] p . s) u."""
    if not (isinstance(t, App) and isinstance(t.fun, Abs)):
        raise NotARedex("term is not an abstraction applied to an argument")
    f = t.fun
    m = match(f.theta, f.pattern, t.arg)
    if not is_decided(m):
        raise NotARedex("match is undetermined")
    return apply_match(m, f.body)


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
    """True when the leftmost application spine holds a wait-matched redex."""
    while isinstance(t, App):
        if isinstance(t.fun, Abs):
            f = t.fun
            if not is_decided(match(f.theta, f.pattern, t.arg)):
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

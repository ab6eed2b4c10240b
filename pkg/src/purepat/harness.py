"""Differential test harness for the two calculi.

Seeded generators produce named terms (duplicate-free binders, pattern
coverage of the binder list) and indexed terms (always well-formed).  Pairs
for the bisimulation relation are built by generating one side and
translating it; the relation itself is checked through both translations,
which must agree.  Bounded confluence enumerates the full reduction fan-out
to a given depth and checks that every peak joins and at most one normal
form is reached, modulo alpha-equivalence (named) or secondary-index
equality (indexed).  The lemma suite replays, on random instances, the index
arithmetic, lifting, preservation, substitution, and invertibility facts the
engine relies on.

Every sample is pure and independent; `jobs > 1` fans samples across worker
processes and merges results in deterministic order.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import indexed, named, syntax, translate
from .core import EngineError, FreshGen, Success
from .indexed import IdxKind

FREE_POOL = ("x1", "x2", "x3", "x4", "x5")
MAX_FREE_PRIMARY = 4


class OracleDisagreement(EngineError):
    """The two routes that decide the relation gave different answers."""


@dataclass(frozen=True)
class GenConfig:
    seed: int
    max_size: int = 20
    max_arity: int = 2
    require_theta_in_pattern: bool = True
    closed: bool = False


# ---------------------------------------------------------------------------
# Term generators.


class _NamedGen:
    def __init__(self, cfg: GenConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng
        self.counter = 0

    def bound_name(self) -> str:
        self.counter += 1
        return f"b{self.counter}"

    def term(self, budget: int, vbound, mbound) -> named.Term:
        # node bias roughly 40% applications (mostly planted redexes), 25%
        # abstractions, 35% leaves; big budgets keep the leaf share small so
        # the tree actually fills out (uniform trees almost never reduce)
        r = self.rng.random()
        if budget >= 6:
            if r < 0.40:
                return self.redex(budget, vbound, mbound)
            if r < 0.55:
                split = self.rng.randint(1, budget - 1)
                return named.App(self.term(split, vbound, mbound),
                                 self.term(budget - split, vbound, mbound))
            if r < 0.88:
                return self.abs(budget, vbound, mbound)
            return self.leaf(vbound, mbound)
        if budget >= 4 and r < 0.32:
            return self.redex(budget, vbound, mbound)
        if budget >= 2 and r < 0.40:
            split = self.rng.randint(1, budget - 1)
            return named.App(self.term(split, vbound, mbound),
                             self.term(budget - split, vbound, mbound))
        if budget >= 3 and r < 0.65:
            return self.abs(budget, vbound, mbound)
        return self.leaf(vbound, mbound)

    def redex(self, budget: int, vbound, mbound) -> named.Term:
        f = self.abs(budget // 2, vbound, mbound)
        arg_budget = max(1, budget - named.term_size(f) - 1)
        if self.rng.random() < 0.7:
            u = self.aligned_arg(f.pattern, set(f.theta), arg_budget,
                                 vbound, mbound)
        else:
            u = self.term(arg_budget, vbound, mbound)
        return named.App(f, u)

    def aligned_arg(self, p, bound, budget: int, vbound, mbound,
                    spine: bool = True) -> named.Term:
        """An argument shaped after the pattern so matches often decide.

        Decomposition only inspects the application spine head, so spine
        fillers stay data-headed while argument components are free to hide
        redexes (matching binds them unconditionally)."""
        budget = max(1, budget)
        if isinstance(p, named.Matchable):
            if p.name in bound:
                r = self.rng.random()
                if spine or r < 0.4:
                    return self.data_ish(budget, vbound, mbound)
                if budget >= 5 and r < 0.7:
                    return self.redex(budget, vbound, mbound)
                return self.term(budget, vbound, mbound)
            if self.rng.random() < 0.85:
                return p
            return self.leaf(vbound, mbound)
        if isinstance(p, named.App):
            half = max(1, budget // 2)
            return named.App(
                self.aligned_arg(p.fun, bound, half, vbound, mbound, spine),
                self.aligned_arg(p.arg, bound, half, vbound, mbound, False))
        if spine or self.rng.random() < 0.7:
            return self.data_ish(budget, vbound, mbound)
        return self.term(budget, vbound, mbound)

    def data_ish(self, budget: int, vbound, mbound) -> named.Term:
        """A small data structure: matchable head applied to a few arguments.
        Arguments may hide redexes, which is how peaks arise (the structure
        stays a matchable form, so an enclosing match still decides)."""
        cands = [x for theta in mbound for x in theta]
        head: named.Term = named.Matchable(
            self.rng.choice(cands) if cands and self.rng.random() < 0.4
            else self.rng.choice(FREE_POOL))
        t = head
        remaining = budget - 1
        while remaining > 0 and self.rng.random() < 0.5:
            take = self.rng.randint(1, remaining)
            r = self.rng.random()
            if take >= 5 and r < 0.35:
                arg = self.redex(take, vbound, mbound)
            elif r < 0.6:
                arg = self.data_ish(take, vbound, mbound)
            else:
                arg = self.term(take, vbound, mbound)
            t = named.App(t, arg)
            remaining -= take
        return t

    def leaf(self, vbound, mbound) -> named.Term:
        if self.rng.random() < 0.45:
            cands = [x for theta in vbound for x in theta]
            if cands and (self.cfg.closed or self.rng.random() < 0.6):
                return named.Var(self.rng.choice(cands))
            if not self.cfg.closed:
                return named.Var(self.rng.choice(FREE_POOL))
        cands = [x for theta in mbound for x in theta]
        if cands and self.rng.random() < 0.5:
            return named.Matchable(self.rng.choice(cands))
        return named.Matchable(self.rng.choice(FREE_POOL))

    def abs(self, budget: int, vbound, mbound) -> named.Term:
        n = 0 if self.rng.random() < 0.08 else self.rng.randint(1, self.cfg.max_arity)
        theta = tuple(self.bound_name() for _ in range(n))
        pat_budget = max(n + 1, (budget - 1) // 2)
        pattern = self.pattern(pat_budget, theta, vbound, mbound)
        body = self.term(max(1, budget - 1 - named.term_size(pattern)),
                         (theta,) + vbound, mbound)
        return named.Abs(theta, pattern, body)

    def pattern(self, budget: int, theta, vbound, mbound) -> named.Term:
        mbound2 = (theta,) + mbound
        if not self.cfg.require_theta_in_pattern and self.rng.random() < 0.5:
            return self.term(budget, vbound, mbound2)
        items: list[named.Term] = [named.Matchable(x) for x in theta]
        self.rng.shuffle(items)
        extra = budget - len(items) - 1
        while extra > 0 and self.rng.random() < 0.4:
            take = self.rng.randint(1, extra)
            piece = (self.data_ish(take, vbound, mbound2)
                     if self.rng.random() < 0.6
                     else self.term(take, vbound, mbound2))
            items.insert(self.rng.randint(0, len(items)), piece)
            extra -= take
        r = self.rng.random()
        head: named.Term
        if r < 0.1 and not self.cfg.closed:
            head = named.Var(self.rng.choice(FREE_POOL))
        elif r < 0.1 and any(vbound):
            head = named.Var(self.rng.choice(
                [x for th in vbound for x in th]))
        else:
            head = named.Matchable(self.rng.choice(FREE_POOL))
        if not items:
            return head
        if isinstance(items[0], named.Matchable) and r < 0.75:
            head = items.pop(0)
        t = head
        for it in items:
            t = named.App(t, it)
        return t


class _IdxGen:
    def __init__(self, cfg: GenConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng

    def term(self, budget: int, vstack, mstack) -> indexed.Term:
        # same bias as the named generator: see _NamedGen.term
        r = self.rng.random()
        if budget >= 6:
            if r < 0.40:
                return self.redex(budget, vstack, mstack)
            if r < 0.55:
                split = self.rng.randint(1, budget - 1)
                return indexed.App(self.term(split, vstack, mstack),
                                   self.term(budget - split, vstack, mstack))
            if r < 0.88:
                return self.abs(budget, vstack, mstack)
            return self.leaf(vstack, mstack)
        if budget >= 4 and r < 0.32:
            return self.redex(budget, vstack, mstack)
        if budget >= 2 and r < 0.40:
            split = self.rng.randint(1, budget - 1)
            return indexed.App(self.term(split, vstack, mstack),
                               self.term(budget - split, vstack, mstack))
        if budget >= 3 and r < 0.65:
            return self.abs(budget, vstack, mstack)
        return self.leaf(vstack, mstack)

    def redex(self, budget: int, vstack, mstack) -> indexed.Term:
        f = self.abs(budget // 2, vstack, mstack)
        arg_budget = max(1, budget - indexed.term_size(f) - 1)
        if self.rng.random() < 0.7:
            u = self.aligned_arg(f.pattern, arg_budget, vstack, mstack)
        else:
            u = self.term(arg_budget, vstack, mstack)
        return indexed.App(f, u)

    def aligned_arg(self, p, budget: int, vstack, mstack,
                    spine: bool = True) -> indexed.Term:
        """An argument shaped after the pattern: bound slots get arbitrary
        terms, free matchables drop one primary (the binder between them).
        Spine fillers stay data-headed so decomposition keeps deciding."""
        budget = max(1, budget)
        if isinstance(p, indexed.MatchIdx):
            if p.i == 1:
                r = self.rng.random()
                if spine or r < 0.4:
                    return self.data_ish(budget, vstack, mstack)
                if budget >= 5 and r < 0.7:
                    return self.redex(budget, vstack, mstack)
                return self.term(budget, vstack, mstack)
            if self.rng.random() < 0.85:
                return indexed.MatchIdx(p.i - 1, p.j)
            return self.leaf(vstack, mstack)
        if isinstance(p, indexed.App):
            half = max(1, budget // 2)
            return indexed.App(
                self.aligned_arg(p.fun, half, vstack, mstack, spine),
                self.aligned_arg(p.arg, half, vstack, mstack, False))
        if spine or self.rng.random() < 0.7:
            return self.data_ish(budget, vstack, mstack)
        return self.term(budget, vstack, mstack)

    def data_ish(self, budget: int, vstack, mstack) -> indexed.Term:
        """A small data structure: matchable head applied to a few arguments.
        Arguments may hide redexes, which is how peaks arise (the structure
        stays a matchable form, so an enclosing match still decides)."""
        levels = [(l, a) for l, a in enumerate(mstack, start=1) if a > 0]
        if levels and self.rng.random() < 0.4:
            l, a = self.rng.choice(levels)
            head: indexed.Term = indexed.MatchIdx(l, self.rng.randint(1, a))
        else:
            head = indexed.MatchIdx(
                len(mstack) + self.rng.randint(1, MAX_FREE_PRIMARY), 1)
        t = head
        remaining = budget - 1
        while remaining > 0 and self.rng.random() < 0.5:
            take = self.rng.randint(1, remaining)
            r = self.rng.random()
            if take >= 5 and r < 0.35:
                arg = self.redex(take, vstack, mstack)
            elif r < 0.6:
                arg = self.data_ish(take, vstack, mstack)
            else:
                arg = self.term(take, vstack, mstack)
            t = indexed.App(t, arg)
            remaining -= take
        return t

    def leaf(self, vstack, mstack) -> indexed.Term:
        if self.rng.random() < 0.45:
            levels = [(l, a) for l, a in enumerate(vstack, start=1) if a > 0]
            if levels and (self.cfg.closed or self.rng.random() < 0.6):
                l, a = self.rng.choice(levels)
                return indexed.VarIdx(l, self.rng.randint(1, a))
            if not self.cfg.closed:
                return indexed.VarIdx(
                    len(vstack) + self.rng.randint(1, MAX_FREE_PRIMARY), 1)
        levels = [(l, a) for l, a in enumerate(mstack, start=1) if a > 0]
        if levels and self.rng.random() < 0.5:
            l, a = self.rng.choice(levels)
            return indexed.MatchIdx(l, self.rng.randint(1, a))
        return indexed.MatchIdx(
            len(mstack) + self.rng.randint(1, MAX_FREE_PRIMARY), 1)

    def abs(self, budget: int, vstack, mstack) -> indexed.Term:
        n = 0 if self.rng.random() < 0.08 else self.rng.randint(1, self.cfg.max_arity)
        pat_budget = max(n + 1, (budget - 1) // 2)
        pattern = self.pattern(pat_budget, n, vstack, mstack)
        body = self.term(max(1, budget - 1 - indexed.term_size(pattern)),
                         (n,) + vstack, mstack)
        return indexed.Abs(n, pattern, body)

    def pattern(self, budget: int, n: int, vstack, mstack) -> indexed.Term:
        mstack2 = (n,) + mstack
        if not self.cfg.require_theta_in_pattern and self.rng.random() < 0.5:
            return self.term(budget, vstack, mstack2)
        slots = list(range(1, n + 1))
        self.rng.shuffle(slots)
        items: list[indexed.Term] = [indexed.MatchIdx(1, j) for j in slots]
        extra = budget - len(items) - 1
        while extra > 0 and self.rng.random() < 0.4:
            take = self.rng.randint(1, extra)
            piece = (self.data_ish(take, vstack, mstack2)
                     if self.rng.random() < 0.6
                     else self.term(take, vstack, mstack2))
            items.insert(self.rng.randint(0, len(items)), piece)
            extra -= take
        r = self.rng.random()
        levels = [(l, a) for l, a in enumerate(vstack, start=1) if a > 0]
        head: indexed.Term
        if r < 0.1 and not self.cfg.closed:
            head = indexed.VarIdx(
                len(vstack) + self.rng.randint(1, MAX_FREE_PRIMARY), 1)
        elif r < 0.1 and levels:
            l, a = self.rng.choice(levels)
            head = indexed.VarIdx(l, self.rng.randint(1, a))
        else:
            head = indexed.MatchIdx(
                len(mstack2) + self.rng.randint(1, MAX_FREE_PRIMARY), 1)
        if not items:
            return head
        if isinstance(items[0], indexed.MatchIdx) and r < 0.75:
            head = items.pop(0)
        t = head
        for it in items:
            t = indexed.App(t, it)
        return t


def gen_term(cfg: GenConfig, side: str):
    """Deterministic in the seed; indexed output is always well-formed and
    named output has duplicate-free binders covered by their patterns."""
    rng = random.Random(cfg.seed)
    budget = rng.randint(max(1, cfg.max_size * 2 // 3), cfg.max_size)
    if side == "named":
        return _NamedGen(cfg, rng).term(budget, (), ())
    if side == "indexed":
        return _IdxGen(cfg, rng).term(budget, (), ())
    raise ValueError(f"unknown side {side!r}")


# ---------------------------------------------------------------------------
# The relation between the calculi: an indexed term is related to a named
# term when translating it is alpha-equal to the named term; by invertibility
# this coincides with translating the named term and comparing modulo
# secondary indices.  Both routes share one table, the default rows of the
# named side (the finite prefix of the fixed enumeration that covers the
# pair), and must agree; a disagreement is an engine bug.


@dataclass(frozen=True)
class RelatedPair:
    indexed: indexed.Term
    named: named.Term


def related(t: indexed.Term, s: named.Term) -> bool:
    rows = translate.default_rows_for_named(s)
    try:
        via_named = named.alpha_eq(translate.to_named(t, rows, rows), s)
    except EngineError:
        via_named = False  # a free index of t has no name: cannot be related
    via_indexed = indexed.eq_mod_secondary(
        translate.to_indexed(s, rows, rows), t)
    if via_named != via_indexed:
        raise OracleDisagreement(
            f"translation routes disagree on {syntax.unparse(s)} / "
            f"{syntax.unparse(t)}: alpha={via_named} eqmod2={via_indexed}")
    return via_named


def make_pair(cfg: GenConfig, generate_side: str = "indexed") -> RelatedPair:
    if generate_side == "indexed":
        t = gen_term(cfg, "indexed")
        return RelatedPair(t, translate.to_named_default(t))
    s = gen_term(cfg, "named")
    return RelatedPair(translate.to_indexed_default(s), s)


# ---------------------------------------------------------------------------
# One-step bisimulation diagrams.


@dataclass
class DiagramReport:
    indexed_term: str
    named_term: str
    positions: list[str]
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_bisim_step(pair: RelatedPair) -> DiagramReport:
    """Redex positions must coincide, and stepping both sides at any shared
    position must land on a related pair again."""
    t, s = pair.indexed, pair.named
    ridx = indexed.redexes(t)
    rnam = named.redexes(s)
    report = DiagramReport(syntax.unparse(t), syntax.unparse(s),
                           ["/".join(p) or "<root>" for p in ridx])
    if set(ridx) != set(rnam):
        report.violations.append({
            "kind": "position-mismatch",
            "indexed_positions": sorted("/".join(p) for p in ridx),
            "named_positions": sorted("/".join(p) for p in rnam),
        })
        return report
    for pos in ridx:
        t2 = indexed.step(t, pos)
        s2 = named.step(s, pos)
        if not related(t2, s2):
            report.violations.append({
                "kind": "diagram",
                "position": "/".join(pos) or "<root>",
                "indexed_reduct": syntax.unparse(t2),
                "named_reduct": syntax.unparse(s2),
            })
    return report


# ---------------------------------------------------------------------------
# Bounded confluence.  The full fan-out is enumerated to the given depth;
# states are deduplicated by a canonical key (alpha for named, canonical
# secondary indices for indexed), so distinct keys are distinct classes.


@dataclass
class ConfluenceReport:
    term: str
    states: int
    normal_forms: list[str]
    unjoined_peaks: list[dict] = field(default_factory=list)
    budget_exceeded: bool = False

    @property
    def ok(self) -> bool:
        return (not self.unjoined_peaks and not self.budget_exceeded
                and len(self.normal_forms) <= 1)


def _side_ops(side: str):
    if side == "named":
        return named.alpha_key, named.redexes, named.step
    return (lambda u: syntax.unparse(indexed.canonicalize_secondary(u)),
            indexed.redexes, indexed.step)


def check_confluence_bounded(t, depth: int, max_states: int = 100_000) -> ConfluenceReport:
    side = syntax.term_side(t)
    key, redexes, step = _side_ops(side)
    k0 = key(t)
    seen: dict[str, object] = {k0: t}
    succs: dict[str, list[str]] = {}
    report = ConfluenceReport(syntax.unparse(t), 0, [])
    frontier = {k0: t}
    for _ in range(depth):
        nxt: dict[str, object] = {}
        for k, u in sorted(frontier.items()):
            out = []
            for pos in redexes(u):
                v = step(u, pos)
                kv = key(v)
                out.append(kv)
                if kv not in seen:
                    seen[kv] = v
                    nxt[kv] = v
            succs[k] = sorted(set(out))
            if len(seen) > max_states:
                report.states = len(seen)
                report.budget_exceeded = True
                return report
        frontier = nxt
        if not frontier:
            break
    report.states = len(seen)
    report.normal_forms = sorted(k for k, u in seen.items() if not redexes(u))

    reach_cache: dict[str, frozenset[str]] = {}

    def reach(k: str) -> frozenset[str]:
        cached = reach_cache.get(k)
        if cached is not None:
            return cached
        out = {k}
        stack = [k]
        while stack:
            cur = stack.pop()
            for k2 in succs.get(cur, ()):
                if k2 not in out:
                    out.add(k2)
                    stack.append(k2)
        result = frozenset(out)
        reach_cache[k] = result
        return result

    for k in sorted(succs):
        arms = succs[k]
        for i in range(len(arms)):
            for j in range(i + 1, len(arms)):
                if not (reach(arms[i]) & reach(arms[j])):
                    report.unjoined_peaks.append({
                        "peak": k, "left": arms[i], "right": arms[j]})
    return report


# ---------------------------------------------------------------------------
# Structural shrinking: failing samples are reduced by replacing subtrees
# with a leaf that stays free (and keeps indexed terms well-formed).


def _positions_with_vdepth(t):
    out = []

    def walk(u, path, vd):
        out.append((path, u, vd))
        if isinstance(u, (named.App, indexed.App)):
            walk(u.fun, path + ("f",), vd)
            walk(u.arg, path + ("a",), vd)
        elif isinstance(u, (named.Abs, indexed.Abs)):
            walk(u.pattern, path + ("p",), vd)
            walk(u.body, path + ("b",), vd + 1)

    walk(t, (), 0)
    return out


def shrink_term(t, still_failing) -> object:
    """Greedy structural shrink: keep replacing the largest replaceable
    subtree with a fresh leaf while the predicate still fails."""
    side = syntax.term_side(t)
    size = named.term_size if side == "named" else indexed.term_size
    from .core import replace_at
    changed = True
    while changed:
        changed = False
        cands = [(p, u, vd) for (p, u, vd) in _positions_with_vdepth(t)
                 if size(u) > 1]
        cands.sort(key=lambda c: -size(c[1]))
        for path, _, vd in cands:
            leaf = (named.Var("x1") if side == "named"
                    else indexed.VarIdx(vd + 1, 1))
            cand = replace_at(t, path, leaf)
            try:
                if still_failing(cand):
                    t = cand
                    changed = True
                    break
            except Exception:
                continue
    return t


# ---------------------------------------------------------------------------
# Lemma suite.  Each property draws its own instances from a per-sample rng
# and returns None (pass) or a counterexample description.


def _rows_covering_indexed(t_list, width: int, var_base: str, match_base: str):
    """Tables wide and tall enough for every free index of the terms."""
    vneed = mneed = 0
    for t in t_list:
        vneed = max([vneed] + [i for (i, _) in indexed.fv(t)])
        mneed = max([mneed] + [i for (i, _) in indexed.fm(t)])
        width = max([width] + [j for (_, j) in indexed.fv(t) | indexed.fm(t)])
    vrows = tuple(tuple(f"{var_base}{r}_{c}" for c in range(1, width + 1))
                  for r in range(1, vneed + 1))
    mrows = tuple(tuple(f"{match_base}{r}_{c}" for c in range(1, width + 1))
                  for r in range(1, mneed + 1))
    return vrows, mrows


def _rows_covering_named(terms, extra=()):
    fvs: set[str] = set(extra)
    fms: set[str] = set(extra)
    for t in terms:
        fvs |= named.fv(t)
        fms |= named.fm(t)
    vrows = tuple((s,) for s in sorted(fvs))
    mrows = tuple((s,) for s in sorted(fms))
    return vrows, mrows


def _match_eq(m1, m2) -> bool:
    if isinstance(m1, Success) and isinstance(m2, Success):
        return m1.subst == m2.subst
    return m1 is m2


def _named_match_eq(m1, m2) -> bool:
    if isinstance(m1, Success) and isinstance(m2, Success):
        if set(m1.subst) != set(m2.subst):
            return False
        return all(named.alpha_eq(m1.subst[x], m2.subst[x]) for x in m1.subst)
    return m1 is m2


def _gen_idx(rng, size=12, arity=2, closed=False, require=True):
    cfg = GenConfig(seed=rng.getrandbits(48), max_size=size, max_arity=arity,
                    require_theta_in_pattern=require, closed=closed)
    return gen_term(cfg, "indexed")

def _gen_named(rng, size=12, arity=2, closed=False, require=True):
    cfg = GenConfig(seed=rng.getrandbits(48), max_size=size, max_arity=arity,
                    require_theta_in_pattern=require, closed=closed)
    return gen_term(cfg, "named")


def _prop_finc_commute_var_var(rng):
    t = _gen_idx(rng)
    l = rng.randint(0, 2)
    k = l + rng.randint(1, 2)
    lhs = indexed.finc(IdxKind.VAR, k, indexed.finc(IdxKind.VAR, l, t))
    rhs = indexed.finc(IdxKind.VAR, l, indexed.finc(IdxKind.VAR, k - 1, t))
    if lhs != rhs:
        return {"term": syntax.unparse(t), "k": k, "l": l}


def _prop_finc_commute_var_match(rng):
    t = _gen_idx(rng)
    k = rng.randint(0, 3)
    l = rng.randint(0, 3)
    lhs = indexed.finc(IdxKind.VAR, k, indexed.finc(IdxKind.MATCH, l, t))
    rhs = indexed.finc(IdxKind.MATCH, l, indexed.finc(IdxKind.VAR, k, t))
    if lhs != rhs:
        return {"term": syntax.unparse(t), "k": k, "l": l}


def _prop_fdec_of_finc(rng):
    t = _gen_idx(rng)
    k = rng.randint(0, 3)
    if indexed.fdec(IdxKind.VAR, k, indexed.finc(IdxKind.VAR, k, t)) != t:
        return {"term": syntax.unparse(t), "k": k}


def _prop_finc_of_fdec_iff(rng):
    t = _gen_idx(rng)
    k = rng.randint(0, 3)
    boundary = any(i == k + 1 for (i, _) in indexed.fv(t))
    try:
        back = indexed.finc(IdxKind.VAR, k, indexed.fdec(IdxKind.VAR, k, t))
    except indexed.DanglingIndex:
        if boundary:
            return None
        return {"term": syntax.unparse(t), "k": k, "reason": "unexpected error"}
    if boundary:
        return {"term": syntax.unparse(t), "k": k, "reason": "error expected"}
    if back != t:
        return {"term": syntax.unparse(t), "k": k, "reason": "not inverse"}


def _prop_finc_lifting(rng):
    n = rng.randint(0, 2)
    p = _gen_idx(rng, size=8)
    u = _gen_idx(rng, size=8)
    lhs = indexed.match(n, p, indexed.finc(IdxKind.VAR, 0, u))
    rhs = indexed.finc_match(0, indexed.match(n, p, u))
    if not _match_eq(lhs, rhs):
        return {"n": n, "pattern": syntax.unparse(p), "arg": syntax.unparse(u)}


def _prop_mf_preserved_to_indexed(rng):
    s = _gen_named(rng)
    t = translate.to_indexed_default(s)
    if named.is_data(s) != indexed.is_data(t):
        return {"term": syntax.unparse(s), "kind": "data"}
    if named.is_matchable_form(s) != indexed.is_matchable_form(t):
        return {"term": syntax.unparse(s), "kind": "matchable-form"}


def _prop_mf_preserved_to_named(rng):
    t = _gen_idx(rng)
    s = translate.to_named_default(t)
    if indexed.is_data(t) != named.is_data(s):
        return {"term": syntax.unparse(t), "kind": "data"}
    if indexed.is_matchable_form(t) != named.is_matchable_form(s):
        return {"term": syntax.unparse(t), "kind": "matchable-form"}


def _gen_match_problem_named(rng):
    """A binder list, a pattern over it, and an argument with a shape that is
    sometimes aligned with the pattern (all three match outcomes occur).
    Occasionally the pattern covers only part of the binder list, so the
    domain post-check trips."""
    m = rng.randint(0, 3)
    theta = tuple(f"t{i}" for i in range(1, m + 1))
    covered = theta
    if m and rng.random() < 0.25:
        covered = tuple(x for x in theta if rng.random() < 0.6)
    gen = _NamedGen(GenConfig(seed=rng.getrandbits(48)), rng)
    p = gen.pattern(rng.randint(max(1, m), m + 4), covered, (), ())

    def aligned(q):
        if isinstance(q, named.Matchable):
            if q.name in theta:
                return gen.term(rng.randint(1, 4), (), ())
            if rng.random() < 0.75:
                return q
            return named.Matchable(rng.choice(FREE_POOL))
        if isinstance(q, named.App):
            return named.App(aligned(q.fun), aligned(q.arg))
        return gen.term(rng.randint(1, 3), (), ())

    u = aligned(p) if rng.random() < 0.6 else gen.term(rng.randint(1, 6), (), ())
    return theta, p, u


def _prop_match_preserved_to_indexed(rng):
    theta, p, u = _gen_match_problem_named(rng)
    m = named.match(theta, p, u)
    vrows, mrows = _rows_covering_named([u, named.Abs(theta, p, named.Var("x1"))],
                                        extra=FREE_POOL[:1])
    mi = translate.match_to_indexed(theta, p, u, vrows, mrows)
    if isinstance(m, Success):
        expected = translate.subst_to_indexed(m.subst, theta, vrows, mrows)
        if not (isinstance(mi, Success) and mi.subst == expected):
            return {"theta": list(theta), "pattern": syntax.unparse(p),
                    "arg": syntax.unparse(u), "named": repr(m), "indexed": repr(mi)}
    elif mi is not m:
        return {"theta": list(theta), "pattern": syntax.unparse(p),
                "arg": syntax.unparse(u), "named": repr(m), "indexed": repr(mi)}


def _gen_match_problem_indexed(rng):
    n = rng.randint(0, 3)
    gen = _IdxGen(GenConfig(seed=rng.getrandbits(48)), rng)
    cover = n
    if n and rng.random() < 0.25:
        cover = rng.randint(0, n - 1)  # leave slots unbound: post-check fails
    p = gen.pattern(rng.randint(max(1, cover), cover + 4), cover, (), ())

    def aligned(q):
        if isinstance(q, indexed.MatchIdx):
            if q.i == 1:
                return gen.term(rng.randint(1, 4), (), ())
            if rng.random() < 0.75:
                return indexed.MatchIdx(q.i - 1, q.j)
            return indexed.MatchIdx(rng.randint(1, 3), 1)
        if isinstance(q, indexed.App):
            return indexed.App(aligned(q.fun), aligned(q.arg))
        return gen.term(rng.randint(1, 3), (), ())

    u = aligned(p) if rng.random() < 0.6 else gen.term(rng.randint(1, 6), (), ())
    return n, p, u


def _prop_match_preserved_to_named(rng):
    n, p, u = _gen_match_problem_indexed(rng)
    m = indexed.match(n, p, u)
    theta = tuple(f"t{i}" for i in range(1, n + 1))
    vrows, mrows = _rows_covering_indexed(
        [indexed.Abs(n, p, indexed.VarIdx(1, 1)), u], 3, "v", "c")
    gen = FreshGen(reserved={s for row in vrows + mrows for s in row} | set(theta))
    mn = translate.match_to_named(n, p, u, theta, vrows, mrows, gen)
    if isinstance(m, Success):
        expected = translate.subst_to_named(m.subst, theta, vrows, mrows)
        if not (isinstance(mn, Success) and _named_match_eq(mn, Success(expected))):
            return {"n": n, "pattern": syntax.unparse(p), "arg": syntax.unparse(u),
                    "indexed": repr(m), "named": repr(mn)}
    elif mn is not m:
        return {"n": n, "pattern": syntax.unparse(p), "arg": syntax.unparse(u),
                "indexed": repr(m), "named": repr(mn)}


def _spread_rows(symbols, count: int, filler: str):
    """Distribute symbols over `count` rows, padding empty rows with fillers."""
    rows: list[list[str]] = [[] for _ in range(count)]
    for q, s in enumerate(sorted(symbols)):
        rows[q % count].append(s)
    return tuple(tuple(r) if r else (f"{filler}{idx}",)
                 for idx, r in enumerate(rows))


def _with_deleted_rows(kept_rows, k: int, i: int):
    """Insert i-1 pad rows (disjoint from everything) after row k."""
    full = list(kept_rows[:k])
    full.extend((f"pad{r}",) for r in range(i - 1))
    full.extend(kept_rows[k:])
    return tuple(full)


def _prop_increment_to_indexed(rng):
    """Deleting unused table rows equals iterating the increment (named side)."""
    s = _gen_named(rng, size=10)
    k = rng.randint(0, 2)
    i = rng.randint(1, 3)
    extra = rng.randint(0, 2)
    n = k + i + extra
    _, mrows = _rows_covering_named([s])
    vkept = _spread_rows(named.fv(s), n - (i - 1), "fillv")
    vfull = _with_deleted_rows(vkept, k, i)
    lhs = translate.to_indexed(s, vfull, mrows)
    rhs = translate.to_indexed(s, vkept, mrows)
    for _ in range(i - 1):
        rhs = indexed.finc(IdxKind.VAR, k, rhs)
    if lhs != rhs:
        return {"term": syntax.unparse(s), "k": k, "i": i, "side": "var"}
    vrows, _ = _rows_covering_named([s])
    mkept = _spread_rows(named.fm(s), n - (i - 1), "fillm")
    mfull = _with_deleted_rows(mkept, k, i)
    lhs = translate.to_indexed(s, vrows, mfull)
    rhs = translate.to_indexed(s, vrows, mkept)
    for _ in range(i - 1):
        rhs = indexed.finc(IdxKind.MATCH, k, rhs)
    if lhs != rhs:
        return {"term": syntax.unparse(s), "k": k, "i": i, "side": "match"}


def _prop_increment_to_named(rng):
    t = _gen_idx(rng, size=10)
    k = rng.randint(0, 2)
    i = rng.randint(1, 3)
    frees = indexed.fv(t) | indexed.fm(t)
    width = max([1] + [j for (_, j) in frees])
    small_rows = max([1] + [p for (p, _) in frees])
    n = max(k + i, small_rows + (i - 1))
    full = tuple(tuple(f"v{r}_{c}" for c in range(1, width + 1))
                 for r in range(1, n + 1))
    kept = tuple(row for r, row in enumerate(full, start=1)
                 if not (k + 1 <= r <= k + i - 1))
    _, mrows = _rows_covering_indexed([t], width, "v", "c")
    inc = t
    for _ in range(i - 1):
        inc = indexed.finc(IdxKind.VAR, k, inc)
    lhs = translate.to_named(inc, full, mrows)
    rhs = translate.to_named(t, kept, mrows)
    if not named.alpha_eq(lhs, rhs):
        return {"term": syntax.unparse(t), "k": k, "i": i, "side": "var"}
    vrows, _ = _rows_covering_indexed([t], width, "v", "c")
    mfull = tuple(tuple(f"c{r}_{c}" for c in range(1, width + 1))
                  for r in range(1, n + 1))
    mkept = tuple(row for r, row in enumerate(mfull, start=1)
                  if not (k + 1 <= r <= k + i - 1))
    inc = t
    for _ in range(i - 1):
        inc = indexed.finc(IdxKind.MATCH, k, inc)
    lhs = translate.to_named(inc, vrows, mfull)
    rhs = translate.to_named(t, vrows, mkept)
    if not named.alpha_eq(lhs, rhs):
        return {"term": syntax.unparse(t), "k": k, "i": i, "side": "match"}


def _prop_subst_to_indexed(rng):
    """Applying a named substitution then translating equals translating with
    the binder list inserted as row i, substituting at level i with values
    incremented at depth i-1, and decrementing at depth i-1 afterwards."""
    m = rng.randint(1, 3)
    theta = tuple(f"t{q}" for q in range(1, m + 1))
    gen = _NamedGen(GenConfig(seed=rng.getrandbits(48)), rng)
    sigma = {x: gen.term(rng.randint(1, 5), (), ()) for x in theta}
    s = gen.term(rng.randint(1, 10), (theta,), ())
    i = rng.randint(1, 3)
    yrows = tuple((f"y{q}",) for q in range(1, i))
    vrows, mrows = _rows_covering_named([s, *sigma.values()], extra=FREE_POOL)
    vfull = yrows + (theta,) + vrows
    vouter = yrows + vrows
    lhs = translate.to_indexed(named.apply_subst(sigma, s), vouter, mrows)
    mapping = {
        j: indexed.finc(IdxKind.VAR, i - 1,
                        translate.to_indexed(sigma[x], vouter, mrows))
        for j, x in enumerate(theta, start=1)}
    inner = indexed.apply_subst(indexed.LevelSubst(i, mapping),
                                translate.to_indexed(s, vfull, mrows))
    rhs = indexed.fdec(IdxKind.VAR, i - 1, inner)
    if lhs != rhs:
        return {"s": syntax.unparse(s), "i": i,
                "sigma": {x: syntax.unparse(u) for x, u in sigma.items()}}


def _prop_subst_to_named(rng):
    """Substituting at level i then translating equals translating with an
    inserted binder row and substituting the drawn names."""
    m = rng.randint(1, 3)
    i = rng.randint(1, 3)
    gen = _IdxGen(GenConfig(seed=rng.getrandbits(48)), rng)
    values = {j: gen.term(rng.randint(1, 5), (), ()) for j in range(1, m + 1)}

    def clamp(t, vd=0):
        # keep level-i variable frees within the mapped secondaries
        match t:
            case indexed.VarIdx(p, j):
                if p - vd == i and j > m:
                    return indexed.VarIdx(p, rng.randint(1, m))
                return t
            case indexed.MatchIdx(_, _):
                return t
            case indexed.App(f, a):
                return indexed.App(clamp(f, vd), clamp(a, vd))
            case indexed.Abs(n, p_, b):
                return indexed.Abs(n, clamp(p_, vd), clamp(b, vd + 1))

    s = clamp(gen.term(rng.randint(1, 10), (), ()))
    theta = tuple(f"t{q}" for q in range(1, m + 1))
    width = 3
    vrows, mrows = _rows_covering_indexed([s, *values.values()], width, "v", "c")
    yrows = tuple(tuple(f"y{r}_{c}" for c in range(1, width + 1))
                  for r in range(1, i))
    vouter = yrows + vrows
    vfull = yrows + (theta,) + vrows
    lifted = {j: indexed.finc(IdxKind.VAR, i - 1, u) for j, u in values.items()}
    inner = indexed.fdec(IdxKind.VAR, i - 1,
                         indexed.apply_subst(indexed.LevelSubst(i, lifted), s))
    reserved = ({sym for row in vfull + mrows for sym in row}
                | set(theta))
    lhs = translate.to_named(inner, vouter, mrows, FreshGen(reserved=set(reserved)))
    named_sigma = {theta[j - 1]: translate.to_named(
        u, vouter, mrows, FreshGen(reserved=set(reserved)))
        for j, u in values.items()}
    rhs = named.apply_subst(
        named_sigma,
        translate.to_named(s, vfull, mrows, FreshGen(reserved=set(reserved))))
    if not named.alpha_eq(lhs, rhs):
        return {"s": syntax.unparse(s), "i": i, "m": m}


def _prop_invertibility_indexed(rng):
    t = _gen_idx(rng, size=20)
    back = translate.to_indexed_default(translate.to_named_default(t))
    if back != t:
        return {"term": syntax.unparse(t), "back": syntax.unparse(back)}
    if not indexed.eq_mod_secondary(back, t):
        return {"term": syntax.unparse(t), "reason": "eq-mod-secondary"}


def _prop_invertibility_named(rng):
    s = _gen_named(rng, size=20)
    back = translate.to_named_default(translate.to_indexed_default(s))
    if not named.alpha_eq(back, s):
        return {"term": syntax.unparse(s), "back": syntax.unparse(back)}


def _prop_wf_preserved_by_step(rng):
    t = _gen_idx(rng)
    for pos in indexed.redexes(t):
        t2 = indexed.step(t, pos)
        err = indexed.check_well_formed(t2)
        if err:
            return {"term": syntax.unparse(t), "pos": "/".join(pos) or "<root>",
                    "reduct": syntax.unparse(t2), "violation": err}


def _prop_match_success_domain(rng):
    n, p, u = _gen_match_problem_indexed(rng)
    m = indexed.match(n, p, u)
    if isinstance(m, Success):
        if set(m.subst.mapping) != set(range(1, n + 1)) or m.subst.level != 1:
            return {"n": n, "pattern": syntax.unparse(p), "arg": syntax.unparse(u),
                    "domain": sorted(m.subst.mapping)}


def _prop_canonicalize_idempotent(rng):
    t = _gen_idx(rng)
    c1 = indexed.canonicalize_secondary(t)
    if indexed.canonicalize_secondary(c1) != c1:
        return {"term": syntax.unparse(t)}


def _prop_canonicalize_step_commute(rng):
    t = _gen_idx(rng)
    c = indexed.canonicalize_secondary(t)
    for pos in indexed.redexes(t):
        lhs = indexed.canonicalize_secondary(indexed.step(t, pos))
        rhs = indexed.canonicalize_secondary(indexed.step(c, pos))
        if lhs != rhs:
            return {"term": syntax.unparse(t), "pos": "/".join(pos) or "<root>"}


def _prop_closed_under_reduction(rng):
    t = _gen_idx(rng, closed=True)
    if indexed.fv(t):
        return {"term": syntax.unparse(t), "reason": "generator emitted open term"}
    for pos in indexed.redexes(t):
        t2 = indexed.step(t, pos)
        if indexed.fv(t2):
            return {"term": syntax.unparse(t), "pos": "/".join(pos) or "<root>",
                    "reduct": syntax.unparse(t2)}


def _prop_fresh_binders_disjoint(rng):
    t = _gen_idx(rng)
    rows = translate.default_rows_for_indexed(t)
    table_syms = {s for row in rows for s in row}
    s = translate.to_named_default(t)

    binders: list[str] = []

    def collect(u):
        if isinstance(u, named.Abs):
            binders.extend(u.theta)
            collect(u.pattern)
            collect(u.body)
        elif isinstance(u, named.App):
            collect(u.fun)
            collect(u.arg)

    collect(s)
    if len(set(binders)) != len(binders) or set(binders) & table_syms:
        return {"term": syntax.unparse(t), "binders": binders}


PROPERTIES = {
    "finc-commute-var-var": _prop_finc_commute_var_var,
    "finc-commute-var-match": _prop_finc_commute_var_match,
    "fdec-of-finc-identity": _prop_fdec_of_finc,
    "finc-of-fdec-iff": _prop_finc_of_fdec_iff,
    "finc-lifting-over-match": _prop_finc_lifting,
    "matchable-form-to-indexed": _prop_mf_preserved_to_indexed,
    "matchable-form-to-named": _prop_mf_preserved_to_named,
    "match-preservation-to-indexed": _prop_match_preserved_to_indexed,
    "match-preservation-to-named": _prop_match_preserved_to_named,
    "increment-lemma-to-indexed": _prop_increment_to_indexed,
    "increment-lemma-to-named": _prop_increment_to_named,
    "substitution-lemma-to-indexed": _prop_subst_to_indexed,
    "substitution-lemma-to-named": _prop_subst_to_named,
    "invertibility-indexed": _prop_invertibility_indexed,
    "invertibility-named": _prop_invertibility_named,
    "wf-preserved-by-step": _prop_wf_preserved_by_step,
    "match-success-domain": _prop_match_success_domain,
    "canonicalize-idempotent": _prop_canonicalize_idempotent,
    "canonicalize-step-commute": _prop_canonicalize_step_commute,
    "closed-under-reduction": _prop_closed_under_reduction,
    "fresh-binders-disjoint": _prop_fresh_binders_disjoint,
}


@dataclass
class PropertyResult:
    name: str
    samples: int
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class SuiteReport:
    suite: str
    seed: int
    count: int
    results: list = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and all(
            getattr(r, "ok", True) for r in self.results)

    def to_json(self) -> dict:
        out = {"suite": self.suite, "seed": self.seed, "count": self.count,
               "ok": self.ok, "violations": self.violations}
        if self.suite == "lemmas":
            out["properties"] = [
                {"property": r.name, "samples": r.samples,
                 "status": "pass" if r.ok else "fail", "failures": r.failures}
                for r in self.results]
        return out

    def render_text(self) -> str:
        lines = [f"suite: {self.suite}  seed: {self.seed}  count: {self.count}"]
        if self.suite == "lemmas":
            for r in self.results:
                status = "pass" if r.ok else "FAIL"
                lines.append(f"  {r.name:36s} {r.samples:6d} samples  {status}")
                for f in r.failures[:3]:
                    lines.append(f"    counterexample: {f}")
        for v in self.violations[:10]:
            lines.append(f"  violation: {v}")
        lines.append("result: " + ("ok" if self.ok else
                                   f"{len(self.violations)} violation(s)"))
        return "\n".join(lines)


def run_lemma_suite(seed: int, count: int, jobs: int = 1,
                    properties=None) -> SuiteReport:
    names = sorted(properties or PROPERTIES)
    report = SuiteReport("lemmas", seed, count)
    units = [(name, seed, i) for name in names for i in range(count)]
    outcomes = _parallel_map(_lemma_unit, units, jobs)
    by_name: dict[str, PropertyResult] = {
        name: PropertyResult(name, count) for name in names}
    for (name, _, i), failure in zip(units, outcomes):
        if failure is not None:
            failure = dict(failure)
            failure["seed"] = f"{seed}:{name}:{i}"
            by_name[name].failures.append(failure)
    report.results = [by_name[name] for name in names]
    for r in report.results:
        for f in r.failures:
            report.violations.append({"property": r.name, **f})
    return report


def _lemma_unit(unit):
    name, seed, i = unit
    rng = random.Random(f"{seed}:{name}:{i}")
    return PROPERTIES[name](rng)


def run_bisim_suite(seed: int, count: int, max_size: int = 20,
                    jobs: int = 1) -> SuiteReport:
    report = SuiteReport("bisim", seed, count)
    units = [(seed + i, max_size, "indexed" if i % 2 == 0 else "named")
             for i in range(count)]
    for (sample_seed, _, _), out in zip(units, _parallel_map(_bisim_unit, units, jobs)):
        for v in out:
            report.violations.append({"seed": sample_seed, **v})
    return report


def _bisim_unit(unit):
    sample_seed, max_size, side = unit
    cfg = GenConfig(seed=sample_seed, max_size=max_size)
    pair = make_pair(cfg, side)
    out = []
    if not related(pair.indexed, pair.named):
        out.append({"kind": "not-related",
                    "indexed": syntax.unparse(pair.indexed),
                    "named": syntax.unparse(pair.named)})
        return out
    rep = check_bisim_step(pair)
    if rep.violations:
        seed_term = pair.indexed if side == "indexed" else pair.named

        def still_fails(t2):
            p2 = (RelatedPair(t2, translate.to_named_default(t2))
                  if side == "indexed"
                  else RelatedPair(translate.to_indexed_default(t2), t2))
            return bool(check_bisim_step(p2).violations)

        shrunk = shrink_term(seed_term, still_fails)
        for v in rep.violations:
            v["shrunk"] = syntax.unparse(shrunk)
        out.extend(rep.violations)
    return out


def run_confluence_suite(seed: int, count: int, max_size: int = 12,
                         depth: int = 4, jobs: int = 1) -> SuiteReport:
    report = SuiteReport("confluence", seed, count)
    units = [(seed + i, max_size, depth, "indexed" if i % 2 == 0 else "named")
             for i in range(count)]
    for (sample_seed, _, _, _), out in zip(units,
                                           _parallel_map(_confluence_unit, units, jobs)):
        for v in out:
            report.violations.append({"seed": sample_seed, **v})
    return report


def _confluence_unit(unit):
    sample_seed, max_size, depth, side = unit
    cfg = GenConfig(seed=sample_seed, max_size=max_size)
    t = gen_term(cfg, side)
    rep = check_confluence_bounded(t, depth)
    out = []
    if rep.budget_exceeded:
        out.append({"kind": "budget-exceeded", "term": rep.term,
                    "states": rep.states})
    for peak in rep.unjoined_peaks:
        out.append({"kind": "unjoined-peak", "term": rep.term, **peak})
    if len(rep.normal_forms) > 1:
        out.append({"kind": "multiple-normal-forms", "term": rep.term,
                    "normal_forms": rep.normal_forms})
    return out


def _parallel_map(fn, items, jobs: int):
    if jobs <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))

"""Harness: generators, the relation between the calculi, bisimulation
diagrams, bounded confluence, shrinking, and the lemma suite runner."""
from purepat import harness, indexed, named
from purepat.harness import (
    GenConfig,
    RelatedPair,
    check_bisim_step,
    check_confluence_bounded,
    gen_term,
    make_pair,
    related,
    run_bisim_suite,
    run_confluence_suite,
    run_lemma_suite,
    shrink_term,
)
from purepat.syntax import parse_indexed as pi
from purepat.syntax import parse_named as pn

ELIM = pn(r"\[x] ^x . (\[y] x ^y . y)")
ELIM_DB = pi(r"\{1} ^1.1 . (\{1} 1.1 ^1.1 . 1.1)")
ELIM_ARG = pn(r"\[z] ^z . (^c z) ^n")
ELIM_DB_ARG = pi(r"\{1} ^1.1 . (^1.1 1.1) ^2.1")


def test_gen_is_deterministic():
    cfg = GenConfig(seed=424242, max_size=20)
    assert gen_term(cfg, "named") == gen_term(cfg, "named")
    assert gen_term(cfg, "indexed") == gen_term(cfg, "indexed")
    assert gen_term(GenConfig(seed=1, max_size=20), "indexed") != \
        gen_term(GenConfig(seed=2, max_size=20), "indexed")


def test_gen_single_leaf():
    t = gen_term(GenConfig(seed=1, max_size=1), "named")
    assert isinstance(t, (named.Var, named.Matchable))


def test_gen_indexed_always_well_formed():
    for seed in range(10_000):
        t = gen_term(GenConfig(seed=seed, max_size=12), "indexed")
        assert indexed.well_formed(t)


def test_gen_named_binders_duplicate_free_and_covered():
    for seed in range(1000):
        t = gen_term(GenConfig(seed=seed, max_size=16), "named")

        def walk(u):
            if isinstance(u, named.Abs):
                assert len(set(u.theta)) == len(u.theta)
                assert set(u.theta) <= named.fm(u.pattern)
                walk(u.pattern)
                walk(u.body)
            elif isinstance(u, named.App):
                walk(u.fun)
                walk(u.arg)

        walk(t)


def test_gen_indexed_binders_covered():
    for seed in range(1000):
        t = gen_term(GenConfig(seed=seed, max_size=16), "indexed")

        def walk(u):
            if isinstance(u, indexed.Abs):
                bound = {j for (i, j) in indexed.fm(u.pattern) if i == 1}
                assert bound == set(range(1, u.arity + 1))
                walk(u.pattern)
                walk(u.body)
            elif isinstance(u, indexed.App):
                walk(u.fun)
                walk(u.arg)

        walk(t)


def test_gen_respects_closed():
    for seed in range(500):
        assert not named.fv(gen_term(
            GenConfig(seed=seed, max_size=16, closed=True), "named"))
        assert not indexed.fv(gen_term(
            GenConfig(seed=seed, max_size=16, closed=True), "indexed"))


# ---------------------------------------------------------------------------
# The relation.


def test_related_examples():
    assert related(ELIM_DB, ELIM)
    assert related(pi("1.1"), pn("x1"))
    assert not related(pi(r"\{1} ^1.1 . 1.1"), pn(r"\[x] ^x . ^x"))


def test_make_pair_both_directions():
    for seed in range(100):
        pair = make_pair(GenConfig(seed=seed, max_size=15), "indexed")
        assert related(pair.indexed, pair.named)
        pair = make_pair(GenConfig(seed=seed, max_size=15), "named")
        assert related(pair.indexed, pair.named)


def test_bisim_elim_pair_stepwise():
    t, s = indexed.App(ELIM_DB, ELIM_DB_ARG), named.App(ELIM, ELIM_ARG)
    assert related(t, s)
    rep = check_bisim_step(RelatedPair(t, s))
    assert rep.ok and rep.positions == ["<root>"]
    t1, s1 = indexed.step(t, ()), named.step(s, ())
    rep = check_bisim_step(RelatedPair(t1, s1))
    assert rep.ok and rep.positions == ["p"]
    t2, s2 = indexed.step(t1, ("p",)), named.step(s1, ("p",))
    rep = check_bisim_step(RelatedPair(t2, s2))
    assert rep.ok and rep.positions == []


def test_bisim_normal_forms_correspond():
    for seed in range(300):
        pair = make_pair(GenConfig(seed=seed, max_size=14), "indexed")
        assert bool(indexed.redexes(pair.indexed)) == \
            bool(named.redexes(pair.named))


def test_bisim_detects_a_broken_pair():
    # unrelated sides must be flagged, either as not related or as a
    # position mismatch
    t = pi(r"(\{1} ^1.1 . 1.1) ^1.1")
    s = pn("^x1")
    assert not related(t, s)


def test_bisim_suite_small():
    rep = run_bisim_suite(seed=0, count=200, max_size=18)
    assert rep.ok, rep.violations[:3]


# ---------------------------------------------------------------------------
# Bounded confluence.


def test_confluence_named_motivating_example():
    t = pn(r"(\[x,y] ^x ^y . y) ((\[w] ^w . ^z0 ^z1) ^z0)")
    rep = check_confluence_bounded(t, 4)
    assert rep.ok
    assert rep.normal_forms == [named.alpha_key(pn("^z1"))]
    # the premature reduct ^z0 is unreachable
    reachable = _reachable_named(t, 4)
    assert named.alpha_key(pn("^z0")) not in reachable
    assert named.alpha_key(pn("^z1")) in reachable


def _reachable_named(t, depth):
    seen = {named.alpha_key(t)}
    frontier = [t]
    for _ in range(depth):
        nxt = []
        for u in frontier:
            for pos in named.redexes(u):
                v = named.step(u, pos)
                k = named.alpha_key(v)
                if k not in seen:
                    seen.add(k)
                    nxt.append(v)
        frontier = nxt
    return seen


def test_confluence_normal_form_is_trivially_confluent():
    rep = check_confluence_bounded(pn("^c"), 4)
    assert rep.ok and rep.states == 1 and len(rep.normal_forms) == 1


def test_confluence_peak_that_joins():
    # two independent redexes: both orders converge
    t = pn(r"((\[x] ^x . x) ^c) ((\[y] ^y . y) ^d)")
    assert len(named.redexes(t)) == 2
    rep = check_confluence_bounded(t, 4)
    assert rep.ok
    assert rep.normal_forms == [named.alpha_key(pn("^c ^d"))]


def test_confluence_duplicating_redex():
    # the outer step copies the inner redex into two positions
    t = pn(r"(\[x] ^x . x x) ((\[y] ^y . y) ^c)")
    rep = check_confluence_bounded(t, 4)
    assert rep.ok
    assert rep.normal_forms == [named.alpha_key(pn("^c ^c"))]


def test_confluence_budget_flag():
    omega = pn(r"(\[x] ^x . x x) (\[x] ^x . x x)")
    rep = check_confluence_bounded(omega, 3, max_states=0)
    assert rep.budget_exceeded and not rep.ok


def test_confluence_suite_small():
    rep = run_confluence_suite(seed=0, count=60, max_size=12, depth=4)
    assert rep.ok, rep.violations[:3]


# ---------------------------------------------------------------------------
# Shrinking.


def test_shrink_term_reaches_small_witness():
    t = pn(r"^c ^d (\[x] ^x . x x) (^e (\[y] ^y . y))")

    def has_abs(u):
        if isinstance(u, named.Abs):
            return True
        return any(has_abs(getattr(u, a)) for a in ("fun", "arg")
                   if hasattr(u, a))

    small = shrink_term(t, has_abs)
    assert has_abs(small)
    # leaf-replacement shrinking: every subtree not needed by the predicate
    # collapses to a single leaf
    assert named.term_size(small) < named.term_size(t)
    assert named.term_size(small) <= 7


def test_shrink_preserves_well_formedness():
    t = gen_term(GenConfig(seed=99, max_size=20), "indexed")
    small = shrink_term(t, indexed.well_formed)
    assert indexed.well_formed(small)


# ---------------------------------------------------------------------------
# Lemma suite plumbing.


def test_lemma_suite_runs_every_property():
    rep = run_lemma_suite(seed=5, count=25)
    assert rep.ok
    assert {r.name for r in rep.results} == set(harness.PROPERTIES)
    assert all(r.samples == 25 for r in rep.results)


def test_lemma_suite_reports_are_deterministic():
    a = run_lemma_suite(seed=5, count=10).to_json()
    b = run_lemma_suite(seed=5, count=10).to_json()
    assert a == b


def test_suite_parallel_matches_serial():
    serial = run_bisim_suite(seed=3, count=60, max_size=14, jobs=1)
    parallel = run_bisim_suite(seed=3, count=60, max_size=14, jobs=4)
    assert serial.to_json() == parallel.to_json()


def test_match_problem_generators_cover_all_outcomes():
    import random

    from purepat.core import Success

    counts = {"Success": 0, "Fail": 0, "Wait": 0}
    for i in range(400):
        rng = random.Random(f"cover:{i}")
        n, p, u = harness._gen_match_problem_indexed(rng)
        m = indexed.match(n, p, u)
        counts["Success" if isinstance(m, Success) else repr(m)] += 1
    assert all(v >= 40 for v in counts.values()), counts

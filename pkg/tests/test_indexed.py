"""Indexed calculus: index arithmetic, level substitution, matching,
reduction, and secondary-index equality."""
import pytest

from purepat import indexed, named, translate
from purepat.core import (
    FAIL,
    WAIT,
    DanglingIndex,
    IllFormedTerm,
    NotARedex,
    Success,
    UnmappedSecondary,
    WaitApplication,
)
from purepat.harness import GenConfig, gen_term
from purepat.indexed import App, IdxKind, LevelSubst, fdec, finc
from purepat.syntax import parse_indexed as pi
from purepat.syntax import parse_named as pn

ELIM_DB = pi(r"\{1} ^1.1 . (\{1} 1.1 ^1.1 . 1.1)")
ELIM_DB_ARG = pi(r"\{1} ^1.1 . (^1.1 1.1) ^2.1")


def seeds(n, salt=0):
    return range(salt, salt + n)


def gen(seed, size=14, **kw):
    return gen_term(GenConfig(seed=seed, max_size=size, **kw), "indexed")


# ---------------------------------------------------------------------------
# Free pairs and well-formedness.


def test_fv_fm_examples():
    assert indexed.fv(ELIM_DB) == set() and indexed.fm(ELIM_DB) == set()
    both = pi(r"\{2} ^1.1 ^1.2 . (\{0} 1.1 . 2.2)")
    assert indexed.fv(both) == set() and indexed.fm(both) == set()
    assert indexed.fv(pi("1.1")) == {(1, 1)}
    assert indexed.fm(pi("^3.1")) == {(3, 1)}
    assert indexed.fm(ELIM_DB_ARG) == {(1, 1), (2, 1)}


def test_well_formed_examples():
    assert indexed.well_formed(pi(r"\{1} ^1.1 . 1.1"))
    assert not indexed.well_formed(pi("^1.2"))
    assert not indexed.well_formed(pi(r"\{1} ^1.2 . 1.1"))
    assert "secondary" in indexed.check_well_formed(pi(r"\{1} ^1.2 . 1.1"))


def test_well_formed_diagnostics_name_position():
    msg = indexed.check_well_formed(pi(r"^1.1 (\{1} ^1.2 . 1.1)"))
    assert "a" in msg and "arity 1" in msg


# ---------------------------------------------------------------------------
# Index arithmetic.


def test_finc_examples():
    assert finc(IdxKind.VAR, 0, pi("1.1")) == pi("2.1")
    assert finc(IdxKind.VAR, 1, pi("1.1")) == pi("1.1")
    assert finc(IdxKind.VAR, 0, pi("^1.1")) == pi("^1.1")
    assert finc(IdxKind.VAR, 0, pi(r"\{1} 1.1 . 1.1")) == pi(r"\{1} 2.1 . 1.1")
    assert finc(IdxKind.MATCH, 0, pi(r"\{1} ^1.1 . ^1.1")) == \
        pi(r"\{1} ^1.1 . ^2.1")


def test_fdec_examples():
    assert fdec(IdxKind.VAR, 0, pi("2.1")) == pi("1.1")
    with pytest.raises(DanglingIndex):
        fdec(IdxKind.VAR, 0, pi("1.1"))
    with pytest.raises(DanglingIndex):
        fdec(IdxKind.VAR, 1, pi(r"\{1} ^1.1 . 3.1"))  # 2.1 free: boundary at 1


def test_fdec_inverts_finc_on_corpus():
    for seed in seeds(500):
        t = gen(seed)
        for k in range(3):
            assert fdec(IdxKind.VAR, k, finc(IdxKind.VAR, k, t)) == t
            assert fdec(IdxKind.MATCH, k, finc(IdxKind.MATCH, k, t)) == t


def test_finc_of_fdec_iff_boundary():
    for seed in seeds(300):
        t = gen(seed)
        for k in range(3):
            boundary = any(i == k + 1 for (i, _) in indexed.fv(t))
            if boundary:
                with pytest.raises(DanglingIndex):
                    fdec(IdxKind.VAR, k, t)
            else:
                assert finc(IdxKind.VAR, k, fdec(IdxKind.VAR, k, t)) == t


def test_finc_commutation_lemma():
    for seed in seeds(300):
        t = gen(seed)
        for l in range(2):
            for k in range(l + 1, 4):
                assert finc(IdxKind.VAR, k, finc(IdxKind.VAR, l, t)) == \
                    finc(IdxKind.VAR, l, finc(IdxKind.VAR, k - 1, t))
        assert finc(IdxKind.VAR, 2, finc(IdxKind.MATCH, 1, t)) == \
            finc(IdxKind.MATCH, 1, finc(IdxKind.VAR, 2, t))


def test_finc_match_examples():
    assert indexed.finc_match(0, FAIL) is FAIL
    assert indexed.finc_match(0, WAIT) is WAIT
    lifted = indexed.finc_match(0, Success(LevelSubst(1, {1: pi("1.1")})))
    assert lifted == Success(LevelSubst(1, {1: pi("2.1")}))


def test_finc_lifting_over_match():
    for seed in seeds(400):
        n = seed % 3
        p = gen(seed + 1, size=8)
        u = gen(seed + 2, size=8)
        lhs = indexed.match(n, p, finc(IdxKind.VAR, 0, u))
        rhs = indexed.finc_match(0, indexed.match(n, p, u))
        if isinstance(lhs, Success):
            assert lhs.subst == rhs.subst
        else:
            assert lhs is rhs


# ---------------------------------------------------------------------------
# Substitution at a level.


def test_subst_base_cases():
    u = pi(r"^9.1")
    assert indexed.apply_subst(LevelSubst(1, {1: u}), pi("1.1")) == u
    assert indexed.apply_subst(LevelSubst(1, {1: u}), pi("2.1")) == pi("2.1")
    assert indexed.apply_subst(LevelSubst(1, {1: u}), pi("^1.1")) == pi("^1.1")
    with pytest.raises(UnmappedSecondary):
        indexed.apply_subst(LevelSubst(1, {1: u}), pi("1.2"))


def test_subst_pattern_clause_lifts_matchables():
    sigma = LevelSubst(1, {1: ELIM_DB_ARG})
    body = pi(r"\{1} 1.1 ^1.1 . 1.1")
    out = indexed.apply_subst(sigma, body)
    assert out == pi(r"\{1} (\{1} ^1.1 . (^2.1 1.1) ^3.1) ^1.1 . 1.1")


def test_subst_body_clause_raises_level():
    sigma = LevelSubst(1, {1: pi("1.1")})
    out = indexed.apply_subst(sigma, pi(r"\{1} ^1.1 . 2.1"))
    assert out == pi(r"\{1} ^1.1 . 2.1")  # inner 2.1 is level 2 -> replaced
    # with a value whose variable got incremented
    sigma2 = LevelSubst(1, {1: pi("3.1")})
    assert indexed.apply_subst(sigma2, pi(r"\{1} ^1.1 . 2.1")) == \
        pi(r"\{1} ^1.1 . 4.1")


# ---------------------------------------------------------------------------
# Matchable forms and matching.


def test_matchable_form_examples():
    assert indexed.is_matchable_form(pi("^1.1 2.1"))
    assert indexed.is_data(pi("^1.1 2.1"))
    assert not indexed.is_matchable_form(pi(r"(\{1} ^1.1 . 1.1) ^1.1"))
    assert indexed.is_matchable_form(pi(r"\{0} ^1.1 . ^1.1"))


def test_match_free_matchable_shifted_by_redex_binder():
    m = indexed.match(1, pi("^2.1 ^1.1"), App(pi("^1.1"), pi("^3.1")))
    assert m == Success(LevelSubst(1, {1: pi("^3.1")}))


def test_match_bound_matchable_binds_anything():
    for u in [pi("^1.1"), ELIM_DB, pi(r"(\{1} ^1.1 . 1.1) 2.1")]:
        assert indexed.match(1, pi("^1.1"), u) == Success(LevelSubst(1, {1: u}))


def test_match_domain_post_condition():
    for u in [pi("^1.1"), pi("2.1"), ELIM_DB]:
        assert indexed.match(2, pi("^1.1"), u) is FAIL


def test_match_waits_on_unevaluated_argument():
    m = indexed.match(1, pi("^1.1 ^1.1"), pi(r"(\{1} ^1.1 . 1.1) ^2.1"))
    assert m is WAIT


def test_match_secondaries_must_agree_on_free_matchables():
    assert indexed.match(0, pi("^2.1"), pi("^1.1")) == Success(LevelSubst(1, {}))
    assert indexed.match(0, pi("^2.1"), pi("^1.2")) is FAIL
    assert indexed.match(0, pi("^3.1"), pi("^1.1")) is FAIL
    assert indexed.match(0, pi("^2.1"), pi("1.1")) is WAIT


def test_apply_match():
    assert indexed.apply_match(FAIL, pi("1.1")) == pi(r"\{1} ^1.1 . 1.1")
    u = pi("^4.1")
    assert indexed.apply_match(Success(LevelSubst(1, {1: u})), pi("1.1")) == u
    with pytest.raises(WaitApplication):
        indexed.apply_match(WAIT, pi("1.1"))


# ---------------------------------------------------------------------------
# Reduction.


def test_redexes_examples():
    assert indexed.redexes(App(ELIM_DB, ELIM_DB_ARG)) == [()]
    t = pi(r"\{2} ((\{2} ^1.1 ^1.2 . 1.2 1.1) (^1.1 ^1.2)) . 1.1")
    assert indexed.redexes(t) == [("p",)]
    assert indexed.redexes(pi("^1.1")) == []


def test_step_golden_trace():
    t = App(ELIM_DB, ELIM_DB_ARG)
    t1 = indexed.step(t, ())
    assert t1 == pi(r"\{1} ((\{1} ^1.1 . (^2.1 1.1) ^3.1) ^1.1) . 1.1")
    t2 = indexed.step(t1, ("p",))
    assert t2 == pi(r"\{1} (^2.1 ^1.1) ^3.1 . 1.1")


def test_step_secondary_order_not_preserved():
    t = pi(r"\{2} ((\{2} ^1.1 ^1.2 . 1.2 1.1) (^1.1 ^1.2)) . 1.1")
    assert indexed.step(t, ("p",)) == pi(r"\{2} ^1.2 ^1.1 . 1.1")


def test_step_rejects_non_redex():
    with pytest.raises(NotARedex):
        indexed.step(pi("^1.1"), ())
    with pytest.raises(NotARedex):
        indexed.step(pi(r"(\{1} ^1.1 ^1.1 . 1.1) (1.1 2.1)"), ())  # wait


def test_normalize_golden():
    res = indexed.normalize(App(ELIM_DB, ELIM_DB_ARG))
    assert res.status == "normal" and res.steps == 2
    assert res.term == pi(r"\{1} (^2.1 ^1.1) ^3.1 . 1.1")


def test_normalize_leaf():
    res = indexed.normalize(pi("^1.1"))
    assert res.status == "normal" and res.steps == 0


def test_normalize_translated_confluence_example():
    s = pn(r"(\[x,y] ^x ^y . y) ((\[w] ^w . ^z0 ^z1) ^z0)")
    rows = translate.default_rows_for_named(s)
    t = translate.to_indexed(s, rows, rows)
    assert t == translate.to_indexed_default(s)
    res = indexed.normalize(t)
    # oracle: normalize on the named side, translate under the same table
    named_res = named.normalize(s)
    expected = translate.to_indexed(named_res.term, rows, rows)
    assert res.status == "normal"
    assert res.term == expected
    assert expected == pi("^2.1")


def test_wf_preserved_by_step():
    for seed in seeds(400):
        t = gen(seed, size=16)
        assert indexed.well_formed(t)
        for pos in indexed.redexes(t):
            assert indexed.well_formed(indexed.step(t, pos))


def test_closed_terms_stay_closed():
    for seed in seeds(300):
        t = gen(seed, size=16, closed=True)
        assert not indexed.fv(t)
        for pos in indexed.redexes(t):
            assert not indexed.fv(indexed.step(t, pos))


# ---------------------------------------------------------------------------
# Equality modulo secondary indices.


def test_eq_mod_secondary_examples():
    a = pi(r"\{2} ^1.1 ^1.2 . 1.1")
    b = pi(r"\{2} ^1.2 ^1.1 . 1.2")
    c = pi(r"\{2} ^1.1 ^1.2 . 1.2")
    assert indexed.eq_mod_secondary(a, b)
    assert indexed.eq_mod_secondary(a, a)
    assert not indexed.eq_mod_secondary(a, c)
    # oracle: the named images are (not) alpha-equivalent
    assert named.alpha_eq(translate.to_named_default(a),
                          translate.to_named_default(b))
    assert not named.alpha_eq(translate.to_named_default(a),
                              translate.to_named_default(c))


def test_eq_mod_secondary_matches_named_alpha_on_corpus():
    for seed in seeds(300):
        t = gen(seed, size=12)
        u = gen(seed + 13, size=12)
        assert indexed.eq_mod_secondary(t, u) == named.alpha_eq(
            translate.to_named_default(t), translate.to_named_default(u))


def test_canonicalize_idempotent_and_stable():
    for seed in seeds(300):
        t = gen(seed)
        c = indexed.canonicalize_secondary(t)
        assert indexed.canonicalize_secondary(c) == c
        assert indexed.eq_mod_secondary(t, c)


def test_canonicalize_orders_unused_slots_ascending():
    # slot 2 occurs first in the pattern, slot 1 is unused
    t = pi(r"\{2} ^1.2 . 1.2")
    assert indexed.canonicalize_secondary(t) == pi(r"\{2} ^1.1 . 1.1")


def test_canonicalize_requires_well_formed():
    with pytest.raises(IllFormedTerm):
        indexed.canonicalize_secondary(pi("^1.2"))


def test_canonicalize_commutes_with_step():
    for seed in seeds(300):
        t = gen(seed, size=14)
        c = indexed.canonicalize_secondary(t)
        for pos in indexed.redexes(t):
            lhs = indexed.canonicalize_secondary(indexed.step(t, pos))
            rhs = indexed.canonicalize_secondary(indexed.step(c, pos))
            assert lhs == rhs


def test_arity_zero_abstractions_are_legal():
    t = pi(r"(\{0} ^2.1 . ^1.1) ^1.1")
    assert indexed.match(0, pi("^2.1"), finc(IdxKind.VAR, 0, pi("^1.1"))) == \
        Success(LevelSubst(1, {}))
    assert indexed.step(t, ()) == pi("^1.1")

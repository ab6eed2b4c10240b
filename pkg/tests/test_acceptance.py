"""Acceptance suite.

One test per criterion; each prints a single pass/fail line (run with
``pytest tests/test_acceptance.py -v -s``).  Timing budgets are taken as the
best of a few repetitions after a warm-up, so interpreter jitter does not
mask a real regression.
"""
import contextlib
import io
import time

from purepat import cli, indexed, named, translate
from purepat.harness import (
    GenConfig,
    gen_term,
    run_bisim_suite,
    run_confluence_suite,
    run_lemma_suite,
    check_confluence_bounded,
)
from purepat.syntax import parse_indexed as pi
from purepat.syntax import parse_named as pn


def _report(num, name, ok, detail=""):
    line = f"acceptance criterion {num} ({name}): {'PASS' if ok else 'FAIL'}"
    if detail and not ok:
        line += f" -- {detail}"
    print(line)
    assert ok, line


def _best_time(fn, repeat=5):
    fn()  # warm-up
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _cli(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(list(argv))
    return code, buf.getvalue().strip()


def test_criterion_1_golden_trace_named():
    t = pn(r"(\[x] ^x . (\[y] x ^y . y)) (\[z] ^z . (^c z) ^n)")
    target = pn(r"\[y] (^c ^y) ^n . y")
    res = named.normalize(t)
    ok = (res.steps == 2 and res.status == "normal"
          and named.alpha_eq(res.term, target))
    elapsed = _best_time(lambda: named.normalize(t))
    _report(1, "named golden trace", ok and elapsed < 1e-3,
            f"steps={res.steps} status={res.status} time={elapsed * 1e3:.3f}ms")


def test_criterion_2_golden_trace_indexed():
    t = pi(r"(\{1} ^1.1 . (\{1} 1.1 ^1.1 . 1.1)) (\{1} ^1.1 . (^1.1 1.1) ^2.1)")
    target = pi(r"\{1} (^2.1 ^1.1) ^3.1 . 1.1")
    res = indexed.normalize(t)
    ok = (res.steps == 2 and res.status == "normal"
          and indexed.canonicalize_secondary(res.term)
          == indexed.canonicalize_secondary(target))
    elapsed = _best_time(lambda: indexed.normalize(t))
    _report(2, "indexed golden trace", ok and elapsed < 1e-3,
            f"steps={res.steps} status={res.status} time={elapsed * 1e3:.3f}ms")


def test_criterion_3_translation_example():
    s = pn(r"(\[x] ^y ^x . x) (^y z)")
    t = pi(r"(\{1} ^2.1 ^1.1 . 1.1) (^1.1 2.1)")
    tables = [["y"], ["z"]]
    fwd = translate.to_indexed(s, tables, tables)
    back = translate.to_named(t, tables, tables)
    ok = fwd == t and named.alpha_eq(back, s)
    elapsed = _best_time(lambda: translate.to_indexed(s, tables, tables))
    _report(3, "translation worked example", ok and elapsed < 1e-3,
            f"fwd={fwd == t} back_alpha={named.alpha_eq(back, s)}")


def test_criterion_4_invertibility():
    t0 = time.perf_counter()
    failures = []
    for seed in range(1000):
        t = gen_term(GenConfig(seed=seed, max_size=25), "indexed")
        back = translate.to_indexed_default(translate.to_named_default(t))
        if not indexed.eq_mod_secondary(back, t):
            failures.append(("indexed", seed))
    for seed in range(1000):
        s = gen_term(GenConfig(seed=seed + 10_000, max_size=25), "named")
        back = translate.to_named_default(translate.to_indexed_default(s))
        if not named.alpha_eq(back, s):
            failures.append(("named", seed))
    elapsed = time.perf_counter() - t0
    _report(4, "invertibility, 1000 terms each direction",
            not failures and elapsed < 10.0,
            f"failures={failures[:3]} time={elapsed:.2f}s")


def test_criterion_5_strong_bisimulation():
    t0 = time.perf_counter()
    rep = run_bisim_suite(seed=20_000, count=1000, max_size=20)
    elapsed = time.perf_counter() - t0
    _report(5, "strong bisimulation, 1000 related pairs",
            rep.ok and elapsed < 30.0,
            f"violations={rep.violations[:3]} time={elapsed:.2f}s")


def test_criterion_6_lemma_suite():
    t0 = time.perf_counter()
    rep = run_lemma_suite(seed=30_000, count=1000)
    elapsed = time.perf_counter() - t0
    bad = [r.name for r in rep.results if not r.ok]
    required = {
        "finc-commute-var-var", "finc-commute-var-match",
        "fdec-of-finc-identity", "finc-of-fdec-iff",
        "finc-lifting-over-match",
        "matchable-form-to-indexed", "matchable-form-to-named",
        "match-preservation-to-indexed", "match-preservation-to-named",
        "substitution-lemma-to-indexed", "substitution-lemma-to-named",
    }
    covered = required <= {r.name for r in rep.results}
    counts_ok = all(r.samples >= 1000 for r in rep.results)
    _report(6, "lemma suite, 1000 instances per property",
            rep.ok and covered and counts_ok and elapsed < 60.0,
            f"failing={bad} time={elapsed:.2f}s")


def test_criterion_7_confluence_at_desk_scale():
    t0 = time.perf_counter()
    rep = run_confluence_suite(seed=40_000, count=200, max_size=12, depth=4)
    example = pn(r"(\[x,y] ^x ^y . y) ((\[w] ^w . ^z0 ^z1) ^z0)")
    ex_rep = check_confluence_bounded(example, 4)
    unique_nf = ex_rep.normal_forms == [named.alpha_key(pn("^z1"))]
    # enumerate everything reachable: the premature reduct never appears
    seen = {named.alpha_key(example)}
    frontier = [example]
    for _ in range(4):
        nxt = []
        for u in frontier:
            for pos in named.redexes(u):
                v = named.step(u, pos)
                k = named.alpha_key(v)
                if k not in seen:
                    seen.add(k)
                    nxt.append(v)
        frontier = nxt
    premature_unreachable = named.alpha_key(pn("^z0")) not in seen
    elapsed = time.perf_counter() - t0
    _report(7, "bounded confluence, 200 terms at depth 4",
            rep.ok and ex_rep.ok and unique_nf and premature_unreachable
            and elapsed < 60.0,
            f"violations={rep.violations[:3]} example_ok={ex_rep.ok} "
            f"unique_nf={unique_nf} premature={not premature_unreachable} "
            f"time={elapsed:.2f}s")


def test_criterion_8_matching_post_condition():
    arguments = ["^1.1", "2.1", r"\{1} ^1.1 . 1.1", r"(\{1} ^1.1 . 1.1) ^1.1",
                 "1.1 2.1"]
    cli_fail = all(
        _cli("match", "--arity", "2", "^1.1", u) == (0, "Fail")
        for u in arguments)
    never_redex = all(
        indexed.redexes(indexed.App(pi(r"\{2} ^1.1 . 1.2"), pi(u))) == []
        for u in arguments)
    _report(8, "matching post-condition",
            cli_fail and never_redex,
            f"cli_fail_for_all_U={cli_fail}; never_a_redex={never_redex} "
            "(the post-condition yields Fail, which is a decided match, so "
            "the application contracts to the identity function)")


def test_criterion_9_secondary_index_equality():
    first_pair = indexed.eq_mod_secondary(pi(r"\{2} ^1.1 ^1.2 . 1.1"),
                                          pi(r"\{2} ^1.2 ^1.1 . 1.2"))
    t = pi(r"\{2} ((\{2} ^1.1 ^1.2 . 1.2 1.1) (^1.1 ^1.2)) . 1.1")
    reduct = indexed.step(t, ("p",))
    step_ok = reduct == pi(r"\{2} ^1.2 ^1.1 . 1.1")
    reduct_pair = indexed.eq_mod_secondary(reduct, pi(r"\{2} ^1.1 ^1.2 . 1.1"))
    _report(9, "secondary-index equality",
            first_pair and step_ok and reduct_pair,
            f"first_pair={first_pair} step_ok={step_ok} "
            f"reduct_pair={reduct_pair} (the reduct swaps the slots, so its "
            r"equivalence class contains \{2} ^1.1 ^1.2 . 1.2, the second "
            "projection, not the first)")

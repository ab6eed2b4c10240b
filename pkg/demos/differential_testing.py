#!/usr/bin/env python3
"""Drive the differential test harness: the two engines check each other.

Related pairs are built by generating a term on one side and translating it;
stepping must then commute with translation position for position.  Bounded
confluence enumerates the whole reduction fan-out of small terms and checks
that peaks join and normal forms are unique.
"""
from purepat import harness, indexed, named
from purepat.syntax import unparse

print("One related pair, step by step")
print("------------------------------")
pair = harness.make_pair(harness.GenConfig(seed=20_018, max_size=18), "indexed")
print("indexed:", unparse(pair.indexed))
print("named:  ", unparse(pair.named))
report = harness.check_bisim_step(pair)
print("shared redex positions:", report.positions)
print("one-step diagrams commute:", report.ok)

print()
print("Suites (fixed seeds, deterministic)")
print("-----------------------------------")
for suite, kwargs in [
    ("bisim", dict(seed=7, count=300, max_size=18)),
    ("confluence", dict(seed=11, count=100, max_size=12, depth=4)),
]:
    runner = getattr(harness, f"run_{suite}_suite")
    rep = runner(**kwargs)
    print(f"{suite:11s} {kwargs['count']:4d} samples ->",
          "ok" if rep.ok else rep.violations[:2])

rep = harness.run_lemma_suite(seed=13, count=200)
print(f"{'lemmas':11s} {200:4d} samples ->", "ok" if rep.ok else "FAIL")
for r in rep.results:
    print(f"    {r.name:36s} {'pass' if r.ok else 'FAIL'}")

print()
print("A confluence fan-out, explicitly")
print("--------------------------------")
t = named.App(
    named.App(harness.gen_term(harness.GenConfig(seed=3, max_size=6), "named"),
              harness.gen_term(harness.GenConfig(seed=5, max_size=6), "named")),
    harness.gen_term(harness.GenConfig(seed=8, max_size=6), "named"))
conf = harness.check_confluence_bounded(t, 4)
print("term:", unparse(t))
print("states explored:", conf.states)
print("normal forms:", len(conf.normal_forms))
print("unjoined peaks:", len(conf.unjoined_peaks))

#!/usr/bin/env python3
"""Walk through pattern matching and reduction in both presentations.

The running example is the list eliminator: a function that takes a
one-argument constructor pattern and exposes the constructor's argument.
"""
from purepat import indexed, named
from purepat.core import Success
from purepat.syntax import parse_indexed, parse_named, unparse


def banner(title):
    print()
    print("=" * 64)
    print(title)
    print("=" * 64)


banner("NAMED TERMS")

elim = parse_named(r"\[x] ^x . (\[y] x ^y . y)")
cons_like = parse_named(r"\[z] ^z . (^c z) ^n")
print("eliminator:", unparse(elim))
print("argument:  ", unparse(cons_like))
print("fv(eliminator) =", named.fv(elim), " fm(argument) =",
      sorted(named.fm(cons_like)))

term = named.App(elim, cons_like)
res = named.normalize(term)
print("\nreducing", unparse(term))
for n, (pos, t) in enumerate(res.trace, start=1):
    print(f"  step {n} at {'/'.join(pos) or '<root>'}: {unparse(t)}")
print("status:", res.status)

banner("MATCH OUTCOMES")

for theta, pattern, arg in [
    (("x", "y"), r"^x ^y", r"^z0 ^z1"),          # decomposes: success
    (("x", "y"), r"^x", r"^z0"),                 # y left unbound: fail
    (("x", "y"), r"^x ^y", r"(\[w] ^w . ^z0 ^z1) ^z0"),  # unevaluated: wait
]:
    m = named.match(theta, parse_named(pattern), parse_named(arg))
    shown = ("Success " + str({k: unparse(v) for k, v in m.subst.items()})
             if isinstance(m, Success) else repr(m))
    print(f"  match_{list(theta)}({pattern}, {arg}) = {shown}")

print("\nA failed match rewrites to the identity function:")
failing = parse_named(r"(\[x,y] ^x . y) ^c")
print(" ", unparse(failing), "->", unparse(named.step(failing, ())))

banner("INDEXED TERMS (no alpha-conversion)")

elim_db = parse_indexed(r"\{1} ^1.1 . (\{1} 1.1 ^1.1 . 1.1)")
arg_db = parse_indexed(r"\{1} ^1.1 . (^1.1 1.1) ^2.1")
print("eliminator:", unparse(elim_db))
print("argument:  ", unparse(arg_db))

term_db = indexed.App(elim_db, arg_db)
res_db = indexed.normalize(term_db)
print("\nreducing", unparse(term_db))
for n, (pos, t) in enumerate(res_db.trace, start=1):
    print(f"  step {n} at {'/'.join(pos) or '<root>'}: {unparse(t)}")
print("status:", res_db.status)

banner("WHY MATCHABLE FORMS MATTER")

tricky = parse_named(r"(\[x,y] ^x ^y . y) ((\[w] ^w . ^z0 ^z1) ^z0)")
print("term:", unparse(tricky))
print("redex positions:", [("/".join(p) or "<root>") for p in named.redexes(tricky)])
print("  (the outer match waits until the argument is a matchable form,")
print("   so the premature decomposition to ^z0 can never happen)")
res = named.normalize(tricky)
print("normal form:", unparse(res.term))

#!/usr/bin/env python3
"""Translate between names and bidimensional indices, and back.

Name tables are lists of rows: the row number becomes the primary index
(distance to the binder), the position within a row the secondary index.
"""
from purepat import indexed, named, translate
from purepat.syntax import parse_indexed, parse_named, unparse

print("Explicit tables")
print("---------------")
s1 = parse_named(r"(\[x] ^y ^x . x) (^y z)")
tables = [["y"], ["z"]]
t1 = translate.to_indexed(s1, tables, tables)
print("named:  ", unparse(s1))
print("tables: V = M =", tables)
print("indexed:", unparse(t1))
back = translate.to_named(t1, tables, tables)
print("back:   ", unparse(back),
      "(alpha-equal to the original:", named.alpha_eq(back, s1), ")")

print()
print("Default tables")
print("--------------")
elim = parse_named(r"\[x] ^x . (\[y] x ^y . y)")
elim_db = translate.to_indexed_default(elim)
print("closed term:", unparse(elim))
print("translates: ", unparse(elim_db))
print("and back:   ", unparse(translate.to_named_default(elim_db)))

open_term = parse_indexed(r"\{1} (^2.1 ^1.1) ^3.1 . 1.1")
print("\nopen indexed term:", unparse(open_term))
print("free matchables:  ",
      sorted(f"{i}.{j}" for (i, j) in indexed.fm(open_term)))
named_image = translate.to_named_default(open_term)
print("named image:      ", unparse(named_image),
      "(free index i.1 is named x_i)")
print("round trip:       ",
      translate.to_indexed_default(named_image) == open_term)

print()
print("Secondary indices are a per-binder convention")
print("---------------------------------------------")
a = parse_indexed(r"\{2} ^1.1 ^1.2 . 1.1")
b = parse_indexed(r"\{2} ^1.2 ^1.1 . 1.2")
c = parse_indexed(r"\{2} ^1.1 ^1.2 . 1.2")
for u in (a, b, c):
    print(f"  {unparse(u):28s} canonical: "
          f"{unparse(indexed.canonicalize_secondary(u))}  "
          f"as named: {unparse(translate.to_named_default(u))}")
print("a == b modulo secondary indices:", indexed.eq_mod_secondary(a, b))
print("a == c modulo secondary indices:", indexed.eq_mod_secondary(a, c),
      "(c projects the other component)")

print()
print("Matches translate outcome for outcome")
print("-------------------------------------")
theta = ("x", "y")
p = parse_named(r"^x ^y")
u = parse_named(r"^z0 ^z1")
rows = translate.default_rows_for_named(u)
m_named = named.match(theta, p, u)
m_idx = translate.match_to_indexed(theta, p, u, rows, rows)
print("named: ", {k: unparse(v) for k, v in m_named.subst.items()})
print("indexed:", {f"1.{j}": unparse(v)
                   for j, v in m_idx.subst.mapping.items()})

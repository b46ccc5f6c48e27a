"""Free-group words, conjugacy classes and peripheral structures.

A peripheral structure is a finite set of pairwise non-conjugate maximal
cyclic subgroups, represented here by canonical cyclic root words.  The
demo walks through reduction, cyclic reduction, roots and canonical forms.
"""

from oneend import Basis, canonical_class, cyclic_reduce, make_peripheral_structure, root

basis = Basis(2)  # letters a, b; inverses A, B

print("free reduction:")
for text in ("abBA", "aAb", "abAB"):
    print("  %-6r -> %r" % (text, basis.format(basis.parse(text))))

print("\ncyclic reduction splits off a conjugator:")
w = basis.parse("baB")
cyc, conj = cyclic_reduce(w)
print("  baB = %s . %s . %s^-1" % (basis.format(conj), basis.format(cyc), basis.format(conj)))

print("\nroots detect proper powers:")
for text in ("aaa", "abab", "aab"):
    r, e = root(basis.parse(text))
    print("  %-6s = (%s)^%d" % (text, basis.format(r), e))

print("\ncanonical class representatives identify conjugate powers:")
for text in ("ba", "BA", "ab"):
    print("  class(%-3s) = %s" % (text, basis.format(canonical_class(basis.parse(text)).word)))

print("\na multiword collapses to its peripheral structure:")
ps = make_peripheral_structure(basis, ["aa", "aaa", "bab"])
print("  {a^2, a^3, bab} ->", ps.to_json())

ps = make_peripheral_structure(basis, ["a", "b", "ab"])
print("  {a, b, ab}      ->", ps.to_json(), "(the thrice-punctured sphere data)")

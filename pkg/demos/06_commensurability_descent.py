"""Descent in the commensurability order: surfaces are the minimal elements.

Marked subgroups (subgroup plus compatible peripheral structure) are
compared by the two-clause preorder.  Surface pairs are minimal; a rigid
pair descends strictly via its clean cover marked with the pullback minus
one class.
"""

from oneend import Basis
from oneend.order import MarkedSubgroup, compare, descend, in_poset

basis = Basis(2)

print("the torus pair is minimal:")
res = descend(MarkedSubgroup.top(basis, ["abAB"]))
print("  ", res.kind, res.surface)

print("\nthe thrice-punctured sphere too:")
res = descend(MarkedSubgroup.top(basis, ["a", "b", "ab"]))
print("  ", res.kind, res.surface)

print("\ncomparisons around an index-2 subgroup with the full pullback:")
top = MarkedSubgroup.top(basis, ["abAB"])
sub = MarkedSubgroup.from_generators(basis, ["abAB"], ["aa", "b", "abA"])
print("  full pullback vs ambient:", compare(sub, top))

print("\nthe rigid pair descends strictly:")
res = descend(MarkedSubgroup.top(basis, ["aabbAB"]))
print("  ", res.kind)
print("   cover degree:", res.verification["cover_degree"])
print("   new rank:", res.smaller.rank(), " classes kept:", res.verification["kept_classes"])
print("   strictly below:", res.verification["compare"] == "LEQ")
print("   still in the poset:", res.verification["in_poset"])
print("   (iterating descend would keep producing smaller one-ended pieces)")

"""Subgroups of free groups as folded graphs and finite covers.

Builds core graphs by folding, intersects subgroups via fiber products,
completes cores to covers, and takes normal cores and clean subgroups.
"""

from oneend import (
    Basis,
    clean_subgroup,
    elevations,
    from_generators,
    hall_complete,
    intersect,
    is_clean,
    normal_core,
    rose,
)
from oneend.stallings import cycle_graph

basis = Basis(2)

print("the subgroup <a^2, b, aba^-1> has index 2:")
g = from_generators(basis, ["aa", "b", "abA"])
print("  vertices:", g.num_vertices, " index:", g.index())
print("  contains a^2:", g.contains("aa"), " contains a:", g.contains("a"))

print("\nintersection via the pointed fiber product:")
i = intersect(from_generators(basis, ["a"]), from_generators(basis, ["aa", "b"]))
print("  <a> meet <a^2, b> contains a^2:", i.contains("aa"), " contains a:", i.contains("a"))

print("\nHall completion embeds a loop into a finite cover:")
h = hall_complete(cycle_graph(basis, "aa"))
print("  completing the a^2-cycle:", h.to_json())

print("\nnormal cores make covers regular:")
from oneend.stallings import CoverGraph

c3 = CoverGraph(basis, {1: (1, 0, 2), 2: (2, 1, 0)})
core = normal_core(c3)
print("  degree-3 non-normal cover -> regular cover of degree", core.degree)

print("\nelevations of a word to a cover (degrees sum to the cover degree):")
c2 = CoverGraph(basis, {1: (1, 0), 2: (0, 1)})
for ev in elevations(c2, basis.parse("bABaa")):
    print("  orbit %s, degree %d" % (ev.orbit, ev.degree))

print("\nclean covers: every elevation embeds as a circle:")
cover = clean_subgroup([basis.parse("abAB")], within=rose(basis))
print(
    "  clean cover for [a,b]: degree %d, clean: %s"
    % (cover.degree, is_clean(cover, [basis.parse("abAB")]))
)

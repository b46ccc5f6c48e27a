"""Whitehead graphs: minimization, cut structure and pair classification.

The Whitehead graph of a multiword records cyclic adjacencies on the
letter vertices.  Cut structure in minimal position detects free and
cyclic splittings; exhaustive ribbon search recognizes surface pairs.
"""

from oneend import Basis, classify_pair, connectivity_report, minimize, surface_recognize, whitehead_graph

basis = Basis(2)

print("greedy Whitehead descent:")
for text in ("abab", "bABaa", "abAB"):
    ws_min, moves = minimize(basis, [text])
    print(
        "  %-6s -> %-6s (%d moves)"
        % (text, basis.format(ws_min[0]), len(moves))
    )

print("\ncut analysis of minimal graphs:")
for text in ("abAB", "aabbAB"):
    g = whitehead_graph(basis, [text])
    rep = connectivity_report(g)
    print(
        "  W(%s): connected=%s cut_vertices=%s cut_edge_pairs=%d"
        % (text, rep.connected, rep.cut_vertices, len(rep.cut_edge_pairs))
    )

print("\nsurface recognition by ribbon-structure search:")
for ws in (["abAB"], ["a", "b", "ab"], ["abaB"], ["aabbAB"]):
    s = surface_recognize(basis, ws)
    print("  %-16s ->" % ",".join(ws), s if s else "NOT_SURFACE")

print("\nthe five-way pair classification:")
for ws in (["aa"], ["abAB"], ["a", "b", "ab"], ["aabbAB"]):
    print("  %-12s ->" % ",".join(ws), classify_pair(basis, ws).tag)

print("\nDOT output (paired letter vertices ranked together):")
print(whitehead_graph(basis, ["bABaa"]).to_dot())

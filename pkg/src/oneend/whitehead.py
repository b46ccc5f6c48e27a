"""Whitehead graphs, moves, minimization, cut analysis and splicing.

The Whitehead graph of a multiword has one vertex per signed letter and,
for each cyclic adjacency (x, y) in each word, one edge {x, y^-1}.  Cut
structure in minimal position detects free splittings; splicing composes
Whitehead graphs across the sheets of a finite cover.
"""

from itertools import combinations, permutations

from .errors import CapExceeded
from .words import (
    Basis,
    WordError,
    canonical_class,
    cyclic_reduce,
    invert,
    is_cyclically_reduced,
    letter_key,
    reduce_word,
)
from .stallings import elevations


class Multigraph:
    """Undirected multigraph on hashable vertices; parallel edges and loops allowed.

    Edges are an ordered list of (u, v) pairs, optionally tagged; order is
    part of the representation so reports stay deterministic.
    """

    def __init__(self, vertices, edges, tags=None):
        self.vertices = tuple(vertices)
        self._vset = set(self.vertices)
        self.edges = [tuple(e) for e in edges]
        for u, v in self.edges:
            if u not in self._vset or v not in self._vset:
                raise WordError("edge endpoint %r not a vertex" % ((u, v),))
        self.tags = list(tags) if tags is not None else None
        if self.tags is not None and len(self.tags) != len(self.edges):
            raise WordError("tags must align with edges")

    def degree(self, v):
        d = 0
        for u, w in self.edges:
            d += (u == v) + (w == v)
        return d

    def edge_multiset(self):
        """Multiset of undirected edges as a sorted tuple of normalized pairs."""
        return tuple(sorted(tuple(sorted(e, key=repr)) for e in self.edges))

    def incident(self, v):
        """Indices of edges meeting v (loops listed once)."""
        return [i for i, (u, w) in enumerate(self.edges) if u == v or w == v]

    def __repr__(self):
        return "Multigraph(%d vertices, %d edges)" % (len(self.vertices), len(self.edges))


def _components(g, skip_vertices=(), skip_edges=()):
    """Connected components as sorted tuples, brute-force BFS."""
    skip_v = set(skip_vertices)
    skip_e = set(skip_edges)
    adj = {v: [] for v in g.vertices if v not in skip_v}
    for i, (u, w) in enumerate(g.edges):
        if i in skip_e or u in skip_v or w in skip_v:
            continue
        adj[u].append(w)
        adj[w].append(u)
    seen = set()
    comps = []
    for v in adj:
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        comps.append(tuple(sorted(comp, key=repr)))
    return sorted(comps)


def is_connected(g, skip_vertices=(), skip_edges=()):
    return len(_components(g, skip_vertices, skip_edges)) <= 1


def cut_vertices_fast(g):
    """Articulation points by iterative lowpoint search (parallel-edge aware)."""
    index = {v: i for i, v in enumerate(g.vertices)}
    n = len(g.vertices)
    adj = [[] for _ in range(n)]
    for eid, (u, w) in enumerate(g.edges):
        ui, wi = index[u], index[w]
        if ui == wi:
            continue
        adj[ui].append((eid, wi))
        adj[wi].append((eid, ui))
    disc = [-1] * n
    low = [0] * n
    is_cut = [False] * n
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        root_children = 0
        disc[root] = low[root] = timer
        timer += 1
        stack = [[root, -1, 0]]  # vertex, edge id to parent, scan position
        while stack:
            frame = stack[-1]
            u = frame[0]
            if frame[2] < len(adj[u]):
                eid, w = adj[u][frame[2]]
                frame[2] += 1
                if disc[w] == -1:
                    disc[w] = low[w] = timer
                    timer += 1
                    if u == root:
                        root_children += 1
                    stack.append([w, eid, 0])
                elif eid != frame[1] and disc[w] < low[u]:
                    low[u] = disc[w]
            else:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    if low[u] < low[p]:
                        low[p] = low[u]
                    if p != root and low[u] >= disc[p]:
                        is_cut[p] = True
        if root_children > 1:
            is_cut[root] = True
    return sorted((g.vertices[i] for i in range(n) if is_cut[i]), key=repr)


class ConnectivityReport:
    """Exhaustive cut search over vertices, edge pairs and vertex-edge pairs.

    A pair counts as a cut only when the removal disconnects the graph into
    components that each contain an edge (an isolated vertex produced by the
    removal does not witness a splitting).
    """

    def __init__(self, connected, cut_vertices, cut_edge_pairs, cut_vertex_edge_pairs):
        self.connected = connected
        self.cut_vertices = cut_vertices
        self.cut_edge_pairs = cut_edge_pairs
        self.cut_vertex_edge_pairs = cut_vertex_edge_pairs

    def rigid_shape(self):
        """No cut structure at all (the Whitehead-graph side of rigidity)."""
        return (
            self.connected
            and not self.cut_vertices
            and not self.cut_edge_pairs
            and not self.cut_vertex_edge_pairs
        )

    def to_json(self):
        return {
            "connected": self.connected,
            "cut_vertices": [repr(v) for v in self.cut_vertices],
            "cut_edge_pairs": [[list(map(repr, e)) for e in p] for p in self.cut_edge_pairs],
            "cut_vertex_edge_pairs": [
                [repr(v), list(map(repr, e))] for v, e in self.cut_vertex_edge_pairs
            ],
        }


def _splits_with_edges(g, skip_vertices=(), skip_edges=()):
    comps = _components(g, skip_vertices, skip_edges)
    if len(comps) <= 1:
        return False
    # every component must contain an edge
    skip_v = set(skip_vertices)
    skip_e = set(skip_edges)
    have_edge = set()
    for i, (u, w) in enumerate(g.edges):
        if i in skip_e or u in skip_v or w in skip_v:
            continue
        for c in comps:
            if u in c:
                have_edge.add(c)
                break
    return all(c in have_edge for c in comps)


def connectivity_report(g):
    """Brute-force cut search: vertices, edge pairs, vertex-edge pairs."""
    connected = is_connected(g)
    cut_vs = []
    for v in g.vertices:
        if not is_connected(g, skip_vertices=(v,)):
            cut_vs.append(v)
    cut_edge_pairs = set()
    for i, j in combinations(range(len(g.edges)), 2):
        if _splits_with_edges(g, skip_edges=(i, j)):
            e1 = tuple(sorted(g.edges[i], key=repr))
            e2 = tuple(sorted(g.edges[j], key=repr))
            cut_edge_pairs.add(tuple(sorted((e1, e2))))
    cut_ve_pairs = set()
    for v in g.vertices:
        for i, (u, w) in enumerate(g.edges):
            if u == v or w == v:
                continue
            if _splits_with_edges(g, skip_vertices=(v,), skip_edges=(i,)):
                e = tuple(sorted(g.edges[i], key=repr))
                cut_ve_pairs.add((v, e))
    return ConnectivityReport(
        connected,
        sorted(cut_vs, key=repr),
        sorted(cut_edge_pairs),
        sorted(cut_ve_pairs, key=repr),
    )


class WhiteheadGraph(Multigraph):
    """Multigraph on the signed letters of a basis, with the x <-> x^-1 pairing."""

    def __init__(self, basis, edges, tags=None):
        super().__init__(basis.letters(), edges, tags)
        self.basis = basis

    def letter_name(self, x):
        nm = self.basis.names[abs(x) - 1]
        return nm if x > 0 else nm + "'"

    def to_dot(self, name="whitehead"):
        """DOT rendering with paired letter vertices ranked together."""
        lines = ["graph %s {" % name]
        for i in range(self.basis.rank):
            a = self.letter_name(i + 1)
            b = self.letter_name(-(i + 1))
            lines.append('  { rank=same; "%s"; "%s"; }' % (a, b))
        for u, v in self.edges:
            lines.append('  "%s" -- "%s";' % (self.letter_name(u), self.letter_name(v)))
        lines.append("}")
        return "\n".join(lines)


def whitehead_graph(basis, ws):
    """Whitehead graph of a multiword of nonempty cyclically reduced words."""
    edges = []
    tags = []
    parsed = parse_multiword(basis, ws)
    for wi, w in enumerate(parsed):
        if not w:
            raise WordError("empty word in multiword")
        n = len(w)
        for i in range(n):
            x, y = w[i], w[(i + 1) % n]
            edges.append((x, -y))
            tags.append((wi, i))
    return WhiteheadGraph(basis, edges, tags)


def parse_multiword(basis, ws):
    """Normalize a multiword to a list of cyclically reduced tuples."""
    out = []
    for w in ws:
        w = basis.parse(w) if isinstance(w, str) else reduce_word(basis.check(w))
        if not is_cyclically_reduced(w):
            raise WordError("multiword entries must be cyclically reduced: %r" % (w,))
        out.append(tuple(w))
    return out


def total_length(ws):
    return sum(len(w) for w in ws)


class WhiteheadMove:
    """The automorphism with special letter a and letter set A (a in A, a^-1 not).

    Letters transform as x -> a^-[x^-1 in A] . x . a^[x in A]; a is fixed.
    """

    __slots__ = ("a", "letters")

    def __init__(self, a, letters):
        letters = frozenset(letters)
        if a not in letters or -a in letters:
            raise WordError("move needs a in A and a^-1 not in A")
        self.a = a
        self.letters = letters

    def image(self, x):
        if x == self.a or x == -self.a:
            return (x,)
        pre = (-self.a,) if -x in self.letters else ()
        post = (self.a,) if x in self.letters else ()
        return pre + (x,) + post

    def key(self):
        return (letter_key(self.a), tuple(sorted(self.letters, key=letter_key)))

    def __eq__(self, other):
        return isinstance(other, WhiteheadMove) and self.a == other.a and self.letters == other.letters

    def __hash__(self):
        return hash((self.a, self.letters))

    def __repr__(self):
        return "WhiteheadMove(a=%d, A=%s)" % (self.a, sorted(self.letters, key=letter_key))

    def to_json(self, basis):
        names = lambda x: basis.names[x - 1] if x > 0 else basis.names[-x - 1].upper()
        return {"a": names(self.a), "A": [names(x) for x in sorted(self.letters, key=letter_key)]}


def all_moves(basis):
    """All Whitehead moves in canonical (letter, subset) order."""
    letters = basis.letters()
    letters.sort(key=letter_key)
    moves = []
    for a in letters:
        rest = [x for x in letters if x != a and x != -a]
        for mask in range(1 << len(rest)):
            subset = {a}
            for i, x in enumerate(rest):
                if mask >> i & 1:
                    subset.add(x)
            moves.append(WhiteheadMove(a, subset))
    return moves


def apply_move(m, ws):
    """Image of a multiword under a move, each word cyclically reduced."""
    out = []
    for w in ws:
        img = []
        for x in w:
            img.extend(m.image(x))
        cyc, _ = cyclic_reduce(reduce_word(img))
        out.append(cyc)
    return out


def move_length_delta(graph, m):
    """Predicted cyclic-length change: edges crossing A against A-complement, minus deg(a)."""
    crossing = 0
    for u, v in graph.edges:
        if (u in m.letters) != (v in m.letters):
            crossing += 1
    return crossing - graph.degree(m.a)


def minimize(basis, ws, rank_cap=4):
    """Greedy Whitehead descent to a multiword of globally minimal total length.

    Moves are scanned in canonical order and the first strict decrease is
    applied, so the output and the move log are deterministic.
    """
    if basis.rank > rank_cap:
        raise CapExceeded("rank %d exceeds cap %d" % (basis.rank, rank_cap))
    ws = parse_multiword(basis, ws)
    moves = all_moves(basis)
    applied = []
    while True:
        graph = whitehead_graph(basis, [w for w in ws if w])
        for m in moves:
            if move_length_delta(graph, m) < 0:
                new = apply_move(m, ws)
                assert total_length(new) < total_length(ws), "decrease predicted but not achieved"
                ws = new
                applied.append(m)
                break
        else:
            return ws, applied


def is_minimal(basis, ws, rank_cap=4):
    if basis.rank > rank_cap:
        raise CapExceeded("rank %d exceeds cap %d" % (basis.rank, rank_cap))
    ws = parse_multiword(basis, ws)
    graph = whitehead_graph(basis, [w for w in ws if w])
    return all(move_length_delta(graph, m) >= 0 for m in all_moves(basis))


def _letter_partition_witness(basis, ws):
    """Partition of the positive letters certifying a free splitting.

    Valid for a minimal multiword with disconnected Whitehead graph: each
    word then uses letters from only one side.
    """
    comp_of = {}
    for ci, comp in enumerate(_components(whitehead_graph(basis, ws))):
        for v in comp:
            comp_of[v] = ci
    # group positive letters by the component of their vertex
    groups = {}
    for i in range(basis.rank):
        groups.setdefault(comp_of[i + 1], set()).add(i + 1)
    keys = sorted(groups, key=lambda c: min(groups[c]))
    side1 = groups[keys[0]]
    side2 = set()
    for k in keys[1:]:
        side2 |= groups[k]
    if not side2:
        return None
    for w in ws:
        used = {abs(x) for x in w}
        if not (used <= side1 or used <= side2):
            return None
    return (tuple(sorted(side1)), tuple(sorted(side2)))


def is_freely_indecomposable(basis, ws, rank_cap=4):
    """Free indecomposability of the pair via Whitehead-graph cut structure.

    Returns (bool, witness).  A connected graph with no cut vertex decides
    positively in any basis; a disconnected graph decides negatively; only
    the remaining case (connected with a cut vertex) needs minimization,
    which is gated by the rank cap.
    """
    ws = parse_multiword(basis, ws)
    for w in ws:
        if not w:
            raise WordError("empty word in multiword")
    if not ws:
        if basis.rank == 1:
            return True, {"shortcut": "rank-1 empty structure"}
        return False, {"partition": ((1,), tuple(range(2, basis.rank + 1)))}
    graph = whitehead_graph(basis, ws)
    if is_connected(graph):
        cuts = cut_vertices_fast(graph)
        if not cuts:
            return True, {"shortcut": "connected-no-cut-vertex", "moves": []}
        ws_min, moves = minimize(basis, ws, rank_cap=rank_cap)
    else:
        if basis.rank > rank_cap:
            return False, {"components": _components(graph)}
        ws_min, moves = minimize(basis, ws, rank_cap=rank_cap)
    ws_min = [w for w in ws_min if w]
    gmin = whitehead_graph(basis, ws_min)
    if is_connected(gmin):
        assert not cut_vertices_fast(gmin), "minimal multiword with a cut vertex"
        return True, {"moves": moves, "minimal": ws_min}
    witness = _letter_partition_witness(basis, ws_min)
    assert witness is not None, "disconnected minimal graph must split letters"
    return False, {"moves": moves, "minimal": ws_min, "partition": witness}


def _glue_chains(n_arcs, vert, glue):
    """Resolve arc-end gluings into edges between the surviving free ends.

    Ends are (arc_index, side); ``glue`` is an involution on glued ends and
    ``vert`` names the free ones.  Each maximal glued chain becomes one
    edge; a chain with no free end cannot be represented and raises.
    Returns (edges, chains) with chains listing the arc indices traversed.
    """
    edges = []
    chains = []
    seen = set()
    for i in range(n_arcs):
        for side in (0, 1):
            end = (i, side)
            if end in glue or end in seen:
                continue
            seen.add(end)
            chain = [i]
            cur = (i, 1 - side)
            while cur in glue:
                seen.add(cur)
                nxt = glue[cur]
                seen.add(nxt)
                chain.append(nxt[0])
                cur = (nxt[0], 1 - nxt[1])
            seen.add(cur)
            edges.append((vert[end], vert[cur]))
            chains.append(tuple(chain))
    for i in range(n_arcs):
        for side in (0, 1):
            if (i, side) not in seen:
                raise WordError("gluing produced a closed circle with no vertex")
    return edges, chains


def splice(g1, v1, g2, v2, bijection=None):
    """Splice two graphs at vertices of equal valence.

    The vertices v1 and v2 are deleted and the hanging edge ends are joined
    according to the bijection, given as a list of (end1, end2) pairs where
    an end is (edge_index, side) into the respective graph (side 0 or 1).
    Defaults to pairing the incident ends in index order.  Vertices of the
    result are tagged (0, u) and (1, u) by origin.
    """

    def ends_at(g, v):
        out = []
        for i, (a, b) in enumerate(g.edges):
            if a == v:
                out.append((i, 0))
            if b == v:
                out.append((i, 1))
        return out

    ends1 = ends_at(g1, v1)
    ends2 = ends_at(g2, v2)
    if len(ends1) != len(ends2):
        raise WordError("valence mismatch: %d vs %d" % (len(ends1), len(ends2)))
    if bijection is None:
        bijection = list(zip(ends1, ends2))
    elif sorted(e1 for e1, _ in bijection) != sorted(ends1) or sorted(
        e2 for _, e2 in bijection
    ) != sorted(ends2):
        raise WordError("bijection must match the incident edge ends exactly")

    n1 = len(g1.edges)
    vert = {}
    for off, g, v in ((0, g1, v1), (n1, g2, v2)):
        tag = 0 if off == 0 else 1
        for i, (a, b) in enumerate(g.edges):
            if a != v:
                vert[(off + i, 0)] = (tag, a)
            if b != v:
                vert[(off + i, 1)] = (tag, b)
    glue = {}
    for (i1, s1), (i2, s2) in bijection:
        glue[(i1, s1)] = (n1 + i2, s2)
        glue[(n1 + i2, s2)] = (i1, s1)
    edges, chains = _glue_chains(n1 + len(g2.edges), vert, glue)
    vertices = [(0, u) for u in g1.vertices if u != v1] + [
        (1, u) for u in g2.vertices if u != v2
    ]
    return Multigraph(vertices, edges, chains)


def spliced_pullback_graph(c, ws):
    """Whitehead graph of the pullback multiword, built by splicing cover sheets.

    One copy of the multiword's Whitehead graph is laid into each sheet of
    the cover as an arc system; each spanning-tree edge of the cover splices
    the copies at its two ends, gluing arc ends in consecutive-crossing
    pairs; the surviving ends are named by the cover's subgroup letters
    (non-tree edge k contributes the letter pair +-k).  The result equals
    the Whitehead graph of the pullback words in the subgroup basis.

    With tags, each edge carries (word_index, class_index) identifying the
    pullback class it belongs to, classes numbered as in elevations order.
    """
    ws = parse_multiword(c.basis, ws)
    _, _, tree_edges = c._tree()
    gen_of = {(u, l): k + 1 for k, (u, l, _) in enumerate(c._nontree_edges())}
    sub = c.sub_basis()

    # the d copies of the arc system: one arc per (sheet, word, position)
    arc_id = {}
    arcs = []
    for s in range(c.degree):
        for wi, w in enumerate(ws):
            for i in range(len(w)):
                arc_id[(s, wi, i)] = len(arcs)
                arcs.append((s, wi, i))

    # side 0 of an arc is its arrival end, side 1 its departure end; the
    # departure of position i glues to the arrival of position i+1 across
    # the cover edge read by the next letter, when that edge is in the tree
    glue = {}
    vert = {}
    for s in range(c.degree):
        for wi, w in enumerate(ws):
            n = len(w)
            for i in range(n):
                x = w[(i + 1) % n]
                t = c.act(s, x)
                edge = (s, x, t) if x > 0 else (t, -x, s)
                dep = (arc_id[(s, wi, i)], 1)
                arr = (arc_id[(t, wi, (i + 1) % n)], 0)
                if edge in tree_edges:
                    glue[dep] = arr
                    glue[arr] = dep
                else:
                    k = gen_of[(edge[0], edge[1])]
                    g = k if x > 0 else -k
                    vert[dep] = -g
                    vert[arr] = g
    edges, chains = _glue_chains(len(arcs), vert, glue)

    # stamp each arc with its pullback class (word, elevation) by walking circles
    arc_class = [None] * len(arcs)
    class_count = 0
    for wi, w in enumerate(ws):
        for ev in elevations(c, w):
            s = ev.orbit[0]
            for _ in range(ev.degree):
                for i in range(len(w)):
                    s = c.act(s, w[i])
                    arc_class[arc_id[(s, wi, i)]] = (wi, class_count)
            class_count += 1
    tags = []
    for chain in chains:
        cls = {arc_class[a] for a in chain}
        assert len(cls) == 1, "a glued chain crossed circles"
        tags.append(cls.pop())
    graph = WhiteheadGraph(sub, edges, tags)
    graph.n_classes = class_count
    return graph


class SurfaceData:
    """Recognized surface: orientability, genus and boundary count.

    For non-orientable surfaces the genus field is the cross-cap number.
    The witnessing ribbon structure (rotation and twisted letters) and its
    boundary words are kept for replay.
    """

    def __init__(self, orientable, genus, boundary, rotation, twists, boundary_words):
        self.orientable = orientable
        self.genus = genus
        self.boundary = boundary
        self.rotation = rotation
        self.twists = twists
        self.boundary_words = boundary_words

    def euler_characteristic(self):
        return 2 - 2 * self.genus - self.boundary if self.orientable else 2 - self.genus - self.boundary

    def is_thrice_punctured_sphere(self):
        return self.orientable and self.genus == 0 and self.boundary == 3

    def __repr__(self):
        kind = "orientable" if self.orientable else "non-orientable"
        return "Surface(%s, genus=%d, boundary=%d)" % (kind, self.genus, self.boundary)

    def to_json(self, basis=None):
        data = {
            "orientable": self.orientable,
            "genus": self.genus,
            "boundary": self.boundary,
            "rotation": list(self.rotation),
            "twists": sorted(self.twists),
        }
        if basis is not None and basis.single_char:
            data["boundary_words"] = [basis.format(w) for w in self.boundary_words]
        else:
            data["boundary_words"] = [list(w) for w in self.boundary_words]
        return data


def _ribbon_boundaries(rank, rotation, twists):
    """Boundary words of the one-vertex ribbon graph (rotation, twists).

    Corners (p, 0) and (p, 1) are the clockwise and counterclockwise
    corners of the band end at position p.  Disc arcs pair (p, 1) with
    (p+1, 0); band sides pair corners across the two ends of each letter,
    same-side when twisted and opposite-side otherwise.  Boundary
    components are the cycles alternating the two pairings; crossing a band
    away from the end holding signed letter x reads x.
    """
    m = len(rotation)
    pos = {x: p for p, x in enumerate(rotation)}
    disc = {}
    for p in range(m):
        disc[(p, 1)] = ((p + 1) % m, 0)
        disc[((p + 1) % m, 0)] = (p, 1)
    band = {}
    for x in rotation:
        if x < 0:
            continue
        p1, p2 = pos[x], pos[-x]
        if x in twists:
            band[(p1, 0)] = (p2, 0)
            band[(p2, 0)] = (p1, 0)
            band[(p1, 1)] = (p2, 1)
            band[(p2, 1)] = (p1, 1)
        else:
            band[(p1, 0)] = (p2, 1)
            band[(p2, 1)] = (p1, 0)
            band[(p1, 1)] = (p2, 0)
            band[(p2, 0)] = (p1, 1)
    words = []
    seen = set()
    for start in sorted(disc):
        if start in seen:
            continue
        word = []
        cur = start
        while True:
            seen.add(cur)
            cur = disc[cur]
            seen.add(cur)
            word.append(rotation[cur[0]])
            cur = band[cur]
            if cur == start:
                break
        words.append(reduce_word(word))
    return words


def surface_recognize(basis, ws, require_minimal=True, rank_cap=4):
    """Search one-vertex ribbon structures whose boundary realizes the multiword.

    The input must be Whitehead-minimal; a multiword in which some letter
    does not occur exactly twice is never a boundary multiword of a spine
    and returns None immediately.  Returns SurfaceData or None.
    """
    ws = parse_multiword(basis, ws)
    if require_minimal and not is_minimal(basis, ws, rank_cap=max(rank_cap, basis.rank)):
        raise WordError("surface recognition needs a minimal multiword")
    counts = {}
    for w in ws:
        for x in w:
            counts[abs(x)] = counts.get(abs(x), 0) + 1
    if any(counts.get(i + 1, 0) != 2 for i in range(basis.rank)):
        return None
    target = sorted(canonical_class(w).word for w in ws)
    r = basis.rank
    # rotations are cyclic orders, so letter +1 is pinned first
    others = [x for x in basis.letters() if x != 1]
    for perm in permutations(others):
        rotation = (1,) + perm
        for mask in range(1 << r):
            twists = frozenset(i + 1 for i in range(r) if mask >> i & 1)
            bwords = _ribbon_boundaries(r, rotation, twists)
            if len(bwords) != len(ws):
                continue
            if any(not w for w in bwords):
                continue
            got = sorted(canonical_class(w).word for w in bwords)
            if got == target:
                k = len(bwords)
                orientable = not twists
                genus = (1 + r - k) // 2 if orientable else 1 + r - k
                return SurfaceData(orientable, genus, k, rotation, twists, bwords)
    return None


class PairClassification:
    """Outcome of the pair classification with its witness."""

    DECOMPOSABLE = "DECOMPOSABLE"
    SURFACE = "SURFACE"
    THRICE_PUNCTURED_SPHERE = "THRICE_PUNCTURED_SPHERE"
    RIGID_CANDIDATE = "RIGID_CANDIDATE"
    INCONCLUSIVE = "INCONCLUSIVE"

    def __init__(self, tag, surface=None, witness=None):
        self.tag = tag
        self.surface = surface
        self.witness = witness or {}

    def __repr__(self):
        return "PairClassification(%s)" % self.tag

    def to_json(self, basis=None):
        data = {"tag": self.tag}
        if self.surface is not None:
            data["surface"] = self.surface.to_json(basis)
        if "minimal" in self.witness and basis is not None and basis.single_char:
            data["minimal"] = [basis.format(w) for w in self.witness["minimal"]]
        if "moves" in self.witness and basis is not None:
            data["moves"] = [m.to_json(basis) for m in self.witness["moves"]]
        if "partition" in self.witness:
            data["partition"] = [list(s) for s in self.witness["partition"]]
        if "cuts" in self.witness:
            data["cuts"] = self.witness["cuts"].to_json()
        return data


def classify_pair(basis, ws, rank_cap=4):
    """Classify a pair: decomposable, surface, rigid candidate or inconclusive.

    The cut conditions are sufficient, not exhaustive, so INCONCLUSIVE is a
    genuine outcome (a connected minimal graph with a separating edge pair
    or vertex-edge pair that is not a recognized surface).
    """
    ws = parse_multiword(basis, ws)
    ws_min, moves = minimize(basis, ws, rank_cap=rank_cap)
    ws_min_live = [w for w in ws_min if w]
    graph = whitehead_graph(basis, ws_min_live)
    if not is_connected(graph):
        witness = _letter_partition_witness(basis, ws_min_live)
        return PairClassification(
            PairClassification.DECOMPOSABLE,
            witness={"moves": moves, "minimal": ws_min, "partition": witness},
        )
    surface = surface_recognize(basis, ws_min_live, require_minimal=False)
    if surface is not None:
        tag = (
            PairClassification.THRICE_PUNCTURED_SPHERE
            if surface.is_thrice_punctured_sphere()
            else PairClassification.SURFACE
        )
        return PairClassification(tag, surface=surface, witness={"moves": moves, "minimal": ws_min})
    report = connectivity_report(graph)
    assert not report.cut_vertices, "minimal multiword with a cut vertex"
    if not report.cut_edge_pairs and not report.cut_vertex_edge_pairs:
        return PairClassification(
            PairClassification.RIGID_CANDIDATE,
            witness={"moves": moves, "minimal": ws_min, "cuts": report},
        )
    return PairClassification(
        PairClassification.INCONCLUSIVE,
        witness={"moves": moves, "minimal": ws_min, "cuts": report},
    )


def local_theorem_check(basis, ws, cover, drop_index=None, rank_cap=4, assume_rigid=False):
    """Indecomposability of the pullback structure minus one class.

    Requires a minimal multiword whose pair classifies as a rigid candidate
    (or an explicit override) and a clean cover.  Splices the pullback
    Whitehead graph, deletes the edges of the dropped class (at most one
    per sheet by cleanliness) and verifies the result is connected with no
    cut vertex.  drop_index=None checks the full spliced graph.
    """
    from .stallings import is_clean

    ws = parse_multiword(basis, ws)
    if not is_minimal(basis, ws, rank_cap=rank_cap):
        raise WordError("multiword must be minimal")
    if not assume_rigid:
        cls = classify_pair(basis, ws, rank_cap=rank_cap)
        if cls.tag != PairClassification.RIGID_CANDIDATE:
            raise WordError("pair classifies as %s, not a rigid candidate" % cls.tag)
    if not is_clean(cover, ws):
        raise WordError("cover is not clean for this multiword")
    graph = spliced_pullback_graph(cover, ws)
    n_classes = graph.n_classes
    if drop_index is not None and not 0 <= drop_index < n_classes:
        raise WordError("drop index %r out of range (%d classes)" % (drop_index, n_classes))
    drop_edges = (
        set()
        if drop_index is None
        else {i for i, t in enumerate(graph.tags) if t[1] == drop_index}
    )
    kept = [e for i, e in enumerate(graph.edges) if i not in drop_edges]
    reduced = Multigraph(graph.vertices, kept)
    connected = is_connected(reduced)
    cuts = cut_vertices_fast(reduced) if connected else None
    ok = connected and not cuts
    report = {
        "classes": n_classes,
        "dropped": drop_index,
        "connected": connected,
        "cut_vertices": cuts if cuts else [],
        "vertices": len(reduced.vertices),
        "edges": len(reduced.edges),
    }
    return ok, report


def multigraph_isomorphic(g1, g2):
    """Abstract multigraph isomorphism by backtracking on degree classes."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return False

    def profile(g):
        count = {}
        for u, v in g.edges:
            count[u] = count.get(u, 0) + 1
            count[v] = count.get(v, 0) + 1
        for v in g.vertices:
            count.setdefault(v, 0)
        return count

    d1, d2 = profile(g1), profile(g2)
    if sorted(d1.values()) != sorted(d2.values()):
        return False

    def adj_counter(g):
        adj = {v: {} for v in g.vertices}
        for u, v in g.edges:
            adj[u][v] = adj[u].get(v, 0) + 1
            if u != v:
                adj[v][u] = adj[v].get(u, 0) + 1
        return adj

    a1, a2 = adj_counter(g1), adj_counter(g2)
    order = sorted(g1.vertices, key=lambda v: (-d1[v], repr(v)))
    candidates = {
        v: [w for w in g2.vertices if d2[w] == d1[v] and a1[v].get(v, 0) == a2[w].get(w, 0)]
        for v in order
    }
    mapping = {}
    used = set()

    def extend(i):
        if i == len(order):
            return True
        v = order[i]
        for w in candidates[v]:
            if w in used:
                continue
            if any(a1[v].get(u, 0) != a2[w].get(mapping[u], 0) for u in mapping):
                continue
            mapping[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return extend(0)

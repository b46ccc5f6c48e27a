"""Stallings graphs: subgroups of free groups as folded labeled graphs.

A CoreGraph is the pointed core of the covering space of a rose
corresponding to a finitely generated subgroup; a CoverGraph is a finite
cover of the rose given by one permutation of the sheets per basis letter.
Both expose the same partial-action interface (``num_vertices``, ``act``,
basepoint 0), which the spanning-tree and rewriting machinery below works
against.
"""

import math

from .errors import CapExceeded
from .words import (
    Basis,
    WordError,
    PeripheralStructure,
    canonical_class,
    concat,
    cyclic_reduce,
    invert,
    letter_key,
    make_peripheral_structure,
    reduce_word,
    root,
)

INFINITE = math.inf


class _GraphBase:
    """Shared spanning-tree, basis and rewriting machinery.

    Subclasses provide ``num_vertices``, ``basis`` and ``act(v, x)`` where x
    is a signed letter; ``act`` returns the target vertex or None.
    """

    _tree_cache = None
    _nontree_cache = None
    _gen_of_cache = None

    def act(self, v, x):
        raise NotImplementedError

    def trace(self, word, start=0):
        """Follow a word from a vertex; None if the path leaves the graph."""
        v = start
        for x in word:
            v = self.act(v, x)
            if v is None:
                return None
        return v

    def _tree(self):
        """BFS spanning tree from the basepoint, letters in canonical order.

        Returns (order, parent_edge, tree_edges) where parent_edge[v] =
        (u, x) with act(u, x) = v, and tree_edges is the set of positively
        oriented tree edges (u, letter, v).
        """
        if self._tree_cache is not None:
            return self._tree_cache
        letters = sorted(
            [x for i in range(self.basis.rank) for x in (i + 1, -(i + 1))], key=letter_key
        )
        parent_edge = {0: None}
        order = [0]
        tree_edges = set()
        head = 0
        while head < len(order):
            u = order[head]
            head += 1
            for x in letters:
                v = self.act(u, x)
                if v is not None and v not in parent_edge:
                    parent_edge[v] = (u, x)
                    tree_edges.add((u, x, v) if x > 0 else (v, -x, u))
                    order.append(v)
        if len(order) != self.num_vertices:
            raise WordError("graph is not connected")
        self._tree_cache = (order, parent_edge, tree_edges)
        return self._tree_cache

    def path_word(self, v):
        """Word read along the tree path from the basepoint to v."""
        _, parent_edge, _ = self._tree()
        out = []
        while parent_edge[v] is not None:
            u, x = parent_edge[v]
            out.append(x)
            v = u
        return tuple(reversed(out))

    def _nontree_edges(self):
        """Positively oriented non-tree edges (u, letter, v) in scan order."""
        if self._nontree_cache is not None:
            return self._nontree_cache
        _, _, tree_edges = self._tree()
        out = []
        for u in range(self.num_vertices):
            for i in range(self.basis.rank):
                v = self.act(u, i + 1)
                if v is not None and (u, i + 1, v) not in tree_edges:
                    out.append((u, i + 1, v))
        self._nontree_cache = out
        return out

    def subgroup_basis(self):
        """Free basis of the subgroup, one word per non-tree edge."""
        gens = []
        for u, l, v in self._nontree_edges():
            gens.append(concat(self.path_word(u), (l,), invert(self.path_word(v))))
        return gens

    def sub_basis(self):
        """A Basis object for the subgroup's own letters."""
        return Basis(max(1, len(self._nontree_edges())))

    def subgroup_rank(self):
        return len(self._nontree_edges())

    def rewrite(self, word, start=0):
        """Express a loop at the basepoint in the subgroup basis.

        Returns a tuple of signed subgroup letters, or None if the word is
        not a basepoint loop.  Tree edges emit nothing; crossing the k-th
        non-tree edge emits +-(k+1).
        """
        if self._gen_of_cache is None:
            self._gen_of_cache = {
                (u, l): k + 1 for k, (u, l, _) in enumerate(self._nontree_edges())
            }
        gen_of = self._gen_of_cache
        v = start
        out = []
        for x in word:
            w = self.act(v, x)
            if w is None:
                return None
            if x > 0:
                g = gen_of.get((v, x))
            else:
                g = gen_of.get((w, -x))
                g = -g if g is not None else None
            if g is not None:
                out.append(g)
            v = w
        if v != start:
            return None
        return reduce_word(out)

    def to_dot(self, name="stallings"):
        """DOT rendering: letter-labeled directed edges, basepoint double-circled."""
        lines = ["digraph %s {" % name, '  0 [shape=doublecircle, label="*"];']
        for v in range(1, self.num_vertices):
            lines.append('  %d [shape=circle, label="%d"];' % (v, v))
        for u in range(self.num_vertices):
            for i in range(self.basis.rank):
                v = self.act(u, i + 1)
                if v is not None:
                    lines.append('  %d -> %d [label="%s"];' % (u, v, self.basis.names[i]))
        lines.append("}")
        return "\n".join(lines)


class CoreGraph(_GraphBase):
    """Folded core graph of a finitely generated subgroup, basepoint 0.

    Every non-basepoint vertex has degree >= 2; the graph is connected and
    folded.  Vertices are numbered in BFS order from the basepoint, so
    equal subgroups built the same way compare equal.
    """

    def __init__(self, basis, adj):
        self.basis = basis
        self.adj = adj
        self.num_vertices = len(adj)

    def act(self, v, x):
        return self.adj[v].get(x)

    def __eq__(self, other):
        return (
            isinstance(other, CoreGraph)
            and self.basis == other.basis
            and self.adj == other.adj
        )

    def __repr__(self):
        return "CoreGraph(rank=%d, vertices=%d)" % (self.basis.rank, self.num_vertices)

    def edge_count(self):
        return sum(1 for v in range(self.num_vertices) for x in self.adj[v] if x > 0)

    def is_complete(self):
        return all(len(self.adj[v]) == 2 * self.basis.rank for v in range(self.num_vertices))

    def index(self):
        """Index of the subgroup: vertex count if complete, else INFINITE."""
        return self.num_vertices if self.is_complete() else INFINITE

    def contains(self, word):
        """Membership: the word spells a basepoint loop."""
        word = self.basis.check(word) if not isinstance(word, str) else self.basis.parse(word)
        return self.trace(word, 0) == 0


def _build_folded(basis, nv, edges, keep_loops_at=0):
    """Fold labeled edges, prune the core and renumber from the basepoint.

    edges are (u, letter, v) with letter > 0.  The basepoint is vertex 0 of
    the input numbering.
    """
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    out = [dict() for _ in range(nv)]
    inn = [dict() for _ in range(nv)]
    queue = list(edges)

    def merge(a, b):
        if len(out[a]) + len(inn[a]) < len(out[b]) + len(inn[b]):
            a, b = b, a
        parent[b] = a
        for l, t in out[b].items():
            queue.append((b, l, t))
        for l, s in inn[b].items():
            queue.append((s, l, b))
        out[b] = {}
        inn[b] = {}
        return a

    while queue:
        u, l, v = queue.pop()
        u, v = find(u), find(v)
        t = out[u].get(l)
        if t is not None and find(t) != v:
            merge(find(t), v)
            queue.append((u, l, v))
            continue
        s = inn[v].get(l)
        if s is not None and find(s) != u:
            merge(find(s), u)
            queue.append((u, l, v))
            continue
        out[u][l] = v
        inn[v][l] = u

    bp = find(0)
    # collect reachable classes and normalize adjacency
    adj = {}
    stack = [bp]
    seen = {bp}
    while stack:
        u = stack.pop()
        amap = {}
        for l, t in out[u].items():
            t = find(t)
            amap[l] = t
            if t not in seen:
                seen.add(t)
                stack.append(t)
        for l, s in inn[u].items():
            s = find(s)
            amap[-l] = s
            if s not in seen:
                seen.add(s)
                stack.append(s)
        adj[u] = amap

    # core pruning: drop non-basepoint vertices of degree <= 1
    changed = True
    while changed:
        changed = False
        for u in list(adj):
            if u == bp:
                continue
            if len(adj[u]) <= 1:
                for x, t in adj[u].items():
                    del adj[t][-x]
                del adj[u]
                changed = True

    # BFS renumbering for a canonical vertex order
    letters = sorted(
        [x for i in range(basis.rank) for x in (i + 1, -(i + 1))], key=letter_key
    )
    number = {bp: 0}
    order = [bp]
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        for x in letters:
            t = adj[u].get(x)
            if t is not None and t not in number:
                number[t] = len(order)
                order.append(t)
    final = [dict() for _ in order]
    for u in order:
        for x, t in adj[u].items():
            final[number[u]][x] = number[t]
    return CoreGraph(basis, final)


def cycle_graph(basis, w):
    """Core graph whose basepoint loop spells the cyclically reduced word w."""
    w = basis.parse(w) if isinstance(w, str) else basis.check(w)
    if not w:
        raise WordError("empty word has no cycle graph")
    cyc, _ = cyclic_reduce(w)
    if cyc != tuple(w):
        raise WordError("cycle graph needs a cyclically reduced word")
    n = len(w)
    edges = []
    for i, x in enumerate(w):
        u, v = i, (i + 1) % n
        edges.append((u, x, v) if x > 0 else (v, -x, u))
    return _build_folded(basis, n, edges)


def from_generators(basis, gens):
    """Stallings graph of the subgroup generated by the given words."""
    words = []
    for g in gens:
        w = basis.parse(g) if isinstance(g, str) else reduce_word(basis.check(g))
        if w:
            words.append(w)
    nv = 1 + sum(len(w) for w in words)
    edges = []
    nxt = 1
    for w in words:
        prev = 0
        for i, x in enumerate(w):
            cur = 0 if i == len(w) - 1 else nxt
            nxt += 0 if i == len(w) - 1 else 1
            edges.append((prev, x, cur) if x > 0 else (cur, -x, prev))
            prev = cur
    return _build_folded(basis, nv, edges)


def intersect(g1, g2):
    """Pointed fiber product: the core graph of the subgroup intersection."""
    if g1.basis != g2.basis:
        raise WordError("intersection needs a common basis")
    basis = g1.basis
    pairs = {(0, 0): 0}
    stack = [(0, 0)]
    edges = []
    while stack:
        u = stack.pop()
        for i in range(basis.rank):
            for x in (i + 1, -(i + 1)):
                a = g1.act(u[0], x)
                b = g2.act(u[1], x)
                if a is None or b is None:
                    continue
                v = (a, b)
                if v not in pairs:
                    pairs[v] = len(pairs)
                    stack.append(v)
                if x > 0:
                    edges.append((pairs[u], x, pairs[v]))
    return _build_folded(basis, len(pairs), edges)


class CoverGraph(_GraphBase):
    """Finite cover of the rose: one sheet permutation per basis letter.

    Sheets are 0-based internally; serialized form is 1-based with
    basepoint 1.
    """

    def __init__(self, basis, perms, allow_disconnected=False):
        self.basis = basis
        self.degree = len(next(iter(perms.values()))) if perms else 1
        norm = {}
        for i in range(basis.rank):
            p = tuple(perms[i + 1])
            if sorted(p) != list(range(self.degree)):
                raise WordError("letter %d is not a permutation" % (i + 1))
            norm[i + 1] = p
        self.perms = norm
        self.inv_perms = {}
        for l, p in norm.items():
            q = [0] * self.degree
            for s, t in enumerate(p):
                q[t] = s
            self.inv_perms[l] = tuple(q)
        self.num_vertices = self.degree
        if not allow_disconnected:
            self._tree()  # raises if the joint action is not transitive

    def act(self, v, x):
        return self.perms[x][v] if x > 0 else self.inv_perms[-x][v]

    def __eq__(self, other):
        return (
            isinstance(other, CoverGraph)
            and self.basis == other.basis
            and self.perms == other.perms
        )

    def __repr__(self):
        return "CoverGraph(rank=%d, degree=%d)" % (self.basis.rank, self.degree)

    def is_complete(self):
        return True

    def index(self):
        return self.degree

    def contains(self, word):
        word = self.basis.check(word) if not isinstance(word, str) else self.basis.parse(word)
        return self.trace(word, 0) == 0

    def word_permutation(self, w):
        """Permutation of the sheets induced by reading the word w."""
        cur = list(range(self.degree))
        for x in w:
            p = self.perms[x] if x > 0 else self.inv_perms[-x]
            cur = [p[s] for s in cur]
        return tuple(cur)

    def to_json(self):
        return {
            "degree": self.degree,
            "perms": {
                self.basis.names[i]: [s + 1 for s in self.perms[i + 1]]
                for i in range(self.basis.rank)
            },
        }

    @classmethod
    def from_json(cls, data, basis=None):
        names = sorted(data["perms"])
        if basis is None:
            basis = Basis(len(names), tuple(sorted(names)))
        perms = {}
        for i, nm in enumerate(basis.names):
            perms[i + 1] = tuple(s - 1 for s in data["perms"][nm])
        return cls(basis, perms)


def rose(basis):
    """The degree-1 cover: the rose itself."""
    return CoverGraph(basis, {i + 1: (0,) for i in range(basis.rank)})


def hall_complete(g):
    """Complete a finite core graph to a cover of the same vertex count.

    Missing letter-directions are filled by pairing missing out-slots with
    missing in-slots in vertex-index order; the embedded copy of g is
    untouched, so its basepoint loops stay loops.
    """
    basis = g.basis
    n = g.num_vertices
    perms = {}
    for i in range(basis.rank):
        l = i + 1
        img = [None] * n
        hit = set()
        for v in range(n):
            t = g.act(v, l)
            if t is not None:
                img[v] = t
                hit.add(t)
        outs = [v for v in range(n) if img[v] is None]
        ins = [v for v in range(n) if v not in hit]
        for v, t in zip(outs, ins):
            img[v] = t
        perms[l] = tuple(img)
    return CoverGraph(basis, perms)


def normal_core(c, degree_cap=5040):
    """Cover of the kernel of the coset action: the regular core of c.

    Sheets of the result are the elements of the permutation group
    generated by the letter actions; the degree divides degree(c)!.
    Raises CapExceeded past the configured cap.
    """
    gens = [c.perms[i + 1] for i in range(c.basis.rank)]
    ident = tuple(range(c.degree))
    elems = {ident: 0}
    order = [ident]
    head = 0
    while head < len(order):
        g = order[head]
        head += 1
        for p in gens:
            h = tuple(p[s] for s in g)
            if h not in elems:
                if len(elems) >= degree_cap:
                    raise CapExceeded(
                        "normal core degree exceeds cap %d" % degree_cap
                    )
                elems[h] = len(order)
                order.append(h)
    # right multiplication by each generator
    perms = {}
    for i in range(c.basis.rank):
        p = gens[i]
        perms[i + 1] = tuple(elems[tuple(p[s] for s in g)] for g in order)
    return CoverGraph(c.basis, perms)


class Elevation:
    """One component of the preimage of a circle in a cover.

    The orbit is the cycle of sheets under the word's permutation, rotated
    to start at its minimal sheet; degree is the orbit length.  The
    conjugated power conj . w^degree . conj^-1 lies in the cover's
    subgroup, conj being the tree path to the orbit's minimal sheet.
    """

    __slots__ = ("cover", "word", "orbit", "degree", "conjugator")

    def __init__(self, cover, word, orbit, conjugator):
        self.cover = cover
        self.word = tuple(word)
        self.orbit = tuple(orbit)
        self.degree = len(orbit)
        self.conjugator = tuple(conjugator)

    def element(self):
        """The subgroup element conj . w^degree . conj^-1 as an ambient word."""
        return concat(self.conjugator, self.word * self.degree, invert(self.conjugator))

    def local_word(self):
        """The elevation element rewritten in the cover's subgroup basis."""
        return self.cover.rewrite(self.element())

    def __repr__(self):
        return "Elevation(deg=%d, orbit=%s)" % (self.degree, self.orbit)


def elevations(c, w):
    """Elevations of a nonempty cyclic word to a cover, sorted by minimal sheet."""
    w = c.basis.parse(w) if isinstance(w, str) else c.basis.check(w)
    if not w:
        raise WordError("empty word has no elevations")
    sigma = c.word_permutation(w)
    seen = [False] * c.degree
    out = []
    for s in range(c.degree):
        if seen[s]:
            continue
        orbit = [s]
        seen[s] = True
        t = sigma[s]
        while t != s:
            seen[t] = True
            orbit.append(t)
            t = sigma[t]
        out.append(Elevation(c, w, orbit, c.path_word(s)))
    return out


def _partial_orbits(g, w):
    """Closed orbits of the partial action of w on the vertices of g.

    Vertices whose w-path leaves the graph, or whose forward orbit never
    returns, contribute nothing.
    """
    img = {}
    for v in range(g.num_vertices):
        t = g.trace(w, v)
        if t is not None:
            img[v] = t
    state = {}  # 0 = in progress, 1 = done
    orbits = []
    for v in sorted(img):
        if v in state:
            continue
        path = []
        cur = v
        while cur in img and cur not in state:
            state[cur] = 0
            path.append(cur)
            cur = img[cur]
        if cur in state and state[cur] == 0 and cur in img:
            k = path.index(cur)
            orbits.append(tuple(path[k:]))
        for u in path:
            state[u] = 1
    # rotate each orbit to start at its minimal vertex
    normed = []
    for orb in orbits:
        k = orb.index(min(orb))
        normed.append(orb[k:] + orb[:k])
    return sorted(normed)


def pullback_structure(g, p):
    """Pull a peripheral structure back to the subgroup carried by g.

    For each class and each closed orbit of the class word's partial action
    on g, the conjugated power is rewritten in g's subgroup basis; the
    results are assembled into a peripheral structure over that basis.
    """
    if g.basis != p.basis:
        raise WordError("structure and graph bases differ")
    sub = g.sub_basis()
    elements = []
    for rep in p.classes():
        w = rep.word
        for orb in _partial_orbits(g, w):
            v = orb[0]
            conj = g.path_word(v)
            elt = concat(conj, w * len(orb), invert(conj))
            local = g.rewrite(elt)
            assert local is not None, "orbit element must lie in the subgroup"
            elements.append(local)
    return make_peripheral_structure(sub, elements) if elements else PeripheralStructure(sub, [])


def pullback_class_words(g, p):
    """Per-class orbit data behind pullback_structure.

    Returns a list of (class_rep, orbit, local_word) triples in a fixed
    deterministic order (classes in canonical order, orbits by minimal
    vertex).
    """
    out = []
    for rep in p.classes():
        for orb in _partial_orbits(g, rep.word):
            v = orb[0]
            conj = g.path_word(v)
            elt = concat(conj, rep.word * len(orb), invert(conj))
            out.append((rep, orb, g.rewrite(elt)))
    return out


def elevation_is_embedded(c, ev):
    """Whether an elevation circle visits each vertex of the cover at most once."""
    visited = set()
    v = ev.orbit[0]
    for _ in range(ev.degree):
        for x in ev.word:
            if v in visited:
                return False
            visited.add(v)
            v = c.act(v, x)
    return v == ev.orbit[0] and len(visited) == ev.degree * len(ev.word)


def is_clean(c, ws):
    """Every elevation of every word is an embedded circle in the cover."""
    for w in ws:
        for ev in elevations(c, w):
            if not elevation_is_embedded(c, ev):
                return False
    return True


def clean_subgroup(ws, within=None, degree_cap=5040):
    """A clean finite-index regular cover for the given cyclic words.

    Intersects, inside ``within``, one completed cycle cover per word
    (where that word embeds) and takes the normal core of the result.  The
    output is verified to pass is_clean.
    """
    if not ws:
        raise WordError("need at least one word")
    parsed = []
    basis = within.basis if within is not None else None
    for w in ws:
        if isinstance(w, str):
            if basis is None:
                raise WordError("string words need an explicit cover to fix the basis")
            w = basis.parse(w)
        w = tuple(w)
        if basis is None:
            basis = Basis(max(abs(x) for x in w))
        if not w:
            raise WordError("empty word in multiword")
        parsed.append(w)
    if within is None:
        within = rose(basis)
    halls = [hall_complete(cycle_graph(basis, w)) for w in parsed]
    cur = within
    for h in halls:
        cur = _cover_intersection(cur, h)
    core = normal_core(cur, degree_cap=degree_cap)
    assert is_clean(core, parsed), "normal core failed the cleanliness check"
    return core


def _cover_intersection(c1, c2):
    """Pointed fiber product of two complete covers (a complete cover again)."""
    basis = c1.basis
    pairs = {(0, 0): 0}
    order = [(0, 0)]
    head = 0
    while head < len(order):
        a, b = order[head]
        head += 1
        for i in range(basis.rank):
            t = (c1.act(a, i + 1), c2.act(b, i + 1))
            if t not in pairs:
                pairs[t] = len(order)
                order.append(t)
    perms = {}
    for i in range(basis.rank):
        perms[i + 1] = tuple(
            pairs[(c1.act(a, i + 1), c2.act(b, i + 1))] for a, b in order
        )
    return CoverGraph(basis, perms)

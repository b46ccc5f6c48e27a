"""Covers and pre-covers of graphs of groups, and the one-ended subgroup pipeline.

A pre-cover assigns each base vertex a list of finite covers of its rose
and partially matches elevations of opposite edge ends in degree-preserving
pairs; unmatched elevations hang.  A pre-cover with nothing hanging is a
finite cover.  Infinite completions are never materialized: the
monomorphism and infinite-index facts are exposed as replayable
certificates over the finite data.
"""

import json

from .errors import CapExceeded, SearchExhausted
from .words import Basis, PeripheralStructure, WordError, make_peripheral_structure
from . import stallings
from .stallings import CoverGraph, clean_subgroup, elevations, rose
from . import whitehead
from . import gog as gog_mod
from .gog import GraphOfGroups, Presentation


def _elevs(cover, word):
    """Elevation list, cached per cover instance and word."""
    cache = getattr(cover, "_elev_cache", None)
    if cache is None:
        cache = {}
        cover._elev_cache = cache
    if word not in cache:
        cache[word] = elevations(cover, word)
    return cache[word]


def _local_word(cover, word, orbit_index):
    """Subgroup-basis word of one elevation, cached."""
    cache = getattr(cover, "_locword_cache", None)
    if cache is None:
        cache = {}
        cover._locword_cache = cache
    key = (word, orbit_index)
    if key not in cache:
        cache[key] = _elevs(cover, word)[orbit_index].local_word()
    return cache[key]


class PreCover:
    """Vertex covers plus a degree-preserving partial matching of elevations.

    matching entries are (edge_name, (plus_copy, plus_orbit),
    (minus_copy, minus_orbit)); the plus side lives at the edge's source
    vertex, the minus side at its target.
    """

    def __init__(self, base, vertex_covers, matching):
        self.base = base
        self.vertex_covers = {v: list(cs) for v, cs in vertex_covers.items()}
        for v in base.vertex_names:
            self.vertex_covers.setdefault(v, [])
        self.matching = [
            (e, (pc, po), (mc, mo)) for e, (pc, po), (mc, mo) in matching
        ]
        self._validate()

    # -- structure ---------------------------------------------------------

    def side_elevations(self, e, side):
        """Elevations of one edge end over the whole fiber: (copy, orbit) ids."""
        edge = self.base.edge(e)
        v, w = (edge.frm, edge.word_plus) if side == "+" else (edge.to, edge.word_minus)
        out = []
        for ci, cover in enumerate(self.vertex_covers[v]):
            for oi in range(len(_elevs(cover, w))):
                out.append((ci, oi))
        return out

    def elevation_degree(self, e, side, ci, oi):
        edge = self.base.edge(e)
        v, w = (edge.frm, edge.word_plus) if side == "+" else (edge.to, edge.word_minus)
        return _elevs(self.vertex_covers[v][ci], w)[oi].degree

    def _validate(self):
        used = set()
        for e, plus, minus in self.matching:
            edge = self.base.edge(e)
            for side, (ci, oi) in (("+", plus), ("-", minus)):
                v = edge.frm if side == "+" else edge.to
                w = edge.word_plus if side == "+" else edge.word_minus
                if ci >= len(self.vertex_covers[v]):
                    raise WordError("matching references missing copy %d of %s" % (ci, v))
                if oi >= len(_elevs(self.vertex_covers[v][ci], w)):
                    raise WordError("matching references missing elevation %d" % oi)
                key = (e, side, ci, oi)
                if key in used:
                    raise WordError("elevation matched twice: %s" % (key,))
                used.add(key)
            if self.elevation_degree(e, "+", *plus) != self.elevation_degree(e, "-", *minus):
                raise WordError(
                    "degree mismatch on edge %s: %s vs %s" % (e, plus, minus)
                )

    def hanging(self):
        """Unmatched elevations as (edge, side, copy, orbit), sorted."""
        if getattr(self, "_hanging_cache", None) is not None:
            return self._hanging_cache
        matched = set()
        for e, (pc, po), (mc, mo) in self.matching:
            matched.add((e, "+", pc, po))
            matched.add((e, "-", mc, mo))
        out = []
        for edge in self.base.edges:
            for side in ("+", "-"):
                for ci, oi in self.side_elevations(edge.name, side):
                    key = (edge.name, side, ci, oi)
                    if key not in matched:
                        out.append(key)
        self._hanging_cache = sorted(out)
        return self._hanging_cache

    def is_complete_cover(self):
        return not self.hanging()

    def copies(self):
        """All vertex copies (vertex, index) in base vertex order."""
        return [
            (v, i)
            for v in self.base.vertex_names
            for i in range(len(self.vertex_covers[v]))
        ]

    def cover_of(self, copy):
        return self.vertex_covers[copy[0]][copy[1]]

    def matched_edges(self):
        """Matching entries with their endpoint copies, in matching order."""
        if getattr(self, "_matched_cache", None) is not None:
            return self._matched_cache
        out = []
        for idx, (e, plus, minus) in enumerate(self.matching):
            edge = self.base.edge(e)
            out.append(
                {
                    "index": idx,
                    "edge": e,
                    "plus": plus,
                    "minus": minus,
                    "copy_plus": (edge.frm, plus[0]),
                    "copy_minus": (edge.to, minus[0]),
                }
            )
        self._matched_cache = out
        return out

    def components(self):
        """Partition of the copies under the matched edges."""
        parent = {c: c for c in self.copies()}

        def find(c):
            while parent[c] != c:
                parent[c] = parent[parent[c]]
                c = parent[c]
            return c

        for m in self.matched_edges():
            a, b = find(m["copy_plus"]), find(m["copy_minus"])
            if a != b:
                parent[b] = a
        groups = {}
        for c in self.copies():
            groups.setdefault(find(c), []).append(c)
        return sorted(groups.values())

    def restrict_to_component(self, copy):
        """The sub-pre-cover on the component of the given copy."""
        comp = None
        for group in self.components():
            if copy in group:
                comp = set(group)
                break
        if comp is None:
            raise WordError("copy %r not present" % (copy,))
        keep = {}
        renumber = {}
        for v in self.base.vertex_names:
            keep[v] = [
                i for i in range(len(self.vertex_covers[v])) if (v, i) in comp
            ]
            renumber.update({(v, i): k for k, i in enumerate(keep[v])})
        new_covers = {v: [self.vertex_covers[v][i] for i in keep[v]] for v in keep}
        new_matching = []
        for m in self.matched_edges():
            if m["copy_plus"] in comp:
                e = m["edge"]
                pc, po = m["plus"]
                mc, mo = m["minus"]
                new_matching.append(
                    (
                        e,
                        (renumber[m["copy_plus"]], po),
                        (renumber[m["copy_minus"]], mo),
                    )
                )
        return PreCover(self.base, new_covers, new_matching)

    def total_degree(self, v):
        return sum(c.degree for c in self.vertex_covers[v])

    def is_degree_uniform(self):
        degs = {self.total_degree(v) for v in self.base.vertex_names}
        return len(degs) <= 1

    # -- serialization -----------------------------------------------------

    def to_json(self):
        return {
            "base": self.base.to_json(),
            "vertex_covers": {
                v: [c.to_json() for c in self.vertex_covers[v]]
                for v in self.base.vertex_names
            },
            "matching": [
                [e, list(plus), list(minus)] for e, plus, minus in self.matching
            ],
            "hanging": [list(h) for h in self.hanging()],
        }

    @classmethod
    def from_json(cls, data):
        base = GraphOfGroups.from_json(data["base"])
        # identical copies are interned so elevation caches are shared
        intern = {}

        def load(v, cj):
            key = (v, json.dumps(cj, sort_keys=True))
            if key not in intern:
                intern[key] = CoverGraph.from_json(cj, base.basis(v))
            return intern[key]

        covers = {
            v: [load(v, cj) for cj in cjs] for v, cjs in data["vertex_covers"].items()
        }
        matching = [
            (e, (plus[0], plus[1]), (minus[0], minus[1]))
            for e, plus, minus in data["matching"]
        ]
        p = cls(base, covers, matching)
        if "hanging" in data:
            if [list(h) for h in p.hanging()] != data["hanging"]:
                raise WordError("serialized hanging list is inconsistent")
        return p

    def to_dot(self, name="precover"):
        """DOT of the underlying graph: copies as nodes, matched pairs as edges."""
        lines = ["graph %s {" % name]
        for v, i in self.copies():
            deg = self.cover_of((v, i)).degree
            lines.append('  "%s:%d" [label="%s:%d (deg %d)"];' % (v, i, v, i, deg))
        for m in self.matched_edges():
            a = "%s:%d" % m["copy_plus"]
            b = "%s:%d" % m["copy_minus"]
            lines.append('  "%s" -- "%s" [label="%s"];' % (a, b, m["edge"]))
        lines.append("}")
        return "\n".join(lines)

    def __repr__(self):
        return "PreCover(%d copies, %d matched, %d hanging)" % (
            len(self.copies()),
            len(self.matching),
            len(self.hanging()),
        )


class GogCover(PreCover):
    """A pre-cover with no hanging elevations: a finite cover."""

    def __init__(self, base, vertex_covers, matching):
        super().__init__(base, vertex_covers, matching)
        if self.hanging():
            raise WordError("cover has hanging elevations")
        if not self.is_degree_uniform():
            raise WordError("vertex fibers have unequal total degrees")

    def degree(self):
        return self.total_degree(self.base.vertex_names[0])

    def __repr__(self):
        return "GogCover(degree %d, %d copies)" % (self.degree(), len(self.copies()))


def glue(base, vertex_covers, matching):
    """Assemble a pre-cover; classified as a GogCover when nothing hangs."""
    p = PreCover(base, vertex_covers, matching)
    if p.is_complete_cover() and p.is_degree_uniform():
        return GogCover(base, vertex_covers, matching)
    return p


def elevation_table(p):
    """Per edge end and vertex copy, the elevation list with matched marks."""
    matched = {}
    for idx, (e, plus, minus) in enumerate(p.matching):
        matched[(e, "+") + plus] = idx
        matched[(e, "-") + minus] = idx
    table = []
    for edge in p.base.edges:
        for side in ("+", "-"):
            v = edge.frm if side == "+" else edge.to
            w = edge.word_plus if side == "+" else edge.word_minus
            for ci, cover in enumerate(p.vertex_covers[v]):
                for oi, ev in enumerate(_elevs(cover, w)):
                    key = (edge.name, side, ci, oi)
                    idx = matched.get(key)
                    table.append(
                        {
                            "edge": edge.name,
                            "side": side,
                            "vertex": v,
                            "copy": ci,
                            "orbit": oi,
                            "degree": ev.degree,
                            "matched": idx is not None,
                            "pair_index": idx,
                        }
                    )
    return table


# -- extension of vertex covers to covers of the whole graph ----------------


def _is_mirrorable_double(g):
    """Two distinct vertices of equal rank, every edge between them with equal words."""
    if len(g.vertex_names) != 2:
        return False
    u, v = g.vertex_names
    if g.basis(u).rank != g.basis(v).rank:
        return False
    for e in g.edges:
        if e.is_loop() or {e.frm, e.to} != {u, v}:
            return False
        if e.word_plus != e.word_minus:
            return False
    return bool(g.edges)


def enumerate_covers(basis, degree):
    """Connected pointed covers of the rose of the given degree.

    Enumerated as canonical coset tables: sheet k > 0 first appears as the
    image of the smallest earlier slot, so each pointed isomorphism class
    occurs exactly once.  Yields CoverGraph objects.
    """
    r = basis.rank
    if degree == 1:
        yield rose(basis)
        return
    # slots scanned over introduced sheets only, so tables stay connected;
    # partial tables built depth-first with inverse tables for injectivity
    def backtrack(tables, inverses, next_new):
        slot = None
        for s in range(next_new):
            for l in range(r):
                if tables[l][s] is None:
                    slot = (s, l)
                    break
            if slot:
                break
        if slot is None:
            if next_new == degree:
                perms = {l + 1: tuple(tables[l]) for l in range(r)}
                yield CoverGraph(basis, perms)
            return
        s, l = slot
        cands = [t for t in range(next_new) if inverses[l][t] is None]
        if next_new < degree:
            cands.append(next_new)
        for t in cands:
            tables[l][s] = t
            inverses[l][t] = s
            yield from backtrack(tables, inverses, next_new + (1 if t == next_new else 0))
            tables[l][s] = None
            inverses[l][t] = None

    tables = [[None] * degree for _ in range(r)]
    inverses = [[None] * degree for _ in range(r)]
    yield from backtrack(tables, inverses, 1)


def _fiber_candidates(basis, total, max_attempts):
    """Multisets of connected covers with total degree `total`.

    Parts are nonincreasing in degree and, within a degree, nondecreasing
    in a canonical key, so each multiset appears once.
    """
    pool = {}

    def covers_of(d):
        if d not in pool:
            pool[d] = list(enumerate_covers(basis, d))
        return pool[d]

    count = [0]

    def rec(remaining, max_part, min_index_at_part):
        if remaining == 0:
            yield []
            return
        for d in range(min(remaining, max_part), 0, -1):
            cs = covers_of(d)
            start = min_index_at_part if d == max_part else 0
            for i in range(start, len(cs)):
                count[0] += 1
                if count[0] > max_attempts:
                    raise SearchExhausted("fiber enumeration budget exhausted")
                for rest in rec(remaining - d, d, i):
                    yield [cs[i]] + rest

    yield from rec(total, total, 0)


def _edge_degree_multisets_match(p_covers, m_covers, word_plus, word_minus):
    plus = sorted(
        ev.degree for c in p_covers for ev in _elevs(c, word_plus)
    )
    minus = sorted(
        ev.degree for c in m_covers for ev in _elevs(c, word_minus)
    )
    return plus == minus


def _match_edge(p_covers, m_covers, word_plus, word_minus):
    """Order-preserving degree-respecting bijection between two elevation sides."""
    plus = sorted(
        (ev.degree, ci, oi)
        for ci, c in enumerate(p_covers)
        for oi, ev in enumerate(_elevs(c, word_plus))
    )
    minus = sorted(
        (ev.degree, ci, oi)
        for ci, c in enumerate(m_covers)
        for oi, ev in enumerate(_elevs(c, word_minus))
    )
    pairs = []
    for (dp, pc, po), (dm, mc, mo) in zip(plus, minus):
        if dp != dm:
            return None
        pairs.append(((pc, po), (mc, mo)))
    return pairs


def extend_to_cover(g, required, max_degree=8, max_attempts=200000):
    """Extend required vertex covers to a finite cover of the whole graph.

    Doubles with mirror-symmetric attaching words take the mirror shortcut:
    the required cover is copied to the opposite vertex and identical
    elevation lists are matched identically.  Otherwise a bounded search
    assigns each remaining vertex a fiber of connected covers of matching
    total degree, pruned by per-edge elevation degree multisets.  The
    designated fibers consist of exactly the required covers; failure
    raises SearchExhausted (not a disproof).
    """
    problems = gog_mod.validate(g)
    if problems:
        raise WordError("; ".join(problems))
    if not required:
        raise WordError("need at least one required vertex cover")
    for v, c in required.items():
        if c.basis != g.basis(v):
            raise WordError("required cover at %s has the wrong basis" % v)

    if _is_mirrorable_double(g) and len(required) == 1:
        (v, cov), = required.items()
        u = next(nm for nm in g.vertex_names if nm != v)
        covers = {v: [cov], u: [cov]}
        # identical covers on both sides have identical elevation lists
        matching = []
        for e in g.edges:
            for oi in range(len(_elevs(cov, e.word_plus))):
                matching.append((e.name, (0, oi), (0, oi)))
        return GogCover(g, covers, matching)

    degrees = {c.degree for c in required.values()}
    if len(degrees) != 1:
        raise SearchExhausted("required covers have unequal degrees")
    d = degrees.pop()
    if d > max_degree:
        raise SearchExhausted("required degree %d exceeds search bound %d" % (d, max_degree))

    fixed = {v: [c] for v, c in required.items()}
    free = [v for v in g.vertex_names if v not in fixed]

    # edges inside the fixed region must already match
    def region_consistent(assign):
        for e in g.edges:
            if e.frm in assign and e.to in assign:
                if not _edge_degree_multisets_match(
                    assign[e.frm], assign[e.to], e.word_plus, e.word_minus
                ):
                    return False
        return True

    def solve(assign, todo):
        if not region_consistent(assign):
            return None
        if not todo:
            matching = []
            for e in g.edges:
                pairs = _match_edge(
                    assign[e.frm], assign[e.to], e.word_plus, e.word_minus
                )
                if pairs is None:
                    return None
                matching.extend((e.name, p, m) for p, m in pairs)
            covers = {v: assign[v] for v in g.vertex_names}
            return GogCover(g, covers, matching)
        v = todo[0]
        for fiber in _fiber_candidates(g.basis(v), d, max_attempts):
            assign[v] = fiber
            ok = True
            for e in g.edges:
                other = None
                if e.frm == v and e.to in assign:
                    other = _edge_degree_multisets_match(
                        fiber, assign[e.to], e.word_plus, e.word_minus
                    )
                elif e.to == v and e.frm in assign:
                    other = _edge_degree_multisets_match(
                        assign[e.frm], fiber, e.word_plus, e.word_minus
                    )
                if other is False:
                    ok = False
                    break
            if ok:
                result = solve(assign, todo[1:])
                if result is not None:
                    return result
            del assign[v]
        return None

    result = solve(dict(fixed), free)
    if result is None:
        raise SearchExhausted(
            "no extension found with fibers of degree %d (bound %d)" % (d, max_degree)
        )
    return result


# -- fundamental groups of pre-covers ---------------------------------------


def _shift(word, offset):
    return tuple(x + offset if x > 0 else x - offset for x in word)


def _inv(word):
    return tuple(-x for x in reversed(word))


class Embedding:
    """Generators of a pre-cover's group as words in the base presentation.

    Paths to copies are stored symbolically (matched-edge crossings); the
    base-presentation words are expanded on demand, so large pre-covers
    stay cheap to build and serialize.
    """

    def __init__(self, precover, base_presentation, copy_paths, gen_layout, stable=None):
        self.precover = precover
        self.base_presentation = base_presentation
        self.copy_paths = copy_paths  # copy -> tuple of (match_index, direction)
        self.gen_layout = gen_layout  # list of (copy, local_index)
        self.stable = stable or {}  # generator index -> match index
        g = precover.base
        self._voffset = {}
        off = 0
        for v in g.vertex_names:
            self._voffset[v] = off
            off += g.basis(v).rank
        self._stable = {
            e: idx for e, idx in base_presentation.provenance.get("stable", {}).items()
        }
        self._path_cache = {}

    def _emb_vertex_word(self, v, word):
        off = self._voffset[v]
        return _shift(word, off)

    def _crossing_word(self, match_index, direction):
        p = self.precover
        m = p.matched_edges()[match_index]
        e = p.base.edge(m["edge"])
        ev_p = _elevs(p.cover_of(m["copy_plus"]), e.word_plus)[m["plus"][1]]
        ev_m = _elevs(p.cover_of(m["copy_minus"]), e.word_minus)[m["minus"][1]]
        stable = self._stable.get(e.name)
        word = self._emb_vertex_word(e.frm, ev_p.conjugator)
        if stable is not None:
            word = word + (stable,)
        word = word + _inv(self._emb_vertex_word(e.to, ev_m.conjugator))
        return word if direction > 0 else _inv(word)

    def path_word(self, copy):
        """Base-presentation word of the tree path from the basepoint copy."""
        if copy not in self._path_cache:
            out = ()
            for match_index, direction in self.copy_paths[copy]:
                out = out + self._crossing_word(match_index, direction)
            from .words import reduce_word

            self._path_cache[copy] = reduce_word(out)
        return self._path_cache[copy]

    def word_for(self, gen_index):
        """Base-presentation word of the gen_index-th pre-cover generator (1-based)."""
        from .words import reduce_word

        if gen_index in self.stable:
            m = self.precover.matched_edges()[self.stable[gen_index]]
            word = (
                self.path_word(m["copy_plus"])
                + self._crossing_word(m["index"], +1)
                + _inv(self.path_word(m["copy_minus"]))
            )
            return reduce_word(word)
        copy, local = self.gen_layout[gen_index - 1]
        cover = self.precover.cover_of(copy)
        local_word = cover.subgroup_basis()[local]
        body = self._emb_vertex_word(copy[0], local_word)
        path = self.path_word(copy)
        return reduce_word(path + body + _inv(path))

    def to_json(self):
        return {
            "copy_paths": {
                "%s:%d" % c: [[mi, d] for mi, d in path]
                for c, path in sorted(self.copy_paths.items())
            },
            "generator_layout": [["%s:%d" % c, j] for c, j in self.gen_layout],
        }


class Pi1Result:
    def __init__(self, presentation, embedding, certificate):
        self.presentation = presentation
        self.embedding = embedding
        self.certificate = certificate


def pi1_precover(p):
    """Graph-of-groups presentation of the fundamental group of a pre-cover.

    Vertex groups contribute their subgroup bases; matched non-tree edges
    contribute stable letters; each matched edge contributes one relator
    pairing its two elevation words.  Emits a MONOMORPHISM certificate
    recording the structural hypotheses (valid matching, connectivity).
    """
    if len(p.components()) > 1:
        raise WordError("pre-cover is disconnected; restrict to a component first")
    copies = p.copies()
    gen_names = []
    gen_layout = []
    offset = {}
    for c in copies:
        offset[c] = len(gen_names)
        cover = p.cover_of(c)
        for j in range(cover.subgroup_rank()):
            gen_names.append("%s.%d.g%d" % (c[0], c[1], j + 1))
            gen_layout.append((c, j))
    matched = p.matched_edges()
    # BFS spanning tree over copies in matching order
    tree_idx = set()
    paths = {copies[0]: ()}
    frontier = True
    while frontier:
        frontier = False
        for m in matched:
            a, b = m["copy_plus"], m["copy_minus"]
            if a in paths and b not in paths:
                paths[b] = paths[a] + ((m["index"], +1),)
                tree_idx.add(m["index"])
                frontier = True
            elif b in paths and a not in paths:
                paths[a] = paths[b] + ((m["index"], -1),)
                tree_idx.add(m["index"])
                frontier = True
    stable = {}
    for m in matched:
        if m["index"] not in tree_idx:
            stable[m["index"]] = len(gen_names) + 1
            gen_names.append("t%d" % m["index"])
    relators = []
    for m in matched:
        e = p.base.edge(m["edge"])
        up = _local_word(p.cover_of(m["copy_plus"]), e.word_plus, m["plus"][1])
        um = _local_word(p.cover_of(m["copy_minus"]), e.word_minus, m["minus"][1])
        wp = _shift(up, offset[m["copy_plus"]])
        wm = _shift(um, offset[m["copy_minus"]])
        if m["index"] in tree_idx:
            relators.append(wp + _inv(wm))
        else:
            t = stable[m["index"]]
            relators.append((t,) + wp + (-t,) + _inv(wm))
    pres = Presentation(
        gen_names,
        relators,
        provenance={
            "kind": "precover",
            "tree_matches": sorted(tree_idx),
            "stable": {str(k): v for k, v in sorted(stable.items())},
        },
    )
    base_pres = gog_mod.presentation(p.base)
    embedding = Embedding(
        p, base_pres, paths, gen_layout, stable={v: k for k, v in stable.items()}
    )
    cert = Certificate(
        "MONOMORPHISM",
        {
            "precover": p.to_json(),
            "connected": True,
            "presentation": {
                "generators": len(pres.generators),
                "relators": len(pres.relators),
                "euler_characteristic": pres.euler_characteristic(),
            },
        },
    )
    return Pi1Result(pres, embedding, cert)


# -- certificates ------------------------------------------------------------


class Certificate:
    """A replayable claim: kind plus the evidence needed to re-verify it."""

    def __init__(self, kind, evidence):
        if kind not in ("MONOMORPHISM", "INFINITE_INDEX", "ONE_ENDED"):
            raise WordError("unknown certificate kind %r" % kind)
        self.kind = kind
        self.evidence = evidence

    def to_json(self):
        return {"kind": self.kind, "evidence": self.evidence}

    @classmethod
    def from_json(cls, data):
        return cls(data["kind"], data["evidence"])

    def __repr__(self):
        return "Certificate(%s)" % self.kind


def matched_peripheral_words(p, copy):
    """Local words of the matched elevations at one vertex copy."""
    index = getattr(p, "_copy_words_index", None)
    if index is None:
        index = {}
        for m in p.matched_edges():
            e = p.base.edge(m["edge"])
            index.setdefault(m["copy_plus"], []).append((e.word_plus, m["plus"][1]))
            index.setdefault(m["copy_minus"], []).append((e.word_minus, m["minus"][1]))
        p._copy_words_index = index
    cover = p.cover_of(copy)
    return [_local_word(cover, w, oi) for w, oi in index.get(copy, [])]


def one_ended_certificate(p, rank_cap=4):
    """Per-copy free indecomposability of the matched peripheral multiword.

    Hanging elevations are excluded (they are not edges of the pre-cover).
    Returns (certificate_or_None, per_copy_report); a CapExceeded from the
    Whitehead minimization propagates with the offending copy named.
    """
    report = []
    all_ok = True
    cache = {}
    for copy in p.copies():
        cover = p.cover_of(copy)
        words = matched_peripheral_words(p, copy)
        sub = cover.sub_basis()
        ps = make_peripheral_structure(sub, words) if words else PeripheralStructure(sub, [])
        key = (id(cover), ps.class_set())
        if key in cache:
            ok, wit = cache[key]
        else:
            try:
                ok, wit = whitehead.is_freely_indecomposable(sub, ps.words(), rank_cap=rank_cap)
            except CapExceeded as exc:
                raise CapExceeded("copy %s:%d: %s" % (copy[0], copy[1], exc)) from exc
            cache[key] = (ok, wit)
        all_ok = all_ok and ok
        entry = {
            "vertex": copy[0],
            "copy": copy[1],
            "classes": len(ps),
            "indecomposable": ok,
        }
        if "shortcut" in wit:
            entry["shortcut"] = wit["shortcut"]
        if not ok and "partition" in wit:
            entry["partition"] = [list(s) for s in wit["partition"]]
        report.append(entry)
    if not all_ok:
        return None, report
    cert = Certificate("ONE_ENDED", {"precover": p.to_json(), "per_copy": report})
    return cert, report


def infinite_index_certificate(p):
    """Infinite index from a hanging elevation over a reduced base.

    Returns (certificate_or_None, reason); NOT_APPLICABLE cases give None
    with the reason.
    """
    if not gog_mod.is_reduced(p.base):
        return None, "NOT_APPLICABLE: base is not reduced (apply collapse_reduce first)"
    hanging = p.hanging()
    if not hanging:
        return None, "NOT_APPLICABLE: pre-cover is a finite cover (finite index)"
    cert = Certificate(
        "INFINITE_INDEX",
        {
            "precover": p.to_json(),
            "base_reduced": True,
            "hanging": [list(h) for h in hanging],
            "witness": list(hanging[0]),
        },
    )
    return cert, "hanging elevation %s" % (hanging[0],)


def verify_certificate(data):
    """Replay a serialized certificate from its evidence alone.

    Returns (ok, report).  Structural hypotheses are always re-verified by
    reconstructing the pre-cover; ONE_ENDED re-runs the Whitehead checks.
    """
    cert = data if isinstance(data, Certificate) else Certificate.from_json(data)
    ev = cert.evidence
    try:
        p = PreCover.from_json(ev["precover"])
    except (WordError, KeyError) as exc:
        return False, {"error": "pre-cover reconstruction failed: %s" % exc}
    if cert.kind == "MONOMORPHISM":
        if len(p.components()) > 1:
            return False, {"error": "pre-cover is disconnected"}
        pres = pi1_precover(p).presentation
        want = ev.get("presentation", {})
        got = {
            "generators": len(pres.generators),
            "relators": len(pres.relators),
            "euler_characteristic": pres.euler_characteristic(),
        }
        if want != got:
            return False, {"error": "presentation mismatch", "want": want, "got": got}
        return True, {"kind": cert.kind, "presentation": got}
    if cert.kind == "INFINITE_INDEX":
        if not gog_mod.is_reduced(p.base):
            return False, {"error": "base is not reduced"}
        hanging = [list(h) for h in p.hanging()]
        if not hanging:
            return False, {"error": "no hanging elevations"}
        if hanging != ev.get("hanging"):
            return False, {"error": "hanging list mismatch"}
        return True, {"kind": cert.kind, "hanging": len(hanging)}
    if cert.kind == "ONE_ENDED":
        _, report = one_ended_certificate(p)
        recorded = ev.get("per_copy", [])
        if len(report) != len(recorded):
            return False, {"error": "per-copy report length mismatch"}
        for got, want in zip(report, recorded):
            if (got["vertex"], got["copy"], got["indecomposable"]) != (
                want["vertex"],
                want["copy"],
                want["indecomposable"],
            ):
                return False, {"error": "per-copy mismatch", "want": want, "got": got}
            if not got["indecomposable"]:
                return False, {"error": "copy %s:%d not indecomposable" % (got["vertex"], got["copy"])}
        return True, {"kind": cert.kind, "copies": len(report)}
    return False, {"error": "unknown kind"}


# -- the main construction ---------------------------------------------------


class BuildResult:
    def __init__(self, precover, presentation, embedding, certificates, stats):
        self.precover = precover
        self.presentation = presentation
        self.embedding = embedding
        self.certificates = certificates
        self.stats = stats

    def to_json(self):
        return {
            "precover": self.precover.to_json(),
            "presentation": self.presentation.to_json(),
            "embedding": self.embedding.to_json(),
            "certificates": [c.to_json() for c in self.certificates],
            "stats": self.stats,
        }


def build_one_ended_subgroup(
    g,
    v,
    rank_cap=4,
    degree_cap=5040,
    search_degree_max=8,
    assume_rigid=False,
):
    """Finitely generated one-ended subgroup of infinite index as a pre-cover.

    Pipeline: clean cover of the designated rigid vertex; extension to a
    finite cover of the whole graph; assembly of m + 2n vertex-cover copies
    and m + 2n - 1 copies of the complement of the designated copy's star,
    with one designated elevation excluded per copy and the rest matched by
    the deterministic degree-preserving bijection; restriction to the
    component of the first copy; certificates.

    Aborts if the certificates fail, which would indicate a construction
    bug rather than a negative mathematical result.
    """
    problems = gog_mod.validate(g)
    if problems:
        raise WordError("; ".join(problems))
    if not gog_mod.is_reduced(g):
        raise WordError("base is not reduced; apply collapse_reduce first")
    if v not in g.vertex_basis:
        raise WordError("unknown vertex %r" % v)
    psv = gog_mod.vertex_peripheral_structure(g, v)
    if not len(psv):
        raise WordError("vertex %s has no incident edge words" % v)
    cls = whitehead.classify_pair(g.basis(v), psv.words(), rank_cap=rank_cap)
    if cls.tag == whitehead.PairClassification.RIGID_CANDIDATE:
        pass
    elif assume_rigid and cls.tag == whitehead.PairClassification.INCONCLUSIVE:
        pass
    else:
        raise WordError(
            "vertex %s classifies as %s; the construction needs a rigid candidate" % (v, cls.tag)
        )
    for u in g.vertex_names:
        if u == v:
            continue
        psu = gog_mod.vertex_peripheral_structure(g, u)
        ok, _ = whitehead.is_freely_indecomposable(g.basis(u), psu.words(), rank_cap=rank_cap)
        if not ok:
            raise WordError("vertex %s is freely decomposable relative to its edges" % u)

    clean = clean_subgroup(psv.words(), within=rose(g.basis(v)), degree_cap=degree_cap)
    xhat = extend_to_cover(g, {v: clean}, max_degree=max(search_degree_max, clean.degree))
    assert len(xhat.vertex_covers[v]) == 1, "designated fiber must be a single copy"
    des = (v, 0)

    matched = xhat.matched_edges()
    m_edges = [m for m in matched if (m["copy_plus"] == des) != (m["copy_minus"] == des)]
    n_loops = [m for m in matched if m["copy_plus"] == des and m["copy_minus"] == des]
    internal = [m for m in matched if m["copy_plus"] != des and m["copy_minus"] != des]
    m, n = len(m_edges), len(n_loops)
    total_y = m + 2 * n
    n_z = total_y - 1
    if total_y == 0:
        raise WordError("designated copy meets no edges of the cover")

    fiber_sizes = {u: len(xhat.vertex_covers[u]) for u in g.vertex_names}
    covers_w = {v: [clean] * total_y}
    for u in g.vertex_names:
        if u != v:
            covers_w[u] = list(xhat.vertex_covers[u]) * n_z

    matching = []
    # internal machinery of X', replicated in each Z block
    for k in range(n_z):
        for mm in internal:
            e = g.edge(mm["edge"])
            pc, po = mm["plus"]
            mc, mo = mm["minus"]
            matching.append(
                (
                    mm["edge"],
                    (k * fiber_sizes[e.frm] + pc, po),
                    (k * fiber_sizes[e.to] + mc, mo),
                )
            )
    # families from edges meeting the designated copy in one end
    for i, mm in enumerate(m_edges):
        e = g.edge(mm["edge"])
        if mm["copy_plus"] == des:
            v_side, v_orbit = "+", mm["plus"][1]
            oc, oo = mm["minus"]
            other_vertex = e.to
        else:
            v_side, v_orbit = "-", mm["minus"][1]
            oc, oo = mm["plus"]
            other_vertex = e.frm
        y_list = [yc for yc in range(total_y) if yc != i]
        z_list = [(k * fiber_sizes[other_vertex] + oc, oo) for k in range(n_z)]
        assert len(y_list) == len(z_list) == n_z
        for yc, z in zip(y_list, z_list):
            if v_side == "+":
                matching.append((mm["edge"], (yc, v_orbit), z))
            else:
                matching.append((mm["edge"], z, (yc, v_orbit)))
    # families from loops of the cover at the designated copy
    for j, mm in enumerate(n_loops):
        po = mm["plus"][1]
        mo = mm["minus"][1]
        plus_list = [yc for yc in range(total_y) if yc != m + j]
        minus_list = [yc for yc in range(total_y) if yc != m + n + j]
        assert len(plus_list) == len(minus_list) == n_z
        for yp, ym in zip(plus_list, minus_list):
            matching.append((mm["edge"], (yp, po), (ym, mo)))

    w_full = PreCover(g, covers_w, matching)
    hanging_before = w_full.hanging()
    assert len(hanging_before) == total_y, "hanging bookkeeping must balance m + 2n"
    w = w_full.restrict_to_component((v, 0))

    pi1 = pi1_precover(w)
    one_cert, one_report = one_ended_certificate(w, rank_cap=rank_cap)
    inf_cert, inf_reason = infinite_index_certificate(w)
    if one_cert is None:
        raise RuntimeError(
            "one-endedness certificate failed (construction bug): %r"
            % [r for r in one_report if not r["indecomposable"]]
        )
    if inf_cert is None:
        raise RuntimeError("infinite-index certificate failed (construction bug): %s" % inf_reason)
    stats = {
        "vertex": v,
        "classification": cls.tag,
        "clean_cover_degree": clean.degree,
        "extension_degree": xhat.total_degree(v),
        "m": m,
        "n": n,
        "internal": len(internal),
        "copies": len(w.copies()),
        "matched": len(w.matching),
        "matched_before_component": len(w_full.matching),
        "hanging": len(w.hanging()),
        "hanging_before_component": len(hanging_before),
        "generators": len(pi1.presentation.generators),
        "relators": len(pi1.presentation.relators),
    }
    return BuildResult(
        w, pi1.presentation, pi1.embedding, [pi1.certificate, one_cert, inf_cert], stats
    )

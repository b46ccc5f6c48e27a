"""The commensurability preorder on marked subgroups and the descent step.

A marked subgroup is a finitely generated subgroup of the ambient free
group together with a peripheral structure compatible with the ambient
one (every class lies in the pullback).  Comparison follows the two-clause
definition: finite index of the intersection in the smaller side, and
compatibility of the induced structure when the intersection also has
finite index in the larger side.
"""

from .errors import CapExceeded
from .words import Basis, WordError, make_peripheral_structure, reduce_word
from . import stallings
from .stallings import from_generators, intersect, pullback_structure, rose, clean_subgroup
from . import whitehead


def expand_word(graph, word):
    """Rewrite a word over a graph's subgroup basis as an ambient word."""
    gens = graph.subgroup_basis()
    out = []
    for x in word:
        g = gens[abs(x) - 1]
        out.extend(g if x > 0 else tuple(-y for y in reversed(g)))
    return reduce_word(out)


def _move_preimage_word(m, word):
    """Apply the inverse of a Whitehead move to a plain (non-cyclic) word."""
    out = []
    for x in word:
        if x == m.a or x == -m.a:
            out.append(x)
            continue
        if -x in m.letters:
            out.append(m.a)
        out.append(x)
        if x in m.letters:
            out.append(-m.a)
    return reduce_word(out)


def undo_moves(moves, word):
    """Invert a move sequence on a plain word (moves were applied in order)."""
    for m in reversed(moves):
        word = _move_preimage_word(m, word)
    return word


class MarkedSubgroup:
    """A subgroup core graph with a compatible peripheral structure.

    The structure lives in the graph's own subgroup basis; the ambient
    peripheral structure is carried along for compatibility checks.
    """

    def __init__(self, ambient_basis, ambient_structure, graph, structure, check=True):
        self.ambient_basis = ambient_basis
        self.ambient_structure = ambient_structure
        self.graph = graph
        self.structure = structure
        if check and not is_compatible(graph, structure, ambient_structure):
            raise WordError("structure is not compatible with the ambient pullback")

    @classmethod
    def top(cls, ambient_basis, ambient_words):
        """The ambient pair itself, marked on the rank-r rose."""
        ps = make_peripheral_structure(ambient_basis, ambient_words)
        graph = from_generators(
            ambient_basis, [(i + 1,) for i in range(ambient_basis.rank)]
        )
        full = pullback_structure(graph, ps)
        return cls(ambient_basis, ps, graph, full, check=False)

    @classmethod
    def from_generators(
        cls, ambient_basis, ambient_words, generators, structure_words=None, check=True
    ):
        """Marked subgroup from ambient generator words.

        The structure defaults to the full pullback of the ambient
        structure; explicit structure words are given in the subgroup's
        canonical basis.
        """
        ps = make_peripheral_structure(ambient_basis, ambient_words)
        graph = from_generators(ambient_basis, generators)
        if structure_words is None:
            structure = pullback_structure(graph, ps)
        else:
            structure = make_peripheral_structure(graph.sub_basis(), structure_words)
        return cls(ambient_basis, ps, graph, structure, check=check)

    def rank(self):
        return self.graph.subgroup_rank()

    def ambient_class_words(self):
        """Structure classes as ambient words."""
        return [expand_word(self.graph, rep.word) for rep in self.structure.classes()]

    def __repr__(self):
        return "MarkedSubgroup(rank=%d, classes=%d)" % (self.rank(), len(self.structure))

    def to_json(self):
        data = {
            "ambient_rank": self.ambient_basis.rank,
            "ambient_words": self.ambient_structure.to_json(),
            "generators": [
                self.ambient_basis.format(w) for w in self.graph.subgroup_basis()
            ],
        }
        if self.structure.basis.single_char:
            data["structure"] = self.structure.to_json()
        else:
            data["structure"] = [list(rep.word) for rep in self.structure.classes()]
        return data

    @classmethod
    def from_json(cls, data):
        basis = Basis(data["ambient_rank"])
        return cls.from_generators(
            basis,
            data["ambient_words"],
            data["generators"],
            structure_words=data.get("structure"),
        )


def is_compatible(graph, structure, ambient_structure):
    """Set inclusion of the structure's classes into the pullback structure."""
    pull = pullback_structure(graph, ambient_structure)
    return structure.class_set() <= pull.class_set()


def _classes_in(graph, ambient_words):
    """Canonical classes of ambient words rewritten in a graph's basis."""
    out = set()
    for w in ambient_words:
        local = graph.rewrite(w)
        if local is None:
            raise WordError("word does not lie in the subgroup")
        ps = make_peripheral_structure(graph.sub_basis(), [local])
        out |= ps.class_set()
    return out


def _subgroup_in(inner_graph, outer_graph):
    """Core graph of a subgroup rewritten inside an overgroup's basis."""
    gens = [outer_graph.rewrite(w) for w in inner_graph.subgroup_basis()]
    if any(g is None for g in gens):
        raise WordError("inner subgroup is not contained in the outer one")
    return from_generators(outer_graph.sub_basis(), gens)


def _leq(A, B):
    """Clause (1) and (2) of the preorder for A <= B."""
    inter = intersect(A.graph, B.graph)
    inter_in_A = _subgroup_in(inter, A.graph)
    if inter_in_A.index() == stallings.INFINITE:
        return False
    inter_in_B = _subgroup_in(inter, B.graph)
    if inter_in_B.index() == stallings.INFINITE:
        return True
    # induced structure of A on the intersection
    u_pull = pullback_structure(inter_in_A, A.structure)
    u_amb = [
        expand_word(A.graph, expand_word(inter_in_A, rep.word))
        for rep in u_pull.classes()
    ]
    v_pull = pullback_structure(inter_in_B, B.structure)
    v_amb = [
        expand_word(B.graph, expand_word(inter_in_B, rep.word))
        for rep in v_pull.classes()
    ]
    u_classes = _classes_in(inter, u_amb)
    v_classes = _classes_in(inter, v_amb)
    return u_classes <= v_classes


LEQ, GEQ, EQUIV, INCOMPARABLE = "LEQ", "GEQ", "EQUIV", "INCOMPARABLE"


def compare(A, B, up_to_conjugacy=False):
    """Compare two marked subgroups of the same ambient pair.

    Pointed semantics by default: intersections are genuine subgroup
    intersections.  The conjugacy-robust mode additionally maximizes over
    conjugates of B by its coset representatives and needs B of finite
    index.
    """
    if A.ambient_basis != B.ambient_basis or A.ambient_structure != B.ambient_structure:
        raise WordError("marked subgroups have different ambients")
    if not up_to_conjugacy:
        ab = _leq(A, B)
        ba = _leq(B, A)
    else:
        ab = any(_leq(A, Bc) for Bc in _conjugates(B))
        ba = any(_leq(Bc, A) for Bc in _conjugates(B))
    if ab and ba:
        return EQUIV
    if ab:
        return LEQ
    if ba:
        return GEQ
    return INCOMPARABLE


def _conjugates(B):
    """B conjugated by coset representatives; needs finite index."""
    if B.graph.index() == stallings.INFINITE:
        raise WordError("conjugacy-robust comparison needs a finite-index subgroup")
    reps = [B.graph.path_word(v) for v in range(B.graph.num_vertices)]
    out = []
    for g in reps:
        ginv = tuple(-x for x in reversed(g))
        gens = [
            reduce_word(ginv + w + g) for w in B.graph.subgroup_basis()
        ]
        graph = from_generators(B.ambient_basis, gens)
        structure_words = []
        for w in B.ambient_class_words():
            conj = reduce_word(ginv + w + g)
            local = graph.rewrite(conj)
            structure_words.append(local)
        structure = make_peripheral_structure(graph.sub_basis(), structure_words)
        out.append(
            MarkedSubgroup(
                B.ambient_basis, B.ambient_structure, graph, structure, check=False
            )
        )
    return out


def in_poset(A, rank_cap=4):
    """Membership in the poset: non-abelian, compatible, freely indecomposable."""
    if A.rank() < 2:
        return False
    if not is_compatible(A.graph, A.structure, A.ambient_structure):
        return False
    ok, _ = whitehead.is_freely_indecomposable(
        A.structure.basis, A.structure.words(), rank_cap=rank_cap
    )
    return ok


class DescendResult:
    MINIMAL = "MINIMAL"
    SMALLER = "SMALLER"
    INCONCLUSIVE = "INCONCLUSIVE"

    def __init__(self, kind, surface=None, smaller=None, witness=None, verification=None):
        self.kind = kind
        self.surface = surface
        self.smaller = smaller
        self.witness = witness or {}
        self.verification = verification or {}

    def __repr__(self):
        return "DescendResult(%s)" % self.kind

    def to_json(self):
        data = {"kind": self.kind}
        if self.surface is not None:
            data["surface"] = self.surface.to_json()
        if self.smaller is not None:
            data["smaller"] = self.smaller.to_json()
        if self.witness:
            data["witness"] = self.witness
        if self.verification:
            data["verification"] = self.verification
        return data


def descend(A, rank_cap=4, degree_cap=5040):
    """One descent step below a poset element.

    Surfaces are recognized as minimal; rigid candidates yield a strictly
    smaller element (clean cover marked with the pullback minus one class);
    a separating edge pair is reported as a cyclic-splitting witness
    without extracting the splitting.
    """
    if not in_poset(A, rank_cap=rank_cap):
        raise WordError("element is not in the poset")
    sub = A.structure.basis
    u_words = A.structure.words()
    ws_min, moves = whitehead.minimize(sub, u_words, rank_cap=max(rank_cap, sub.rank))
    surface = whitehead.surface_recognize(sub, ws_min, require_minimal=False)
    if surface is not None:
        return DescendResult(
            DescendResult.MINIMAL,
            surface=surface,
            witness={"moves": [m.to_json(sub) for m in moves]},
        )
    graph_min = whitehead.whitehead_graph(sub, ws_min)
    report = whitehead.connectivity_report(graph_min)
    assert report.connected, "poset element with disconnected minimal graph"
    if report.cut_edge_pairs or report.cut_vertex_edge_pairs:
        return DescendResult(
            DescendResult.INCONCLUSIVE,
            witness={
                "reason": "separating pair found; cyclic splitting witness only",
                "cuts": report.to_json(),
            },
        )
    # rigid candidate: clean cover in minimized coordinates, drop one class
    cover = clean_subgroup(ws_min, within=rose(sub), degree_cap=degree_cap)
    min_ps = make_peripheral_structure(sub, ws_min)
    pull = pullback_structure(cover, min_ps)
    kept = pull.classes()[1:]
    dropped = pull.classes()[0]

    def to_ambient(word_in_cover_basis):
        w_min_coords = expand_word(cover, word_in_cover_basis)
        w_H_coords = undo_moves(moves, w_min_coords)
        return expand_word(A.graph, w_H_coords)

    gens_amb = [to_ambient((k + 1,)) for k in range(cover.subgroup_rank())]
    new_graph = from_generators(A.ambient_basis, gens_amb)
    structure_words = []
    for rep in kept:
        amb = to_ambient(rep.word)
        local = new_graph.rewrite(amb)
        assert local is not None
        structure_words.append(local)
    new_structure = make_peripheral_structure(new_graph.sub_basis(), structure_words)
    smaller = MarkedSubgroup(
        A.ambient_basis, A.ambient_structure, new_graph, new_structure, check=True
    )
    verification = {
        "in_poset": in_poset(smaller, rank_cap=rank_cap),
        "compare": compare(smaller, A),
        "cover_degree": cover.degree,
        "dropped_class": list(dropped.word),
        "kept_classes": len(kept),
    }
    return DescendResult(
        DescendResult.SMALLER,
        smaller=smaller,
        witness={"moves": [m.to_json(sub) for m in moves]},
        verification=verification,
    )

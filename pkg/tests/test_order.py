import itertools
import random

import pytest

from oneend.words import Basis, WordError
from oneend.stallings import from_generators, pullback_structure
from oneend import order
from oneend.order import (
    EQUIV,
    GEQ,
    INCOMPARABLE,
    LEQ,
    DescendResult,
    MarkedSubgroup,
    compare,
    descend,
    in_poset,
    is_compatible,
)

from helpers import random_cover

B2 = Basis(2)
AMBIENT = ["abAB"]


def index2_subgroup(structure_words=None):
    return MarkedSubgroup.from_generators(
        B2, AMBIENT, ["aa", "b", "abA"], structure_words=structure_words
    )


def test_is_compatible_examples():
    A = index2_subgroup()
    assert is_compatible(A.graph, A.structure, A.ambient_structure)
    full = pullback_structure(A.graph, A.ambient_structure)
    if len(full) >= 2:
        partial = [rep.word for rep in full.classes()[:-1]]
        Ap = index2_subgroup(structure_words=partial)
        assert is_compatible(Ap.graph, Ap.structure, Ap.ambient_structure)
    # a class outside the pullback is rejected
    with pytest.raises(WordError):
        MarkedSubgroup.from_generators(B2, AMBIENT, ["aa", "b", "abA"], structure_words=["a"])


def test_compare_examples():
    top = MarkedSubgroup.top(B2, AMBIENT)
    A = index2_subgroup()
    assert compare(A, top) == EQUIV
    full = pullback_structure(A.graph, A.ambient_structure)
    assert len(full) == 2
    partial = [rep.word for rep in full.classes()[:-1]]
    Aminus = index2_subgroup(structure_words=partial)
    assert compare(Aminus, top) == LEQ
    assert compare(top, Aminus) == GEQ
    # disjoint-ish subgroups with trivial intersection are incomparable
    Aa = MarkedSubgroup.from_generators(B2, AMBIENT, ["abAB", "aabABA"], check=False)
    Bb = MarkedSubgroup.from_generators(B2, AMBIENT, ["babABA"], check=False)
    assert compare(Aa, Bb) == INCOMPARABLE


def test_in_poset_examples():
    assert in_poset(MarkedSubgroup.top(B2, AMBIENT))
    abelian = MarkedSubgroup.from_generators(B2, AMBIENT, ["a"], check=False)
    assert not in_poset(abelian)
    assert not in_poset(MarkedSubgroup.top(B2, ["aa"]))


def corpus(seed, size):
    """Marked subgroups of index <= 3 with compatible structure subsets."""
    rng = random.Random(seed)
    from oneend.covers import enumerate_covers

    subgroups = []
    for d in (1, 2, 3):
        subgroups.extend(enumerate_covers(B2, d))
    out = []
    while len(out) < size:
        cover = rng.choice(subgroups)
        gens = [B2.format(w) for w in cover.subgroup_basis()]
        graph = from_generators(B2, gens)
        ps = MarkedSubgroup.top(B2, AMBIENT).ambient_structure
        full = pullback_structure(graph, ps)
        classes = list(full.classes())
        if not classes:
            continue
        k = rng.randint(1, len(classes))
        chosen = rng.sample(classes, k)
        structure_words = [rep.word for rep in chosen]
        out.append(
            MarkedSubgroup.from_generators(B2, AMBIENT, gens, structure_words=structure_words)
        )
    return out


def test_compare_preorder_laws():
    elems = corpus(20260811, 18)
    leq = {}
    for i, A in enumerate(elems):
        for j, B in enumerate(elems):
            v = compare(A, B)
            leq[(i, j)] = v in (LEQ, EQUIV)
    # reflexivity
    for i in range(len(elems)):
        assert compare(elems[i], elems[i]) == EQUIV
    # transitivity of <=
    n = len(elems)
    for i, j, k in itertools.product(range(n), repeat=3):
        if leq[(i, j)] and leq[(j, k)]:
            assert leq[(i, k)], (i, j, k)


def test_compare_symmetry():
    elems = corpus(7, 8)
    flip = {LEQ: GEQ, GEQ: LEQ, EQUIV: EQUIV, INCOMPARABLE: INCOMPARABLE}
    for A, B in itertools.combinations(elems, 2):
        assert compare(B, A) == flip[compare(A, B)]


def test_compare_conjugacy_mode():
    top = MarkedSubgroup.top(B2, AMBIENT)
    A = index2_subgroup()
    assert compare(A, top, up_to_conjugacy=True) == EQUIV
    infinite = MarkedSubgroup.from_generators(B2, AMBIENT, ["abAB"], check=False)
    with pytest.raises(WordError):
        compare(top, infinite, up_to_conjugacy=True)


def test_descend_torus_is_minimal():
    res = descend(MarkedSubgroup.top(B2, AMBIENT))
    assert res.kind == DescendResult.MINIMAL
    assert (res.surface.orientable, res.surface.genus, res.surface.boundary) == (True, 1, 1)


def test_descend_thrice_punctured_sphere():
    res = descend(MarkedSubgroup.top(B2, ["a", "b", "ab"]))
    assert res.kind == DescendResult.MINIMAL
    assert res.surface.is_thrice_punctured_sphere()


def test_descend_rejects_non_poset_elements():
    with pytest.raises(WordError):
        descend(MarkedSubgroup.top(B2, ["aa"]))


def test_descend_rigid_gives_strictly_smaller():
    res = descend(MarkedSubgroup.top(B2, ["aabbAB"]))
    assert res.kind == DescendResult.SMALLER
    assert res.verification["compare"] == LEQ
    assert res.verification["in_poset"] is True
    assert res.smaller.rank() >= 2


def test_descend_surface_double_is_one_ended():
    # minimal outputs, doubled, are one-ended surfaces with chi = 1 - rank
    from oneend import gog

    for ws in (["abAB"], ["a", "b", "ab"], ["abaB"]):
        res = descend(MarkedSubgroup.top(B2, ws))
        assert res.kind == DescendResult.MINIMAL
        s = res.surface
        assert s.euler_characteristic() == 1 - B2.rank
        assert gog.is_one_ended(gog.double(B2, ws))[0]


def test_marked_subgroup_json_roundtrip():
    A = index2_subgroup()
    data = A.to_json()
    A2 = MarkedSubgroup.from_json(data)
    assert A2.to_json() == data
    assert compare(A, A2) == EQUIV

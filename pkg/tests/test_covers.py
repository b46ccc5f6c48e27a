import json
import random

import pytest

from oneend.errors import SearchExhausted
from oneend.words import Basis, WordError
from oneend.stallings import CoverGraph, clean_subgroup, rose
from oneend import gog
from oneend.gog import GraphOfGroups, double
from oneend import covers
from oneend.covers import (
    Certificate,
    GogCover,
    PreCover,
    build_one_ended_subgroup,
    elevation_table,
    enumerate_covers,
    extend_to_cover,
    glue,
    infinite_index_certificate,
    one_ended_certificate,
    pi1_precover,
    verify_certificate,
    _elevs,
)

B2 = Basis(2)
C2 = CoverGraph(B2, {1: (1, 0), 2: (0, 1)})
TORUS = double(B2, ["abAB"])
RIGID = double(B2, ["aabbAB"])


def mirror(g, cover):
    return extend_to_cover(g, {"left": cover})


def test_elevation_table_mirror_degree2():
    gc = mirror(TORUS, C2)
    table = elevation_table(gc)
    per_side = {}
    for row in table:
        per_side.setdefault((row["edge"], row["side"]), []).append(row["degree"])
    for degs in per_side.values():
        assert sum(degs) == 2
    assert all(row["matched"] for row in table)


def test_elevation_table_degree_one():
    gc = mirror(TORUS, rose(B2))
    table = elevation_table(gc)
    assert len(table) == 2 and all(r["degree"] == 1 for r in table)


def test_elevation_table_empty_matching():
    p = PreCover(TORUS, {"left": [C2], "right": [C2]}, [])
    assert all(not r["matched"] for r in elevation_table(p))
    assert len(p.hanging()) == len(elevation_table(p))


def test_glue_examples():
    evs = _elevs(C2, TORUS.edges[0].word_plus)
    full = [("e0", (0, oi), (0, oi)) for oi in range(len(evs))]
    gc = glue(TORUS, {"left": [C2], "right": [C2]}, full)
    assert isinstance(gc, GogCover)
    partial = glue(TORUS, {"left": [C2], "right": [C2]}, full[:-1])
    assert not isinstance(partial, GogCover)
    assert len(partial.hanging()) == 2
    # degree mismatch: a^2b^2AB has one degree-2 elevation on C2 but a
    # degree-1 one on the rose
    with pytest.raises(WordError):
        glue(RIGID, {"left": [rose(B2)], "right": [C2]}, [("e0", (0, 0), (0, 0))])


def test_glue_rejects_double_use():
    evs = _elevs(C2, TORUS.edges[0].word_plus)
    pairs = [("e0", (0, 0), (0, 0)), ("e0", (0, 0), (0, 1))]
    if len(evs) >= 2:
        with pytest.raises(WordError):
            glue(TORUS, {"left": [C2], "right": [C2]}, pairs)


def test_extend_to_cover_mirror():
    gc = mirror(RIGID, C2)
    assert isinstance(gc, GogCover) and gc.degree() == 2
    gc1 = mirror(RIGID, rose(B2))
    assert gc1.degree() == 1


def test_extend_to_cover_hnn_kernel_not_found():
    hnn = GraphOfGroups({"v": 2}, [("f", "v", "v", "a", "b")])
    with pytest.raises(SearchExhausted):
        extend_to_cover(hnn, {"v": C2})


def test_extend_to_cover_hnn_matching_words():
    # loop with the same word on both sides self-matches at any cover
    hnn = GraphOfGroups({"v": 2}, [("f", "v", "v", "ab", "ab")])
    gc = extend_to_cover(hnn, {"v": C2})
    assert isinstance(gc, GogCover)


def test_extend_to_cover_general_search():
    # a two-vertex graph with different words: the mirror shortcut does not
    # apply, the bounded search must find a partner fiber
    g = GraphOfGroups({"v": 2, "w": 2}, [("e", "v", "w", "ab", "ba")])
    gc = extend_to_cover(g, {"v": C2}, max_degree=2)
    assert isinstance(gc, GogCover)
    assert gc.total_degree("w") == 2


def test_enumerate_covers_counts():
    # index-d subgroups of F2: 1, 3, 13, 71
    for d, count in ((1, 1), (2, 3), (3, 13), (4, 71)):
        assert sum(1 for _ in enumerate_covers(B2, d)) == count


def test_pi1_precover_euler_characteristic():
    chi_base = gog.presentation(TORUS).euler_characteristic()
    for cover, d in ((rose(B2), 1), (C2, 2)):
        gc = mirror(TORUS, cover)
        res = pi1_precover(gc)
        assert res.presentation.euler_characteristic() == d * chi_base


def test_pi1_precover_single_vertex_free():
    p = PreCover(TORUS, {"left": [C2], "right": []}, [])
    res = pi1_precover(p)
    assert len(res.presentation.generators) == 3
    assert not res.presentation.relators


def test_pi1_precover_disconnected_rejected():
    p = PreCover(TORUS, {"left": [C2], "right": [C2]}, [])
    with pytest.raises(WordError):
        pi1_precover(p)


def test_pi1_embedding_words_lie_in_subgroup():
    # embedding words of the mirror cover generators are loops of the cover
    gc = mirror(TORUS, C2)
    res = pi1_precover(gc)
    emb = res.embedding
    base_pres = emb.base_presentation
    n_base_gens = len(base_pres.generators)
    for k in range(1, len(res.presentation.generators) + 1):
        w = emb.word_for(k)
        assert all(1 <= abs(x) <= n_base_gens for x in w)
        assert w, "generators embed nontrivially"


def test_certificates_on_mirror_cover():
    gc = mirror(TORUS, C2)
    cert, report = one_ended_certificate(gc)
    assert cert is not None
    ok, _ = verify_certificate(cert.to_json())
    assert ok
    inf_cert, reason = infinite_index_certificate(gc)
    assert inf_cert is None and "finite index" in reason


def test_one_ended_certificate_failure_isolated_vertex():
    p = PreCover(TORUS, {"left": [C2], "right": []}, [])
    cert, report = one_ended_certificate(p)
    assert cert is None
    assert not report[0]["indecomposable"]


def test_infinite_index_needs_reduced_base():
    bad = GraphOfGroups({"L": 1, "R": 2}, [("e", "L", "R", "a", "abAB")])
    p = PreCover(bad, {"L": [rose(Basis(1))], "R": [rose(B2)]}, [])
    cert, reason = infinite_index_certificate(p)
    assert cert is None and "reduced" in reason


def test_infinite_index_certificate_on_precover():
    evs = _elevs(C2, TORUS.edges[0].word_plus)
    partial = [("e0", (0, oi), (0, oi)) for oi in range(len(evs) - 1)]
    p = glue(TORUS, {"left": [C2], "right": [C2]}, partial)
    cert, _ = infinite_index_certificate(p)
    assert cert is not None
    ok, _ = verify_certificate(cert.to_json())
    assert ok


def test_precover_json_roundtrip():
    evs = _elevs(C2, TORUS.edges[0].word_plus)
    partial = [("e0", (0, oi), (0, oi)) for oi in range(len(evs) - 1)]
    p = glue(TORUS, {"left": [C2], "right": [C2]}, partial)
    blob = json.dumps(p.to_json(), sort_keys=True)
    p2 = PreCover.from_json(json.loads(blob))
    assert json.dumps(p2.to_json(), sort_keys=True) == blob


def test_tampered_certificate_fails():
    gc = mirror(TORUS, C2)
    cert, _ = one_ended_certificate(gc)
    data = json.loads(json.dumps(cert.to_json()))
    data["evidence"]["per_copy"][0]["indecomposable"] = False
    ok, report = verify_certificate(data)
    assert not ok


def test_build_rejects_surface_vertex():
    with pytest.raises(WordError):
        build_one_ended_subgroup(TORUS, "left")


def test_build_rejects_decomposable_other_vertex():
    g = GraphOfGroups(
        {"v": 2, "w": 2}, [("e", "v", "w", "aabbAB", "aa")]
    )
    with pytest.raises(WordError):
        build_one_ended_subgroup(g, "v")


def test_build_rejects_unreduced_base():
    bad = GraphOfGroups({"L": 1, "R": 2}, [("e", "L", "R", "a", "aabbAB")])
    with pytest.raises(WordError):
        build_one_ended_subgroup(bad, "R")


def test_build_main_construction():
    res = build_one_ended_subgroup(RIGID, "left")
    stats = res.stats
    assert stats["m"] >= 2 and stats["n"] == 0
    assert stats["hanging_before_component"] == stats["m"] + 2 * stats["n"]
    assert len(res.precover.hanging()) >= 1
    kinds = [c.kind for c in res.certificates]
    assert kinds == ["MONOMORPHISM", "ONE_ENDED", "INFINITE_INDEX"]
    for cert in res.certificates:
        ok, rep = verify_certificate(json.loads(json.dumps(cert.to_json())))
        assert ok, rep

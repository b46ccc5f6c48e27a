import random

import pytest

from oneend.words import (
    Basis,
    WordError,
    canonical_class,
    concat,
    cyclic_reduce,
    invert,
    make_peripheral_structure,
    reduce_word,
    root,
    rotate,
)

from helpers import random_reduced_word, random_cyclic_word

B2 = Basis(2)


def test_reduce_examples():
    assert B2.parse("aA b") == B2.parse("b")
    assert B2.parse("") == ()
    assert B2.parse("abBA") == ()
    assert B2.parse("abAB") == (1, 2, -1, -2)


def test_reduce_rejects_unknown_letters():
    with pytest.raises(WordError):
        B2.parse("axb")
    with pytest.raises(WordError):
        B2.check((1, 3))


def test_reduce_idempotent_and_subadditive():
    rng = random.Random(1)
    for _ in range(200):
        u = random_reduced_word(rng, max_len=8, allow_empty=True)
        v = random_reduced_word(rng, max_len=8, allow_empty=True)
        assert reduce_word(u) == u
        assert len(concat(u, v)) <= len(u) + len(v)


def test_cyclic_reduce_examples():
    cyc, conj = cyclic_reduce(B2.parse("baB"))
    assert (cyc, conj) == ((1,), (2,))
    cyc, conj = cyclic_reduce(B2.parse("abAB"))
    assert (cyc, conj) == ((1, 2, -1, -2), ())
    cyc, conj = cyclic_reduce(B2.parse("Aba"))
    assert (cyc, conj) == ((2,), (-1,))


def test_cyclic_reduce_conjugation_identity():
    rng = random.Random(2)
    for _ in range(200):
        w = random_reduced_word(rng, max_len=10, allow_empty=True)
        cyc, conj = cyclic_reduce(w)
        assert concat(conj, cyc, invert(conj)) == w


def brute_root(c):
    """Independent root oracle: check all divisors of the length."""
    n = len(c)
    for p in range(1, n + 1):
        if n % p == 0 and c[:p] * (n // p) == c:
            return c[:p], n // p
    raise AssertionError


def test_root_examples():
    assert root(B2.parse("aaa")) == ((1,), 3)
    assert root(B2.parse("abab")) == brute_root(B2.parse("abab")) == ((1, 2), 2)
    assert root(B2.parse("aab")) == brute_root(B2.parse("aab")) == ((1, 1, 2), 1)
    with pytest.raises(WordError):
        root(())


def test_root_power_property():
    rng = random.Random(3)
    for _ in range(100):
        c = random_cyclic_word(rng, max_len=5)
        r, e = root(c)
        assert r * e == c
        assert root(r) == (r, 1)


def test_canonical_class_examples():
    assert canonical_class(B2.parse("ba")) == canonical_class(B2.parse("ab"))
    assert canonical_class(B2.parse("BA")) == canonical_class(B2.parse("ab"))
    assert canonical_class(B2.parse("abAB")) == canonical_class(B2.parse("bABa"))


def test_canonical_class_rotation_inversion_invariance():
    rng = random.Random(4)
    for _ in range(200):
        c = random_cyclic_word(rng)
        rep = canonical_class(c)
        for k in range(len(c)):
            assert canonical_class(rotate(c, k)) == rep
        assert canonical_class(invert(c)) == rep


def test_canonical_class_separates_rotation_orbits():
    # exhaustive over length-3 words: equal reps iff conjugate up to inversion
    from helpers import all_cyclic_words

    words = all_cyclic_words(2, 3)

    def orbit(c):
        out = set()
        for base in (c, invert(c)):
            for k in range(len(base)):
                out.add(rotate(base, k))
        return frozenset(out)

    for u in words:
        for v in words:
            same = canonical_class(u) == canonical_class(v)
            assert same == (orbit(u) == orbit(v))


def test_make_peripheral_structure_examples():
    ps = make_peripheral_structure(B2, ["aa", "aaa"])
    assert [rep.word for rep, _ in ps] == [(1,)]
    ps = make_peripheral_structure(B2, ["abAB"])
    assert ps.classes()[0] == canonical_class(B2.parse("abAB"))
    ps = make_peripheral_structure(B2, ["a", "b", "ab"])
    assert len(ps) == 3


def test_make_peripheral_structure_rejects_trivial():
    with pytest.raises(WordError):
        make_peripheral_structure(B2, ["abBA"])


def test_peripheral_structure_invariance():
    rng = random.Random(5)
    for _ in range(60):
        ws = [random_reduced_word(rng, max_len=5) for _ in range(rng.randint(1, 3))]
        base = make_peripheral_structure(B2, ws)
        mangled = []
        for w in ws:
            conj = random_reduced_word(rng, max_len=3, allow_empty=True)
            w2 = concat(conj, w, invert(conj))
            if rng.random() < 0.5:
                w2 = invert(w2)
            power = rng.randint(1, 3)
            w2 = reduce_word(w2 * power)
            mangled.append(w2)
        assert make_peripheral_structure(B2, mangled) == base


def test_structure_serialization_roundtrip():
    ps = make_peripheral_structure(B2, ["ba", "BA", "aa"])
    assert ps.to_json() == ["a", "ab"]

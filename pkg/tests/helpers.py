"""Shared generators for seeded random test instances."""

import random

from oneend.words import Basis, is_cyclically_reduced
from oneend.stallings import CoverGraph


def random_reduced_word(rng, rank=2, max_len=6, allow_empty=False):
    letters = [x for i in range(rank) for x in (i + 1, -(i + 1))]
    while True:
        n = rng.randint(0 if allow_empty else 1, max_len)
        w = []
        for _ in range(n):
            x = rng.choice(letters)
            if w and x == -w[-1]:
                continue
            w.append(x)
        if allow_empty and not w:
            return ()
        if w:
            return tuple(w)


def random_cyclic_word(rng, rank=2, max_len=6):
    while True:
        w = random_reduced_word(rng, rank, max_len)
        if is_cyclically_reduced(w):
            return w


def random_cover(rng, rank=2, max_degree=4):
    """A connected cover of the rank-r rose of degree <= max_degree."""
    basis = Basis(rank)
    while True:
        d = rng.randint(1, max_degree)
        perms = {}
        for i in range(rank):
            p = list(range(d))
            rng.shuffle(p)
            perms[i + 1] = tuple(p)
        try:
            return CoverGraph(basis, perms)
        except Exception:
            continue


def all_cyclic_words(rank, length):
    """All cyclically reduced words of exactly the given length."""
    letters = [x for i in range(rank) for x in (i + 1, -(i + 1))]
    out = []

    def rec(w):
        if len(w) == length:
            if length == 1 or w[0] != -w[-1]:
                out.append(tuple(w))
            return
        for x in letters:
            if w and x == -w[-1]:
                continue
            rec(w + [x])

    rec([])
    return out

"""Free-group word arithmetic and peripheral structures.

Letters are encoded as nonzero integers: ``+i`` is the i-th basis letter
(1-based) and ``-i`` is its inverse.  Words are tuples of letters that are
freely reduced; cyclic words are additionally cyclically reduced and are
considered up to rotation.  String I/O uses lowercase letters for basis
elements and uppercase for their inverses ("abAB").
"""

from string import ascii_lowercase


class WordError(ValueError):
    """Raised for malformed words or illegal word operations."""


class Basis:
    """An ordered free basis of a given rank.

    Letter names default to a, b, c, ...  For ranks above 26 synthetic
    names x1, x2, ... are generated; such bases serialize words as signed
    integer lists rather than strings.
    """

    def __init__(self, rank, names=None):
        if rank < 1:
            raise WordError("rank must be >= 1")
        if names is None:
            if rank <= 26:
                names = tuple(ascii_lowercase[:rank])
            else:
                names = tuple("x%d" % (i + 1) for i in range(rank))
        names = tuple(names)
        if len(names) != rank or len(set(names)) != rank:
            raise WordError("need %d distinct letter names" % rank)
        self.rank = rank
        self.names = names
        self._index = {nm: i + 1 for i, nm in enumerate(names)}

    def __repr__(self):
        return "Basis(%d)" % self.rank

    def __eq__(self, other):
        return isinstance(other, Basis) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    @property
    def single_char(self):
        return all(len(nm) == 1 and nm.islower() for nm in self.names)

    def letters(self):
        """All signed letters in canonical order: a < b < ... < A < B < ..."""
        return [i + 1 for i in range(self.rank)] + [-(i + 1) for i in range(self.rank)]

    def parse(self, text):
        """Parse a string like "abAB" (or an iterable of signed ints) into a reduced word."""
        if not isinstance(text, str):
            return reduce_word(self.check(text))
        if not self.single_char:
            raise WordError("string parsing needs single-character letter names")
        raw = []
        for ch in text:
            if ch.isspace():
                continue
            if ch in self._index:
                raw.append(self._index[ch])
            elif ch.lower() in self._index and ch.isupper():
                raw.append(-self._index[ch.lower()])
            else:
                raise WordError("unknown letter %r" % ch)
        return reduce_word(raw)

    def check(self, word):
        """Validate letters of an int-encoded word against this basis."""
        w = tuple(word)
        for x in w:
            if not isinstance(x, int) or x == 0 or abs(x) > self.rank:
                raise WordError("letter %r outside basis of rank %d" % (x, self.rank))
        return w

    def format(self, word):
        """Render an int-encoded word as a string ("" for the empty word)."""
        if self.single_char:
            return "".join(
                self.names[x - 1] if x > 0 else self.names[-x - 1].upper() for x in word
            )
        return " ".join(
            self.names[x - 1] if x > 0 else self.names[-x - 1].upper() for x in word
        )


def letter_key(x):
    """Sort key giving the canonical letter order a < b < ... < A < B < ..."""
    return (0, x) if x > 0 else (1, -x)


def reduce_word(raw):
    """Freely reduce a letter sequence."""
    out = []
    for x in raw:
        if x == 0:
            raise WordError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert(w):
    return tuple(-x for x in reversed(w))


def concat(*ws):
    """Product of already-reduced words, reduced."""
    out = []
    for w in ws:
        for x in w:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def cyclic_reduce(w):
    """Split w = conj . cyc . conj^-1 with cyc cyclically reduced.

    Returns (cyc, conj).
    """
    w = tuple(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j], w[:i]


def is_cyclically_reduced(w):
    w = tuple(w)
    if not w:
        return True
    if len(w) >= 2 and w[0] == -w[-1]:
        return False
    return reduce_word(w) == w


def rotate(c, k):
    c = tuple(c)
    if not c:
        return c
    k %= len(c)
    return c[k:] + c[:k]


def root(c):
    """Maximal root of a nonempty cyclic word: c = root^exponent.

    The root is the shortest period of c whose length divides len(c);
    uniqueness of roots in a free group makes this the maximal cyclic
    representative.
    """
    c = tuple(c)
    n = len(c)
    if n == 0:
        raise WordError("empty cyclic word has no root")
    for p in range(1, n + 1):
        if n % p:
            continue
        if c == c[:p] * (n // p):
            return c[:p], n // p
    raise AssertionError("unreachable")


class ConjClassRep:
    """Canonical representative of a maximal-cyclic-subgroup conjugacy class.

    Two cyclic words get equal representatives exactly when they are
    conjugate up to inversion, i.e. generate conjugate maximal cyclic
    subgroups once roots are extracted by the caller.
    """

    __slots__ = ("word",)

    def __init__(self, word):
        self.word = tuple(word)

    def __eq__(self, other):
        return isinstance(other, ConjClassRep) and self.word == other.word

    def __hash__(self):
        return hash(self.word)

    def __lt__(self, other):
        return [letter_key(x) for x in self.word] < [letter_key(x) for x in other.word]

    def __repr__(self):
        return "rep(%s)" % (self.word,)


def canonical_class(c):
    """Minimal rotation of c or of its inverse under the canonical letter order."""
    c = tuple(c)
    if not c:
        raise WordError("empty cyclic word has no conjugacy class")
    if not is_cyclically_reduced(c):
        raise WordError("cyclic word must be cyclically reduced")
    best = None
    for base in (c, invert(c)):
        for k in range(len(base)):
            cand = rotate(base, k)
            key = [letter_key(x) for x in cand]
            if best is None or key < best[0]:
                best = (key, cand)
    return ConjClassRep(best[1])


class PeripheralStructure:
    """A finite set of pairwise non-conjugate maximal cyclic classes.

    Entries are (canonical root class, recorded exponent of the word that
    produced it).  Identity and ordering are by root class alone; the
    exponent is diagnostic.
    """

    def __init__(self, basis, entries):
        self.basis = basis
        seen = {}
        for rep, exp in entries:
            if rep not in seen:
                seen[rep] = exp
        self.entries = tuple(sorted(seen.items()))

    def classes(self):
        return tuple(rep for rep, _ in self.entries)

    def class_set(self):
        return frozenset(rep for rep, _ in self.entries)

    def words(self):
        """Root words of the classes, in canonical order."""
        return [rep.word for rep, _ in self.entries]

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, PeripheralStructure)
            and self.basis == other.basis
            and self.class_set() == other.class_set()
        )

    def __le__(self, other):
        return self.class_set() <= other.class_set()

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self):
        if self.basis.rank <= 26:
            return "PeripheralStructure{%s}" % ", ".join(
                self.basis.format(rep.word) for rep, _ in self.entries
            )
        return "PeripheralStructure(%d classes)" % len(self.entries)

    def to_json(self):
        if self.basis.single_char:
            return [self.basis.format(rep.word) for rep, _ in self.entries]
        return [list(rep.word) for rep, _ in self.entries]


def make_peripheral_structure(basis, ws):
    """Cyclically reduce, take roots, canonicalize and deduplicate a multiword.

    Each input must be nontrivial after free reduction.  The result is
    invariant under replacing inputs by conjugates, inverses or nonzero
    powers.
    """
    entries = []
    for w in ws:
        w = basis.parse(w) if isinstance(w, str) else reduce_word(basis.check(w))
        if not w:
            raise WordError("trivial element in multiword")
        cyc, _ = cyclic_reduce(w)
        r, exp = root(cyc)
        entries.append((canonical_class(r), exp))
    return PeripheralStructure(basis, entries)

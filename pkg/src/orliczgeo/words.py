"""Reduced words in a free group and tree-geodesic navigation.

Words are plain strings over ``a..z`` with capital letters denoting inverses
(``A`` is the inverse of ``a``).  The empty string is the identity.  The Cayley
graph of the rank-k free group with this generating set is the 2k-regular
tree, so geodesics are unique and all walk operations below are exact.
"""

from __future__ import annotations

import string

from .errors import ParseError

LOWER = string.ascii_lowercase


def alphabet(rank: int) -> str:
    """Generator letters (lowercase only) for a free group of the given rank."""
    if not 1 <= rank <= 26:
        raise ParseError(f"rank must be in 1..26, got {rank}")
    return LOWER[:rank]


def validate_word(w: str, rank: int) -> str:
    """Check letters against the rank-k alphabet; returns the word unchanged."""
    allowed = set(alphabet(rank))
    for ch in w:
        if ch.lower() not in allowed:
            raise ParseError(f"unknown letter {ch!r} for rank {rank}")
    return w


def _cancels(x: str, y: str) -> bool:
    return x != y and x.lower() == y.lower()


def reduce_word(w: str) -> str:
    """Freely reduce a letter sequence (stack cancellation to a fixed point)."""
    out: list[str] = []
    for ch in w:
        if out and _cancels(out[-1], ch):
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def is_reduced(w: str) -> bool:
    return all(not _cancels(w[i], w[i + 1]) for i in range(len(w) - 1))


def inverse_word(w: str) -> str:
    return w[::-1].swapcase()


def multiply(a: str, b: str) -> str:
    """Product of two reduced words (cancellation only at the junction)."""
    i = len(a)
    j = 0
    while i > 0 and j < len(b) and _cancels(a[i - 1], b[j]):
        i -= 1
        j += 1
    return a[:i] + b[j:]


def word_distance(g: str, h: str) -> int:
    """Path distance in the Cayley tree: |g^-1 h|."""
    return len(multiply(inverse_word(g), h))


def gromov_product(a: str, a2: str, b: str) -> float:
    """(a|a')_b = (d(b,a) + d(b,a') - d(a,a')) / 2, a half-integer.

    In a tree this equals the distance from b to the geodesic [a, a'].
    """
    return 0.5 * (word_distance(b, a) + word_distance(b, a2) - word_distance(a, a2))


def geodesic_vertices(a: str, b: str) -> list[str]:
    """Vertices of the unique geodesic from a to b, inclusive."""
    path = multiply(inverse_word(a), b)
    out = [a]
    cur = a
    for ch in path:
        cur = multiply(cur, ch)
        out.append(cur)
    return out


def walk_toward(start: str, target: str, steps: int) -> str:
    """The vertex ``steps`` along the geodesic from start toward target.

    Returns ``target`` itself when d(start, target) <= steps.
    """
    path = multiply(inverse_word(start), target)
    if len(path) <= steps:
        return target
    return multiply(start, path[:steps])


def common_prefix(a: str, b: str) -> str:
    n = 0
    m = min(len(a), len(b))
    while n < m and a[n] == b[n]:
        n += 1
    return a[:n]


def all_reduced_words(rank: int, max_len: int) -> list[str]:
    """All freely reduced words of length <= max_len, identity first."""
    letters = alphabet(rank)
    gens = list(letters) + [c.upper() for c in letters]
    words = [""]
    frontier = [""]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for g in gens:
                if w and _cancels(w[-1], g):
                    continue
                nxt.append(w + g)
        words.extend(nxt)
        frontier = nxt
    return words


def ball_size(rank: int, r: int) -> int:
    """Number of vertices within distance r of a point in the 2k-regular tree."""
    if r < 0:
        raise ParseError("radius must be non-negative")
    k = rank
    if r == 0:
        return 1
    return 1 + 2 * k * ((2 * k - 1) ** r - 1) // (2 * k - 2)


def generator_letters(rank: int) -> list[str]:
    """All 2k letters, generator before its inverse: a, A, b, B, ..."""
    out = []
    for ch in alphabet(rank):
        out.append(ch)
        out.append(ch.upper())
    return out


def tube_vertices(base_vertices, rank: int, radius: int):
    """Yield every vertex within `radius` of the connected base vertex set.

    The base must be connected in the tree (a geodesic or tripod); branches
    are enumerated once via their off-base first letter, so no vertex repeats.
    """
    gens = generator_letters(rank)
    base = set(base_vertices)
    for v in base_vertices:
        yield v
    for v in base_vertices:
        off = [c for c in gens if multiply(v, c) not in base]
        stack = [(v + c, 1) for c in off]
        while stack:
            w, r = stack.pop()
            yield w
            if r < radius:
                last = w[-1]
                for c in gens:
                    if c != last and c.lower() == last.lower():
                        continue
                    stack.append((w + c, r + 1))

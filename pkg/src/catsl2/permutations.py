"""Symmetric group utilities: permutations as tuples in one-line notation.

A permutation w of {0,..,n-1} is the tuple (w(0),...,w(n-1)).  Composition is
functional: compose(u, v)(i) = u(v(i)), so in products of group elements the
right factor acts first.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations as _itperms


def identity(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def compose(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(u[v[i]] for i in range(len(u)))


def inverse(w: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(w)
    for i, wi in enumerate(w):
        out[wi] = i
    return tuple(out)


def length(w: tuple[int, ...]) -> int:
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def transposition(n: int, a: int, b: int) -> tuple[int, ...]:
    w = list(range(n))
    w[a], w[b] = w[b], w[a]
    return tuple(w)


def adjacent(n: int, i: int) -> tuple[int, ...]:
    """s_i = (i, i+1), 0-indexed: swaps i and i+1."""
    return transposition(n, i, i + 1)


def mul_right_s(w: tuple[int, ...], i: int) -> tuple[int, ...]:
    """w * s_i: swaps the entries in positions i, i+1."""
    lst = list(w)
    lst[i], lst[i + 1] = lst[i + 1], lst[i]
    return tuple(lst)


def mul_left_s(w: tuple[int, ...], i: int) -> tuple[int, ...]:
    """s_i * w: swaps the values i, i+1."""
    return tuple(i + 1 if x == i else i if x == i + 1 else x for x in w)


def has_right_descent(w: tuple[int, ...], i: int) -> bool:
    """True iff l(w s_i) < l(w)."""
    return w[i] > w[i + 1]


def has_left_descent(w: tuple[int, ...], i: int) -> bool:
    """True iff l(s_i w) < l(w)."""
    wi = inverse(w)
    return wi[i] > wi[i + 1]


def reduced_word(w: tuple[int, ...]) -> tuple[int, ...]:
    """A reduced word (i_1,...,i_r) with w = s_{i_1} ... s_{i_r}."""
    word: list[int] = []
    cur = w
    n = len(w)
    while True:
        for i in range(n - 1):
            if cur[i] > cur[i + 1]:
                cur = mul_right_s(cur, i)
                word.append(i)
                break
        else:
            break
    return tuple(reversed(word))


@lru_cache(maxsize=None)
def all_perms(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(_itperms(range(n)), key=lambda w: (length(w), w)))


@lru_cache(maxsize=None)
def perm_index(n: int) -> dict[tuple[int, ...], int]:
    return {w: i for i, w in enumerate(all_perms(n))}


@lru_cache(maxsize=None)
def lengths(n: int) -> tuple[int, ...]:
    return tuple(length(w) for w in all_perms(n))


@lru_cache(maxsize=None)
def min_coset_reps_left(i: int, n: int) -> tuple[tuple[int, ...], ...]:
    """Minimal-length representatives of S_i \\ S_n (S_i permutes 0..i-1)."""
    reps = []
    for w in all_perms(n):
        wi = inverse(w)
        if all(wi[k] < wi[k + 1] for k in range(i - 1)):
            reps.append(w)
    return tuple(reps)


@lru_cache(maxsize=None)
def min_coset_reps_right(i: int, n: int) -> tuple[tuple[int, ...], ...]:
    """Minimal-length representatives of S_n / S_i."""
    reps = []
    for w in all_perms(n):
        if all(w[k] < w[k + 1] for k in range(i - 1)):
            reps.append(w)
    return tuple(reps)


def sign(w: tuple[int, ...]) -> int:
    return -1 if length(w) % 2 else 1


def embed(w: tuple[int, ...], n: int, offset: int = 0) -> tuple[int, ...]:
    """Embed a permutation of {0..len(w)-1} into S_n acting on offset..offset+len(w)-1."""
    out = list(range(n))
    for i, wi in enumerate(w):
        out[offset + i] = offset + wi
    return tuple(out)

"""Fundamental groups of compact oriented surfaces.

Generators are ordered ``a_1, b_1, ..., a_g, b_g, c_1, ..., c_b`` and the
single relator is ``[a_1, b_1] ... [a_g, b_g] c_1 ... c_b`` with
``[a, b] = a b a^-1 b^-1``.  For surfaces with boundary this presentation is
redundant (the group is free on all but one generator), which lets closed
and bordered surfaces share one code path.

A word is a tuple of ``(generator_index, exponent)`` pairs, exponent +-1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonHyperbolicSurface

Word = tuple  # tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class SurfacePresentation:
    genus: int
    boundary_count: int

    @property
    def rank(self) -> int:
        return 2 * self.genus + self.boundary_count

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary_count

    @property
    def generator_names(self) -> list[str]:
        names = []
        for i in range(1, self.genus + 1):
            names += [f"a{i}", f"b{i}"]
        return names + [f"c{j}" for j in range(1, self.boundary_count + 1)]

    @property
    def relator(self) -> Word:
        w = []
        for i in range(self.genus):
            a, b = 2 * i, 2 * i + 1
            w += [(a, 1), (b, 1), (a, -1), (b, -1)]
        start = 2 * self.genus
        w += [(start + j, 1) for j in range(self.boundary_count)]
        return tuple(w)

    @property
    def boundary_indices(self) -> list[int]:
        return list(range(2 * self.genus, self.rank))

    @property
    def is_closed(self) -> bool:
        return self.boundary_count == 0


def presentation(g: int, b: int) -> SurfacePresentation:
    if g < 0 or b < 0:
        raise ValueError("genus and boundary count must be nonnegative")
    if 2 - 2 * g - b >= 0:
        raise NonHyperbolicSurface(f"chi = {2 - 2 * g - b} >= 0 for (g, b) = ({g}, {b})")
    return SurfacePresentation(g, b)


def euler_characteristic(p: SurfacePresentation) -> int:
    return p.euler_characteristic


def word(*letters) -> Word:
    """Build a word from signed 1-based indices: ``word(1, 2, -1, -2)``."""
    return tuple((abs(s) - 1, 1 if s > 0 else -1) for s in letters)


def to_signed(w: Word) -> list[int]:
    return [(i + 1) * e for i, e in w]


def inverse_word(w: Word) -> Word:
    return tuple((i, -e) for i, e in reversed(w))


def commutator(u: Word, v: Word) -> Word:
    return tuple(u) + tuple(v) + inverse_word(u) + inverse_word(v)


def free_reduce(w: Word) -> Word:
    out: list[tuple[int, int]] = []
    for letter in w:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def abelianization(p: SurfacePresentation, w: Word) -> np.ndarray:
    v = np.zeros(p.rank, dtype=int)
    for i, e in w:
        if not 0 <= i < p.rank:
            raise IndexError(f"generator index {i} outside 0..{p.rank - 1}")
        v[i] += e
    return v


def is_homologically_trivial(p: SurfacePresentation, w: Word) -> bool:
    v = abelianization(p, w)
    if np.any(v[:2 * p.genus]):
        return False
    tail = v[2 * p.genus:]
    return bool(np.all(tail == tail[0])) if len(tail) else True


def random_reduced_word(rank: int, length: int, rng: np.random.Generator) -> Word:
    w: list[tuple[int, int]] = []
    while len(w) < length:
        letter = (int(rng.integers(rank)), 1 if rng.integers(2) else -1)
        if w and w[-1][0] == letter[0] and w[-1][1] == -letter[1]:
            continue
        w.append(letter)
    return tuple(w)


def sample_trivial_words(p: SurfacePresentation, seed: int, count: int, max_blocks: int,
                         max_length: int = 4) -> list[Word]:
    """Products of at most ``max_blocks`` commutators ``[u, v]``.

    ``u`` and ``v`` are random freely reduced words of length
    ``1..max_length``.  Words that reduce to the empty word are redrawn.
    """
    if count < 1 or max_blocks < 1 or max_length < 1:
        raise ValueError("count, max_blocks and max_length must be >= 1")
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        blocks = int(rng.integers(1, max_blocks + 1))
        w: Word = ()
        for _ in range(blocks):
            u = random_reduced_word(p.rank, int(rng.integers(1, max_length + 1)), rng)
            v = random_reduced_word(p.rank, int(rng.integers(1, max_length + 1)), rng)
            w = w + commutator(u, v)
        w = free_reduce(w)
        if w:
            out.append(w)
    return out

"""Breadth-first enumeration of group words in a finite generating set."""

from __future__ import annotations

from typing import Iterator, Sequence

from .linalg import TowerMatrix


def letter_name(letter: int) -> str:
    return f"g{letter}" if letter > 0 else f"g{-letter}^-1"


def word_name(word: Sequence[int]) -> str:
    return "*".join(letter_name(x) for x in word) if word else "1"


def iter_words(generators: Sequence[TowerMatrix], max_length: int,
               include_identity: bool = False) -> Iterator[tuple[tuple[int, ...], TowerMatrix]]:
    """Yield ``(word, matrix)`` for freely reduced words up to *max_length*.

    Letters are ``k`` and ``-k`` for generator ``k`` (1-based), ordered
    ``1, -1, 2, -2, ...``.  Words come by length, then lexicographically in
    that letter order.  A word whose matrix already appeared is skipped and
    not extended, so every matrix is reported once, under its first word.
    """
    if not generators:
        return
    field = max((g.field for g in generators), key=lambda f: f.depth)
    gens = [g.lift(field) for g in generators]
    letters: list[tuple[int, TowerMatrix]] = []
    for k, g in enumerate(gens, start=1):
        letters.append((k, g))
        letters.append((-k, g.inverse()))
    ident = TowerMatrix.identity(gens[0].size, field)
    seen = {ident}
    if include_identity:
        yield (), ident
    frontier = [((), ident)]
    for _ in range(max_length):
        nxt = []
        for word, m in frontier:
            for x, g in letters:
                if word and word[-1] == -x:
                    continue
                w = word + (x,)
                p = m @ g
                if p in seen:
                    continue
                seen.add(p)
                nxt.append((w, p))
                yield w, p
        frontier = nxt
        if not frontier:
            break

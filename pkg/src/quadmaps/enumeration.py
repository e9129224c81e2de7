"""Exact closed-form counts and exhaustive generators for small instances.

These are the oracles behind every bijection test: the generators stream
each object exactly once in a deterministic order (trees in lexicographic
Dyck-word order, labellings in ternary-counter order), and the closed forms
are evaluated in exact big-integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator

import numpy as np

from .labelled import EmbeddedTree, WellLabelledTree, is_well_labelled
from .trees import PlaneTree

__all__ = [
    "EnumerationGuardError",
    "ExactCounts",
    "catalan",
    "exact_counts",
    "enumerate_plane_trees",
    "enumerate_embedded",
    "enumerate_well_labelled",
]

MAX_EMBEDDED_N = 7


class EnumerationGuardError(ValueError):
    """Requested exhaustive enumeration beyond the size guard."""


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


@dataclass(frozen=True)
class ExactCounts:
    quadrangulations: int
    well_labelled: int
    embedded: int
    plane_trees: int


def exact_counts(n: int) -> ExactCounts:
    """(|Q_n|, |W_n|, |U_n|, Catalan) as exact integers.

    Rooted quadrangulations with n faces and well-labelled trees with n
    edges are equinumerous: 2/(n+2) * 3^n * Catalan(n); dropping positivity
    gives 3^n * Catalan(n) embedded trees.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    cat = catalan(n)
    embedded = 3**n * cat
    wl = 2 * embedded // (n + 2)
    assert (2 * embedded) % (n + 2) == 0
    return ExactCounts(
        quadrangulations=wl, well_labelled=wl, embedded=embedded, plane_trees=cat
    )


def _dyck_words(remaining_up: int, open_count: int, prefix: list[int]) -> Iterator[tuple[int, ...]]:
    if remaining_up == 0 and open_count == 0:
        yield tuple(prefix)
        return
    if remaining_up > 0:
        prefix.append(1)
        yield from _dyck_words(remaining_up - 1, open_count + 1, prefix)
        prefix.pop()
    if open_count > 0:
        prefix.append(-1)
        yield from _dyck_words(remaining_up, open_count - 1, prefix)
        prefix.pop()


def enumerate_plane_trees(n: int) -> Iterator[PlaneTree]:
    """All plane trees with n edges, in lexicographic Dyck-word order
    (up step first)."""
    for word in _dyck_words(n, 0, []):
        yield PlaneTree(np.asarray(word, dtype=np.int8), validate=False)


def _check_guard(n: int, limit: int | None) -> None:
    cap = MAX_EMBEDDED_N if limit is None else limit
    if n > cap:
        raise EnumerationGuardError(
            f"|U_{n}| = {exact_counts(n).embedded} objects; guard is n <= {cap} "
            "(pass limit= to override)"
        )


def enumerate_embedded(
    n: int, root_label: int = 1, limit: int | None = None
) -> Iterator[EmbeddedTree]:
    """All embedded trees with n edges: every plane tree x every increment
    vector, increments cycling fastest on the last edge (-1 < 0 < +1)."""
    _check_guard(n, limit)
    for tree in enumerate_plane_trees(n):
        inc = np.zeros(n + 1, dtype=np.int8)
        inc[1:] = -1
        while True:
            yield EmbeddedTree(tree, inc.copy(), root_label)
            v = n
            while v >= 1 and inc[v] == 1:
                inc[v] = -1
                v -= 1
            if v == 0:
                break
            inc[v] += 1


def enumerate_well_labelled(n: int, limit: int | None = None) -> Iterator[WellLabelledTree]:
    """The positive embedded trees, as validated WellLabelledTree objects."""
    for t in enumerate_embedded(n, root_label=1, limit=limit):
        if is_well_labelled(t):
            yield WellLabelledTree(t.tree, t.inc, 1)

"""Rooted plane trees: Dyck-word codec, contour traversal, exact uniform
sampling, and extraction of the branching shape spanned by marked contour
times.

Trees are stored as their Dyck word (int8 steps, +1 down-the-tree) with
vertices numbered in prefix order, so the parent array is monotone
(parent[v] < v) and label accumulation is a single forward pass.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._backend import kernels
from .walks import LatticeWalk, WalkError

__all__ = [
    "TreeError",
    "PlaneTree",
    "Shape",
    "tree_to_dyck",
    "dyck_to_tree",
    "contour_traversal",
    "sample_plane_tree",
    "sample_dyck_steps",
    "extract_shape",
    "shape_matrix",
]


class TreeError(ValueError):
    """Malformed tree input (not a Dyck word, bad contour times...)."""


def _validate_dyck(steps: np.ndarray) -> None:
    if len(steps) % 2 != 0:
        raise TreeError("Dyck word must have even length")
    acc = 0
    for s in steps:
        if s not in (-1, 1):
            raise TreeError(f"bad step {s}")
        acc += s
        if acc < 0:
            raise TreeError("walk dips below zero: not a Dyck word")
    if acc != 0:
        raise TreeError(f"walk ends at {acc}, not 0")


class PlaneTree:
    """A rooted plane tree with n edges, backed by its Dyck word."""

    __slots__ = ("steps", "_parent", "_contour")

    def __init__(self, steps, validate: bool = True):
        steps = np.asarray(steps, dtype=np.int8)
        if validate:
            _validate_dyck(steps)
        self.steps = steps
        self._parent = None
        self._contour = None

    @property
    def n(self) -> int:
        """Edge count."""
        return len(self.steps) // 2

    @property
    def n_vertices(self) -> int:
        return self.n + 1

    @property
    def parent(self) -> np.ndarray:
        if self._parent is None:
            self._parent, self._contour = kernels.tree_from_steps(self.steps)
        return self._parent

    @property
    def contour(self) -> np.ndarray:
        """Vertex visited at each contour time t = 0..2n."""
        if self._contour is None:
            self._parent, self._contour = kernels.tree_from_steps(self.steps)
        return self._contour

    def heights(self) -> np.ndarray:
        """Depth of every vertex (root = 0)."""
        ones = np.ones(self.n + 1, dtype=np.int8)
        return kernels.labels_from_parent(self.parent, ones, 0)

    def children(self, v: int) -> list[int]:
        parent = self.parent
        return [u for u in range(1, self.n + 1) if parent[u] == v]

    def to_parens(self) -> str:
        return "".join("(" if s > 0 else ")" for s in self.steps)

    @classmethod
    def from_parens(cls, text: str) -> "PlaneTree":
        table = {"(": 1, ")": -1}
        try:
            steps = [table[c] for c in text.strip()]
        except KeyError as exc:
            raise TreeError(f"bad character {exc.args[0]!r} in tree word") from None
        return cls(steps)

    def __eq__(self, other) -> bool:
        return isinstance(other, PlaneTree) and np.array_equal(self.steps, other.steps)

    def __hash__(self) -> int:
        return hash(self.steps.tobytes())

    def __repr__(self) -> str:
        return f"PlaneTree({self.to_parens()!r})"


def tree_to_dyck(t: PlaneTree) -> LatticeWalk:
    """The Dyck path E with E(t) = height of the vertex at contour time t."""
    return LatticeWalk(tuple(int(s) for s in t.steps))


def dyck_to_tree(walk) -> PlaneTree:
    """Inverse of tree_to_dyck; rejects words that are not Dyck paths."""
    if isinstance(walk, LatticeWalk):
        inc = walk.increments
    elif isinstance(walk, str):
        inc = LatticeWalk.from_string(walk).increments
    else:
        inc = tuple(int(s) for s in walk)
    try:
        return PlaneTree(np.asarray(inc, dtype=np.int8))
    except WalkError as exc:
        raise TreeError(str(exc)) from None


def contour_traversal(t: PlaneTree) -> np.ndarray:
    return t.contour


def sample_dyck_steps(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform Dyck word of length 2n as an int8 array, in O(n).

    Shuffles n up / n+1 down steps and closes with the unique rotation that
    ends at the single lowest record (cycle lemma with k = 1), which is
    exactly uniform over the Catalan(n) words.
    """
    if n == 0:
        return np.empty(0, dtype=np.int8)
    word = np.full(2 * n + 1, -1, dtype=np.int8)
    word[rng.choice(2 * n + 1, n, replace=False)] = 1
    sums = np.cumsum(word)
    p1 = int(np.argmin(sums)) + 1  # first time the global minimum is hit
    rotated = np.concatenate((word[p1:], word[:p1]))
    return rotated[:-1]


def sample_plane_tree(n: int, rng: np.random.Generator) -> PlaneTree:
    """Uniform plane tree with n edges."""
    return PlaneTree(sample_dyck_steps(n, rng), validate=False)


# ---------------------------------------------------------------------------
# Shapes


@dataclass(frozen=True)
class Shape:
    """Minimal subtree spanned by marked contour-time vertices and the root,
    with smooth vertices contracted into superedges.

    Shape vertices are indexed 0..q (0 = root) in prefix order; superedge i
    (1-based in ``lengths``' index i-1) reaches shape vertex i.  ``kinds``
    labels each non-root shape vertex: ('x', i) for the vertex fixed by the
    i-th marked time (1-based), ('m', i) for the branchpoint where the
    contour minimum between times i and i+1 is realized, ('v', 0) for a
    fixed vertex that is also a passing point (tie).  ``host`` maps shape
    vertices to host-tree vertex ids.
    """

    parent: tuple[int, ...]
    lengths: tuple[int, ...]
    kinds: tuple[tuple[str, int], ...]
    host: tuple[int, ...]
    times: tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.lengths)

    def children(self, v: int) -> list[int]:
        return [u for u in range(1, self.q + 1) if self.parent[u] == v]

    @property
    def is_binary(self) -> bool:
        """Exactly p leaf shape-vertices (the fixed ones), every internal
        non-root shape vertex a branchpoint with exactly 2 children, and a
        single superedge at the root."""
        p = len(self.times)
        if self.q != 2 * p - 1:
            return False
        for v in range(1, self.q + 1):
            deg = len(self.children(v))
            kind = self.kinds[v - 1][0]
            if kind == "x" and deg != 0:
                return False
            if kind == "m" and deg != 2:
                return False
            if kind == "v":
                return False
        return len(self.children(0)) == 1

    def root_path(self, v: int) -> list[int]:
        """Superedge indices (1-based) from the root down to shape vertex v."""
        out = []
        while v != 0:
            out.append(v)
            v = self.parent[v]
        return out[::-1]

    def to_json(self) -> str:
        return json.dumps(
            {
                "parent": list(self.parent),
                "lengths": list(self.lengths),
                "kinds": [list(k) for k in self.kinds],
                "host": list(self.host),
                "times": list(self.times),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "Shape":
        d = json.loads(text)
        return cls(
            parent=tuple(d["parent"]),
            lengths=tuple(d["lengths"]),
            kinds=tuple((k[0], int(k[1])) for k in d["kinds"]),
            host=tuple(d["host"]),
            times=tuple(d["times"]),
        )


def extract_shape(t: PlaneTree, times: Sequence[int]) -> Shape:
    """Shape spanned by the root and the vertices visited at the given
    strictly increasing contour times 0 < t_i < 2n."""
    two_n = 2 * t.n
    times = [int(x) for x in times]
    if not times:
        raise TreeError("need at least one marked time")
    for i, ti in enumerate(times):
        if not 0 < ti < two_n:
            raise TreeError(f"time {ti} outside (0, {two_n})")
        if i > 0 and times[i - 1] >= ti:
            raise TreeError("times must be strictly increasing")

    contour = t.contour
    parent = t.parent
    fixed = [int(contour[ti]) for ti in times]

    marked = np.zeros(t.n + 1, dtype=bool)
    for v in fixed:
        u = v
        while u != -1 and not marked[u]:
            marked[u] = True
            u = int(parent[u])
    nkids = np.zeros(t.n + 1, dtype=np.int64)
    for v in range(1, t.n + 1):
        if marked[v]:
            nkids[parent[v]] += 1

    fixed_set = set(fixed)
    is_shape = np.zeros(t.n + 1, dtype=bool)
    is_shape[0] = True
    for v in np.flatnonzero(marked):
        if v in fixed_set or nkids[v] >= 2:
            is_shape[v] = True

    # marked children in plane order = ascending prefix id
    kids: dict[int, list[int]] = {}
    for v in range(1, t.n + 1):
        if marked[v]:
            kids.setdefault(int(parent[v]), []).append(v)

    # Depth-first expansion assigning shape ids in prefix order: ids are
    # handed out when a superedge is popped, children pushed in reverse.
    sparent = [0]
    lengths: list[int] = []
    host = [0]
    stack = [(c, 0) for c in reversed(kids.get(0, []))]
    while stack:
        c, psv = stack.pop()
        length = 1
        u = c
        while not is_shape[u]:
            u = kids[u][0]
            length += 1
        sid = len(host)
        host.append(int(u))
        sparent.append(psv)
        lengths.append(length)
        for cc in reversed(kids.get(int(u), [])):
            stack.append((cc, sid))

    time_of_host: dict[int, list[int]] = {}
    for i, v in enumerate(fixed, start=1):
        time_of_host.setdefault(v, []).append(i)
    kinds: list[tuple[str, int]] = []
    for sid in range(1, len(host)):
        hv = host[sid]
        degree = len(kids.get(hv, []))
        if hv in time_of_host:
            if len(time_of_host[hv]) == 1 and degree == 0:
                kinds.append(("x", time_of_host[hv][0]))
            else:
                kinds.append(("v", 0))  # fixed vertex that is also a passing point
        else:
            kinds.append(("m", 0))

    # A branchpoint with exactly two subtrees separates two consecutive
    # leaves i, i+1 and realizes the contour minimum between their times.
    schildren: dict[int, list[int]] = {}
    for sid in range(1, len(host)):
        schildren.setdefault(sparent[sid], []).append(sid)

    def _assign_m(sv: int) -> tuple[int, int]:
        ch = schildren.get(sv, [])
        if not ch:
            k = kinds[sv - 1]
            i = k[1] if k[0] == "x" else 0
            return i, i
        ranges = [_assign_m(u) for u in ch]
        if kinds[sv - 1] == ("m", 0) and len(ch) == 2:
            kinds[sv - 1] = ("m", ranges[0][1])
        return ranges[0][0], ranges[-1][1]

    for top in schildren.get(0, []):
        _assign_m(top)

    return Shape(
        parent=tuple(sparent),
        lengths=tuple(lengths),
        kinds=tuple(kinds),
        host=tuple(host),
        times=tuple(times),
    )


def shape_matrix(s: Shape) -> tuple[np.ndarray, tuple[tuple[str, int], ...]]:
    """0/1 matrix sending superedge lengths to shape-vertex heights.

    Rows and columns follow prefix order, so row k covers superedge k plus
    earlier superedges on the root path: the matrix is lower triangular with
    unit diagonal.  Row labels are returned alongside: ('x', i) rows give
    the height of the i-th fixed vertex, ('m', i) rows the inter-time
    minimum between times i and i+1.  Only binary shapes are accepted.
    """
    if not s.is_binary:
        raise TreeError("shape is not binary (tie or higher-order branchpoint)")
    q = s.q
    mat = np.zeros((q, q), dtype=np.int64)
    for v in range(1, q + 1):
        for e in s.root_path(v):
            mat[v - 1, e - 1] = 1
    return mat, s.kinds

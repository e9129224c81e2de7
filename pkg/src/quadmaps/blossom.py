"""Blossom trees and the conjugation sampler.

A blossom tree is a plane tree whose inner nodes all have degree four and
carry exactly one arrow leaf; the remaining leaves are flags, one of which
(the root) is special.  Embedded trees with n edges correspond bijectively
to blossom trees with n inner nodes, label distributions included: reading
the border of the blossom tree counterclockwise while incrementing a counter
at arrows and decrementing-and-writing at flags reproduces the labels.

Rerooting the special flag acts on the label walk as a cyclic shift, so the
cycle lemma picks out the well-labelled members of each rerooting class:
exactly the rotations ending at one of the two low records.  That gives the
exact-uniform coupled sampler for (well-labelled, embedded) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from ._kernels_py import BT_ARROW, BT_FLAG, BT_INNER, BT_SPECIAL
from .labelled import EmbeddedTree, LabelError, WellLabelledTree
from .trees import PlaneTree
from .walks import LatticeWalk

__all__ = [
    "BlossomError",
    "BlossomTree",
    "FlagLabelling",
    "labelling_process",
    "embedded_to_blossom",
    "blossom_to_embedded",
    "conjugacy_class",
    "sample_well_labelled_coupled",
]


class BlossomError(ValueError):
    """Malformed blossom tree."""


@dataclass(frozen=True)
class BlossomTree:
    """Array-backed blossom tree.

    ``btype`` holds node types, ``bchild`` the (up to 3) children of each
    node in plane order (-1 padded), ``bparent`` the parent links, ``root``
    the special flag's node id.
    """

    btype: np.ndarray
    bparent: np.ndarray
    bchild: np.ndarray
    root: int

    @property
    def n(self) -> int:
        """Inner node count."""
        return (len(self.btype) - 2) // 3

    def validate(self) -> None:
        bt, bp, bc = self.btype, self.bparent, self.bchild
        size = len(bt)
        if size != 3 * self.n + 2:
            raise BlossomError(f"node count {size} is not of the form 3n+2")
        if bt[self.root] != BT_SPECIAL:
            raise BlossomError("root is not the special flag")
        if (bt == BT_SPECIAL).sum() != 1:
            raise BlossomError("exactly one special flag required")
        counts = {
            BT_INNER: int((bt == BT_INNER).sum()),
            BT_ARROW: int((bt == BT_ARROW).sum()),
            BT_FLAG: int((bt == BT_FLAG).sum()),
        }
        n = self.n
        if counts != {BT_INNER: n, BT_ARROW: n, BT_FLAG: n + 1}:
            raise BlossomError(f"bad node-type counts {counts} for n={n}")
        if bc[self.root, 0] < 0 or bc[self.root, 1] >= 0:
            raise BlossomError("special flag must have exactly one child")
        for u in range(size):
            t = bt[u]
            ch = [int(c) for c in bc[u] if c >= 0]
            if t in (BT_ARROW, BT_FLAG) and ch:
                raise BlossomError(f"leaf {u} has children")
            if t == BT_INNER:
                if len(ch) != 3:
                    raise BlossomError(f"inner node {u} has degree {len(ch) + 1} != 4")
                arrows = sum(1 for c in ch if bt[c] == BT_ARROW)
                if arrows != 1:
                    raise BlossomError(f"inner node {u} adjacent to {arrows} arrows")
            for c in ch:
                if bp[c] != u:
                    raise BlossomError(f"parent link broken at {c}")
        if int((bp < 0).sum()) != 1 or bp[self.root] >= 0:
            raise BlossomError("root must be the unique parentless node")

    def flags(self) -> np.ndarray:
        """All flag node ids, special flag included."""
        return np.flatnonzero(
            (self.btype == BT_FLAG) | (self.btype == BT_SPECIAL)
        )

    def reroot(self, flag: int) -> "BlossomTree":
        """Make another flag special (cyclic shift of the tree)."""
        t = self.btype[flag]
        if t == BT_SPECIAL:
            return self
        if t != BT_FLAG:
            raise BlossomError(f"node {flag} is not a flag")
        bt, bp, bc = kernels.reroot_blossom(
            self.btype, self.bparent, self.bchild, self.root, flag
        )
        return BlossomTree(bt, bp, bc, flag)

    def serialize(self) -> str:
        """Parenthesis word with leaf types: S prefix, then A / F leaves and
        (xyz) for inner nodes, children in plane order."""
        bt, bc = self.btype, self.bchild
        out = ["S"]
        stack = [int(self.bchild[self.root, 0])]
        while stack:
            u = stack.pop()
            if u == -2:
                out.append(")")
            elif bt[u] == BT_ARROW:
                out.append("A")
            elif bt[u] == BT_FLAG:
                out.append("F")
            else:
                out.append("(")
                stack.append(-2)
                for j in (2, 1, 0):
                    stack.append(int(bc[u, j]))
        return "".join(out)

    @classmethod
    def deserialize(cls, text: str) -> "BlossomTree":
        text = text.strip()
        if not text.startswith("S"):
            raise BlossomError("blossom serialization starts with 'S'")
        body = text[1:]
        n = body.count("(")
        size = 3 * n + 2
        btype = np.empty(size, dtype=np.uint8)
        bparent = np.full(size, -1, dtype=np.int64)
        bchild = np.full((size, 3), -1, dtype=np.int64)
        btype[0] = BT_SPECIAL
        nxt = 1
        stack = [(0, 0)]  # (node, next child slot)
        for ch in body:
            if ch == ")":
                if not stack:
                    raise BlossomError("unbalanced ')'")
                stack.pop()
                continue
            if not stack:
                raise BlossomError("content after the root subtree")
            parent, slot = stack[-1]
            limit = 1 if parent == 0 else 3
            if slot >= limit:
                raise BlossomError(f"node {parent} has too many children")
            if nxt >= size:
                raise BlossomError("node budget exceeded: malformed word")
            node = nxt
            nxt += 1
            bchild[parent, slot] = node
            bparent[node] = parent
            stack[-1] = (parent, slot + 1)
            if ch == "A":
                btype[node] = BT_ARROW
            elif ch == "F":
                btype[node] = BT_FLAG
            elif ch == "(":
                btype[node] = BT_INNER
                stack.append((node, 0))
            else:
                raise BlossomError(f"bad character {ch!r}")
        if stack and stack != [(0, 1)]:
            raise BlossomError("unbalanced blossom word")
        if nxt != size:
            raise BlossomError("node count mismatch")
        out = cls(btype, bparent, bchild, 0)
        out.validate()
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, BlossomTree) and self.serialize() == other.serialize()

    def __hash__(self) -> int:
        return hash(self.serialize())


@dataclass(frozen=True)
class FlagLabelling:
    """Output of the labelling process: the label written on every normal
    flag (in border order) and the induced walk of B(n, 2)."""

    labels: tuple[int, ...]
    flag_ids: tuple[int, ...]
    walk: LatticeWalk
    step_leaves: tuple[int, ...]

    def label_of(self, flag: int) -> int:
        return self.labels[self.flag_ids.index(flag)]


def labelling_process(b: BlossomTree) -> FlagLabelling:
    """Counterclockwise border walk: +1 at arrows, -1 then write at flags,
    stop back at the special flag (whose arrival is the final down step)."""
    b.validate()
    wsteps, leaves = kernels.blossom_walk(b.btype, b.bchild, b.root)
    cur = 2
    labels = []
    flag_ids = []
    for s, leaf in zip(wsteps[:-1], leaves[:-1]):
        cur += int(s)
        if s < 0:
            labels.append(cur)
            flag_ids.append(int(leaf))
    walk = LatticeWalk(tuple(int(s) for s in wsteps))
    return FlagLabelling(
        labels=tuple(labels),
        flag_ids=tuple(flag_ids),
        walk=walk,
        step_leaves=tuple(int(x) for x in leaves),
    )


def embedded_to_blossom(u: EmbeddedTree) -> BlossomTree:
    """Encode an embedded tree (root label 1) as a blossom tree.

    Each edge becomes an inner node; the position of its arrow among the
    three free slots records the edge increment (+1, 0, -1), with the
    continuation subtree placed so the border labelling reproduces the
    vertex labels.
    """
    if u.root_label != 1:
        raise LabelError("blossom encoding takes the root-label-1 convention")
    bt, bp, bc = kernels.blossom_from_embedded(u.tree.steps, u.inc)
    return BlossomTree(bt, bp, bc, 0)


def blossom_to_embedded(b: BlossomTree) -> EmbeddedTree:
    """Inverse of embedded_to_blossom (each local rule inverted at the
    arrow position)."""
    b.validate()
    steps, inc = kernels.embedded_from_blossom(b.btype, b.bchild, b.root)
    return EmbeddedTree(PlaneTree(steps, validate=False), inc, 1)


def conjugacy_class(b: BlossomTree) -> list[BlossomTree]:
    """The distinct rooted blossom trees sharing b's underlying unrooted
    tree: one rerooting per flag, deduplicated."""
    b.validate()
    seen = {}
    for flag in b.flags():
        t = b.reroot(int(flag))
        key = t.serialize()
        if key not in seen:
            seen[key] = t
    return list(seen.values())


def _low_record_flags(wsteps: np.ndarray, leaves: np.ndarray) -> tuple[int, int]:
    """Flags at the two low records of the blossom walk (the rerootings
    whose walk lies in D(n, 2))."""
    sums = np.cumsum(wsteps, dtype=np.int64)
    mins = np.minimum.accumulate(sums)
    is_rec = sums == mins
    is_rec[1:] &= sums[1:] < mins[:-1]
    rec_idx = np.flatnonzero(is_rec)
    i1, i2 = int(rec_idx[-2]), int(rec_idx[-1])
    return int(leaves[i1]), int(leaves[i2])


def sample_well_labelled_coupled(
    n: int, rng: np.random.Generator
) -> tuple[WellLabelledTree, EmbeddedTree]:
    """Coupled exact-uniform pair (W, U): U uniform over embedded trees,
    W uniform over well-labelled trees, both in the same rerooting class.

    U is drawn uniformly, its blossom walk has exactly two low records, and
    rerooting at a uniformly chosen one yields W.  When the two records give
    the same rooted tree (symmetric class, one well-labelled member) the
    choice collapses, which is exactly the weight the coupling requires.
    """
    from .labelled import sample_embedded

    u = sample_embedded(n, rng, root_label=1)
    bt, bp, bc = kernels.blossom_from_embedded(u.tree.steps, u.inc)
    wsteps, leaves = kernels.blossom_walk(bt, bc, 0)
    f1, f2 = _low_record_flags(wsteps, leaves)
    flag = f1 if rng.integers(2) == 0 else f2
    if flag == 0:
        steps, inc = kernels.embedded_from_blossom(bt, bc, 0)
    else:
        bt2, bp2, bc2 = kernels.reroot_blossom(bt, bp, bc, 0, flag)
        steps, inc = kernels.embedded_from_blossom(bt2, bc2, flag)
    w = WellLabelledTree(PlaneTree(steps, validate=False), inc, 1)
    return w, u

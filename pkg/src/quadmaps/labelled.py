"""Integer-labelled plane trees and their contour encodings.

An embedded tree carries a label increment in {-1, 0, +1} on every edge;
vertex labels are the root label plus the increments along the root path.
Two root-label conventions coexist and are carried explicitly: root label 1
for counting and positivity statements (well-labelled trees demand every
label >= 1), root label 0 for the contour-pair encoding where the label
walk is a bridge from 0 to 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._backend import kernels
from .trees import PlaneTree, TreeError, sample_dyck_steps
from .walks import LatticeWalk

__all__ = [
    "LabelError",
    "ConsistencyError",
    "EmbeddedTree",
    "WellLabelledTree",
    "LabelDistribution",
    "ContourPair",
    "ScaledPaths",
    "height_scale",
    "label_scale",
    "vertex_labels",
    "label_distribution",
    "is_well_labelled",
    "to_contour_pair",
    "from_contour_pair",
    "sample_embedded",
    "scaled_paths",
]


class LabelError(ValueError):
    """Domain error on labelled-tree operations."""


class ConsistencyError(LabelError):
    """A contour pair violates the equal-height matching condition.

    ``times`` holds the offending pair (t, t'): the two traversals of one
    edge whose label increments disagree.
    """

    def __init__(self, t1: int, t2: int):
        super().__init__(f"label walk inconsistent between times {t1} and {t2}")
        self.times = (t1, t2)


def height_scale(n: int) -> float:
    """Contour heights are measured in units of sqrt(2n)."""
    return float(np.sqrt(2.0 * n))


def label_scale(n: int) -> float:
    """Labels are measured in units of (8n/9)^(1/4); defined once here."""
    return float((8.0 * n / 9.0) ** 0.25)


@dataclass(frozen=True)
class EmbeddedTree:
    """Plane tree + per-edge label increments.

    ``inc[v]`` is the increment on the edge from parent(v) to v, for v >= 1
    in prefix order; inc[0] is unused and kept at 0.
    """

    tree: PlaneTree
    inc: np.ndarray
    root_label: int = 1

    def __post_init__(self):
        inc = np.asarray(self.inc, dtype=np.int8)
        object.__setattr__(self, "inc", inc)
        if len(inc) != self.tree.n + 1:
            raise LabelError(
                f"need {self.tree.n + 1} increment slots, got {len(inc)}"
            )
        if len(inc) and inc[0] != 0:
            raise LabelError("inc[0] must be 0 (no edge above the root)")
        if len(inc) and (np.abs(inc[1:]) > 1).any():
            raise LabelError("edge increments must lie in {-1, 0, +1}")
        if self.root_label not in (0, 1):
            raise LabelError("root_label convention must be 0 or 1")

    @property
    def n(self) -> int:
        return self.tree.n

    def labels(self) -> np.ndarray:
        return kernels.labels_from_parent(self.tree.parent, self.inc, self.root_label)

    def with_root_label(self, root_label: int) -> "EmbeddedTree":
        """Same labelled tree under the other root-label convention."""
        if root_label == self.root_label:
            return self
        return EmbeddedTree(self.tree, self.inc, root_label)

    def serialize(self) -> str:
        if self.n == 0:
            return "."
        word = self.tree.to_parens()
        marks = "".join(
            "+" if k > 0 else ("0" if k == 0 else "-") for k in self.inc[1:]
        )
        return f"{word} {marks}"

    @classmethod
    def deserialize(cls, text: str, root_label: int = 1) -> "EmbeddedTree":
        parts = text.split()
        if not parts:
            raise LabelError("empty serialization")
        if parts[0] == ".":
            parts[0] = ""
        tree = PlaneTree.from_parens(parts[0])
        if tree.n == 0:
            if len(parts) > 1:
                raise LabelError("trailing increments for a single-vertex tree")
            return cls(tree, np.zeros(1, dtype=np.int8), root_label)
        if len(parts) != 2:
            raise LabelError("expected 'parens increments'")
        table = {"+": 1, "0": 0, "-": -1}
        try:
            marks = [table[c] for c in parts[1]]
        except KeyError as exc:
            raise LabelError(f"bad increment character {exc.args[0]!r}") from None
        if len(marks) != tree.n:
            raise LabelError(f"expected {tree.n} increments, got {len(marks)}")
        inc = np.zeros(tree.n + 1, dtype=np.int8)
        inc[1:] = marks
        return cls(tree, inc, root_label)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, EmbeddedTree)
            and self.root_label == other.root_label
            and self.tree == other.tree
            and np.array_equal(self.inc, other.inc)
        )

    def __hash__(self) -> int:
        return hash((self.tree, self.inc.tobytes(), self.root_label))


class WellLabelledTree(EmbeddedTree):
    """Embedded tree with root label 1 and every vertex label >= 1."""

    def __post_init__(self):
        super().__post_init__()
        if self.root_label != 1:
            raise LabelError("well-labelled trees have root label 1")
        lo, _ = kernels.label_extrema(self.tree.steps, self.inc, 1)
        if lo < 1:
            raise LabelError(f"label {lo} < 1: tree is not well-labelled")

    @property
    def max_label(self) -> int:
        _, hi = kernels.label_extrema(self.tree.steps, self.inc, 1)
        return hi


@dataclass(frozen=True)
class LabelDistribution:
    """Counts of vertices per label, over the support interval [m, M]."""

    counts: np.ndarray  # counts[j] = number of vertices with label m + j
    min_label: int
    max_label: int

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def count(self, label: int) -> int:
        j = label - self.min_label
        if 0 <= j < len(self.counts):
            return int(self.counts[j])
        return 0

    def cum_from_min(self, k: int) -> int:
        """Labels <= m + k - 1 (cumulated from the realized minimum)."""
        if k <= 0:
            return 0
        return int(self.counts[: min(k, len(self.counts))].sum())

    def cum_from_one(self, k: int) -> int:
        """Labels in [1, k] (the well-labelled convention)."""
        if k <= 0:
            return 0
        lo = max(1, self.min_label)
        if k < lo:
            return 0
        a = lo - self.min_label
        b = min(k, self.max_label) - self.min_label + 1
        return int(self.counts[a:b].sum())

    def empirical_measure(self) -> dict[int, float]:
        """Mass of each label under (1/n) * sum of label counts."""
        n = self.total - 1
        if n <= 0:
            n = 1
        return {
            self.min_label + j: int(c) / n
            for j, c in enumerate(self.counts)
            if c
        }


def vertex_labels(t: EmbeddedTree) -> np.ndarray:
    return t.labels()


def label_distribution(t: EmbeddedTree) -> LabelDistribution:
    labels = t.labels()
    lo = int(labels.min())
    hi = int(labels.max())
    counts = np.bincount(labels - lo, minlength=hi - lo + 1)
    return LabelDistribution(counts=counts, min_label=lo, max_label=hi)


def is_well_labelled(t: EmbeddedTree) -> bool:
    if t.root_label != 1:
        raise LabelError("positivity is stated under the root-label-1 convention")
    lo, _ = kernels.label_extrema(t.tree.steps, t.inc, 1)
    return lo >= 1


@dataclass(frozen=True)
class ContourPair:
    """Height walk E (Dyck) and label walk V (bridge over {-1,0,+1})."""

    e_steps: np.ndarray
    v_steps: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.e_steps, dtype=np.int8)
        v = np.asarray(self.v_steps, dtype=np.int8)
        object.__setattr__(self, "e_steps", e)
        object.__setattr__(self, "v_steps", v)
        if len(e) != len(v):
            raise LabelError("E and V must have the same length")

    @property
    def n(self) -> int:
        return len(self.e_steps) // 2

    def e_values(self) -> np.ndarray:
        out = np.zeros(len(self.e_steps) + 1, dtype=np.int64)
        np.cumsum(self.e_steps, out=out[1:])
        return out

    def v_values(self) -> np.ndarray:
        out = np.zeros(len(self.v_steps) + 1, dtype=np.int64)
        np.cumsum(self.v_steps, out=out[1:])
        return out

    def serialize(self) -> str:
        e = "".join("U" if s > 0 else "D" for s in self.e_steps)
        v = "".join("+" if s > 0 else ("0" if s == 0 else "-") for s in self.v_steps)
        return f"{e} {v}" if len(e) else ""

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ContourPair)
            and np.array_equal(self.e_steps, other.e_steps)
            and np.array_equal(self.v_steps, other.v_steps)
        )

    def __hash__(self) -> int:
        return hash((self.e_steps.tobytes(), self.v_steps.tobytes()))

    @classmethod
    def deserialize(cls, text: str) -> "ContourPair":
        text = text.strip()
        if not text:
            return cls(np.empty(0, dtype=np.int8), np.empty(0, dtype=np.int8))
        parts = text.split()
        if len(parts) != 2:
            raise LabelError("expected 'E-walk V-walk'")
        e = LatticeWalk.from_string(parts[0])
        v = LatticeWalk.from_string(parts[1])
        return cls(
            np.asarray(e.increments, dtype=np.int8),
            np.asarray(v.increments, dtype=np.int8),
        )


def to_contour_pair(t: EmbeddedTree) -> ContourPair:
    """Contour encoding: E(t), V(t) = height and relative label of the
    vertex visited at contour time t (V is taken relative to the root, so
    the pair is convention-free)."""
    steps = t.tree.steps
    contour = t.tree.contour
    labels = t.labels()
    lab_seq = labels[contour]
    return ContourPair(steps.copy(), (lab_seq[1:] - lab_seq[:-1]).astype(np.int8))


def from_contour_pair(pair: ContourPair, root_label: int = 0) -> EmbeddedTree:
    """Decode a contour pair; raises on any violated condition of the
    correspondence (E not Dyck, V not a bridge, or inconsistent labels)."""
    e = pair.e_steps
    v = pair.v_steps
    if len(e) % 2:
        raise TreeError("E has odd length")
    ev = pair.e_values()
    if (ev < 0).any() or ev[-1] != 0:
        raise TreeError("E is not a Dyck path")
    if (np.abs(v) > 1).any():
        raise LabelError("V increments must lie in {-1, 0, +1}")
    # A non-bridge V always disagrees on some edge's two traversals, so the
    # kernel check below subsumes V(2n) = 0.
    status, t1, t2, inc = kernels.kappa_from_contour(e, v)
    if status:
        raise ConsistencyError(t1, t2)
    tree = PlaneTree(e.copy(), validate=False)
    return EmbeddedTree(tree, inc, root_label)


def sample_embedded(
    n: int, rng: np.random.Generator, root_label: int = 1
) -> EmbeddedTree:
    """Exactly uniform embedded tree: uniform plane tree x iid increments."""
    steps = sample_dyck_steps(n, rng)
    inc = np.zeros(n + 1, dtype=np.int8)
    if n:
        inc[1:] = rng.integers(-1, 2, size=n, dtype=np.int8)
    return EmbeddedTree(PlaneTree(steps, validate=False), inc, root_label)


@dataclass(frozen=True)
class ScaledPaths:
    """Right-continuous step functions e(s) = E(floor(2ns))/sqrt(2n) and
    w(s) = V(floor(2ns))/(8n/9)^(1/4) on [0, 1]."""

    e_values: np.ndarray
    v_values: np.ndarray
    n: int

    def e(self, s: float) -> float:
        t = min(int(2 * self.n * s), 2 * self.n)
        return float(self.e_values[t]) / height_scale(self.n)

    def w(self, s: float) -> float:
        t = min(int(2 * self.n * s), 2 * self.n)
        return float(self.v_values[t]) / label_scale(self.n)

    @property
    def sup_w(self) -> float:
        return float(self.v_values.max()) / label_scale(self.n)

    @property
    def inf_w(self) -> float:
        return float(self.v_values.min()) / label_scale(self.n)

    @property
    def sup_e(self) -> float:
        return float(self.e_values.max()) / height_scale(self.n)


def scaled_paths(pair: ContourPair, n: Optional[int] = None) -> ScaledPaths:
    if n is None:
        n = pair.n
    elif n != pair.n:
        raise LabelError(f"pair has length {2 * pair.n}, not 2*{n}")
    if n == 0:
        raise LabelError("scaled paths need n >= 1")
    return ScaledPaths(pair.e_values(), pair.v_values(), n)

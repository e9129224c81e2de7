"""Lattice walks with +-1 increments, their rotation classes and height
statistics.

A walk belongs to the class B(n, k) when it has n up steps, n+k down steps
and ends with a down step; the "positive" subclass D(n, k) stays strictly
above -k before its last step.  Every rotation class of B(n, k) contains
positive members in exact proportion k/(n+k) (the cycle lemma), which is the
engine behind every uniform sampler in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator

__all__ = [
    "WalkError",
    "LatticeWalk",
    "WalkHeights",
    "CycleLemmaReport",
    "partial_sums",
    "count_ballot",
    "cyclic_shift",
    "records",
    "low_records",
    "walk_heights",
    "is_positive_member",
    "enumerate_walks",
    "conjugacy_classes",
    "canonical_rotation",
    "verify_cycle_lemma",
]

MAX_EXHAUSTIVE_LENGTH = 24


class WalkError(ValueError):
    """Domain error on walk operations (bad class membership, parity...)."""


@dataclass(frozen=True)
class LatticeWalk:
    """An increment sequence over {-1,+1} (or {-1,0,+1} for label walks)."""

    increments: tuple[int, ...]

    def __post_init__(self):
        for s in self.increments:
            if s not in (-1, 0, 1):
                raise WalkError(f"bad increment {s!r}")

    def __len__(self) -> int:
        return len(self.increments)

    @property
    def is_binary(self) -> bool:
        return all(s != 0 for s in self.increments)

    @classmethod
    def from_string(cls, text: str) -> "LatticeWalk":
        """Parse 'UD' strings (binary walks) or '+0-' strings (label walks)."""
        table = {"U": 1, "D": -1, "+": 1, "0": 0, "-": -1}
        try:
            return cls(tuple(table[c] for c in text.strip()))
        except KeyError as exc:
            raise WalkError(f"bad walk character {exc.args[0]!r}") from None

    def to_string(self) -> str:
        if self.is_binary:
            return "".join("U" if s > 0 else "D" for s in self.increments)
        return "".join("+" if s > 0 else ("0" if s == 0 else "-") for s in self.increments)

    def __str__(self) -> str:
        return self.to_string()


def _as_walk(w) -> LatticeWalk:
    if isinstance(w, LatticeWalk):
        return w
    if isinstance(w, str):
        return LatticeWalk.from_string(w)
    return LatticeWalk(tuple(int(s) for s in w))


def partial_sums(w) -> list[int]:
    """Partial sums w(0)=0, w(p) = w(p-1) + increment p."""
    w = _as_walk(w)
    out = [0]
    acc = 0
    for s in w.increments:
        acc += s
        out.append(acc)
    return out


def count_ballot(n: int, a: int) -> int:
    """Number of nonnegative +-1 walks of length n ending at height a.

    Exact big-integer evaluation of (a+1)/(n+1) * binom(n+1, (n-a)/2).
    """
    if n < 0 or a < 0:
        raise WalkError("count_ballot needs n >= 0 and a >= 0")
    if (n - a) % 2 != 0:
        raise WalkError(f"parity violation: n={n}, a={a}")
    if a > n:
        return 0
    num = (a + 1) * comb(n + 1, (n - a) // 2)
    assert num % (n + 1) == 0
    return num // (n + 1)


def walk_class(w, k: int) -> int:
    """Validate membership in B(n, k) and return n."""
    w = _as_walk(w)
    if k < 0:
        raise WalkError("k must be >= 0")
    if not w.is_binary:
        raise WalkError("walks of B(n,k) have increments +-1 only")
    length = len(w)
    if (length - k) % 2 != 0 or length < k:
        raise WalkError(f"length {length} incompatible with k={k}")
    n = (length - k) // 2
    ups = sum(1 for s in w.increments if s > 0)
    if ups != n:
        raise WalkError(f"expected {n} up steps, found {ups}")
    if length and w.increments[-1] != -1:
        raise WalkError("walks of B(n,k) end with a down step")
    if length == 0 and k > 0:
        raise WalkError("empty walk cannot have k > 0")
    return n


def cyclic_shift(w, s: int) -> LatticeWalk:
    """Rotate increments left by s: step s+1 becomes the first step."""
    w = _as_walk(w)
    length = len(w)
    if length == 0:
        return w
    if not 0 <= s < length:
        raise WalkError(f"shift {s} out of range for length {length}")
    inc = w.increments
    return LatticeWalk(inc[s:] + inc[:s])


def records(w) -> list[int]:
    """Positions p >= 1 where the walk reaches a strictly new minimum
    (comparison includes w(0) = 0, so p = 0 is never a record)."""
    w = _as_walk(w)
    out = []
    best = 0
    acc = 0
    for p, s in enumerate(w.increments, start=1):
        acc += s
        if acc < best:
            best = acc
            out.append(p)
    return out


def low_records(w, k: int) -> list[int]:
    """The k lowest records p_1 < ... < p_k of a walk of B(n, k)."""
    w = _as_walk(w)
    walk_class(w, k)
    recs = records(w)
    if len(recs) < k:
        raise WalkError(f"walk has {len(recs)} records, needs >= {k}")
    return recs[len(recs) - k:]


@dataclass(frozen=True)
class WalkHeights:
    """Height statistics of a walk of B(n, k).

    ``dyck_height`` is the height inside each of the k factors cut at the
    low records; ``height_to_min`` is the height above the global minimum.
    ``down_counts_dyck[i]`` / ``down_counts_min[i]`` count down steps ending
    at the respective height <= i (any index beyond the stored range equals
    the total number of down steps, n + k).
    """

    dyck_height: tuple[int, ...]
    height_to_min: tuple[int, ...]
    down_counts_dyck: tuple[int, ...]
    down_counts_min: tuple[int, ...]
    low_records: tuple[int, ...]

    def dyck_count(self, i: int) -> int:
        if i < 0:
            return 0
        c = self.down_counts_dyck
        return c[i] if i < len(c) else c[-1]

    def min_count(self, i: int) -> int:
        if i < 0:
            return 0
        c = self.down_counts_min
        return c[i] if i < len(c) else c[-1]


def walk_heights(w, k: int) -> WalkHeights:
    if k < 1:
        raise WalkError("heights need k >= 1")
    w = _as_walk(w)
    walk_class(w, k)
    sums = partial_sums(w)
    recs = low_records(w, k)
    length = len(w)

    # The k low records cut the cyclic walk into k factors; the Dyck height
    # is the height inside the factor.  Positions before p_1 belong to the
    # factor based at p_k continued around the wrap, which is the same as
    # offsetting by w(p_1) + 1.
    bar = [0] * (length + 1)
    ri = 0  # index of the last record <= p once past p_1
    for p in range(length + 1):
        while ri < k - 1 and p >= recs[ri + 1]:
            ri += 1
        if p < recs[0]:
            bar[p] = sums[p] - sums[recs[0]] - 1
        else:
            bar[p] = sums[p] - sums[recs[ri]]
    tilde = [sums[p] - sums[recs[-1]] for p in range(length + 1)]

    max_bar = max(bar) if bar else 0
    max_tilde = max(tilde) if tilde else 0
    ell = [0] * (max_bar + 1)
    h = [0] * (max_tilde + 1)
    for p in range(1, length + 1):
        if w.increments[p - 1] == -1:
            ell[bar[p]] += 1
            h[tilde[p]] += 1
    for i in range(1, len(ell)):
        ell[i] += ell[i - 1]
    for i in range(1, len(h)):
        h[i] += h[i - 1]
    return WalkHeights(
        dyck_height=tuple(bar),
        height_to_min=tuple(tilde),
        down_counts_dyck=tuple(ell),
        down_counts_min=tuple(h),
        low_records=tuple(recs),
    )


def is_positive_member(w, k: int) -> bool:
    """True iff w of B(n, k) stays > -k before its last step."""
    if k < 1:
        raise WalkError("positivity needs k >= 1")
    w = _as_walk(w)
    walk_class(w, k)
    acc = 0
    for s in w.increments[:-1]:
        acc += s
        if acc <= -k:
            return False
    return True


def enumerate_walks(n: int, k: int) -> Iterator[LatticeWalk]:
    """All walks of B(n, k), by position set of the up steps."""
    from itertools import combinations

    length = 2 * n + k
    if length == 0:
        yield LatticeWalk(())
        return
    for ups in combinations(range(length - 1), n):
        inc = [-1] * length
        for p in ups:
            inc[p] = 1
        yield LatticeWalk(tuple(inc))


def canonical_rotation(w, k: int) -> LatticeWalk:
    """Class representative: lexicographically smallest rotation that ends
    with a down step."""
    w = _as_walk(w)
    walk_class(w, k)
    inc = w.increments
    length = len(inc)
    if length == 0:
        return w
    best = None
    for s in range(length):
        if inc[s - 1] != -1:  # rotation by s ends with increment s-1
            continue
        cand = inc[s:] + inc[:s]
        if best is None or cand < best:
            best = cand
    return LatticeWalk(best)


def conjugacy_classes(n: int, k: int) -> dict[LatticeWalk, list[LatticeWalk]]:
    """Partition of B(n, k) into rotation classes, keyed by representative."""
    classes: dict[LatticeWalk, list[LatticeWalk]] = {}
    for w in enumerate_walks(n, k):
        classes.setdefault(canonical_rotation(w, k), []).append(w)
    return classes


@dataclass(frozen=True)
class CycleLemmaReport:
    n: int
    k: int
    class_count: int
    class_sizes: tuple[int, ...]
    total_walks: int
    positive_walks: int


def verify_cycle_lemma(n: int, k: int) -> CycleLemmaReport:
    """Exhaustively check (n+k) * |C n D| = k * |C| on every rotation class.

    Refuses lengths beyond MAX_EXHAUSTIVE_LENGTH; raises WalkError on any
    violated class (never observed; the identity is exact).
    """
    if k < 1:
        raise WalkError("cycle lemma stated for k >= 1")
    if 2 * n + k > MAX_EXHAUSTIVE_LENGTH:
        raise WalkError(
            f"2n+k = {2 * n + k} exceeds exhaustive guard {MAX_EXHAUSTIVE_LENGTH}"
        )
    classes = conjugacy_classes(n, k)
    sizes = []
    total = 0
    positive = 0
    for rep, members in classes.items():
        pos = sum(1 for m in members if is_positive_member(m, k))
        if (n + k) * pos != k * len(members):
            raise WalkError(
                f"cycle lemma violated on class of {rep}: "
                f"({n}+{k})*{pos} != {k}*{len(members)}"
            )
        sizes.append(len(members))
        total += len(members)
        positive += pos
    return CycleLemmaReport(
        n=n,
        k=k,
        class_count=len(classes),
        class_sizes=tuple(sorted(sizes)),
        total_walks=total,
        positive_walks=positive,
    )

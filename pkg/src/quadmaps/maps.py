"""Rooted planar maps as rotation systems on darts.

A map is a pair of permutations on dart ids: the twin involution ``alpha``
(fixed-point free) and the vertex rotation ``sigma`` (next dart
counterclockwise around its origin), plus a distinguished root dart.  Faces
are the orbits of sigma o alpha; Euler's relation on orbit counts yields the
genus, and genus 0 is required for a planar map.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from ._backend import kernels

__all__ = [
    "MapError",
    "PlanarMap",
    "Quadrangulation",
    "Profile",
    "build_map",
    "faces",
    "bfs_profile",
]


class MapError(ValueError):
    """Structured validation error for maps."""


def _check_permutation(arr: np.ndarray, name: str) -> None:
    m = len(arr)
    seen = np.zeros(m, dtype=bool)
    if m and (arr.min() < 0 or arr.max() >= m):
        raise MapError(f"{name} is not a permutation: value out of range")
    seen[arr] = True
    if not seen.all():
        raise MapError(f"{name} is not a permutation: missing images")


class PlanarMap:
    """Validated genus-0 map.  Immutable after construction."""

    __slots__ = (
        "alpha",
        "sigma",
        "root",
        "vertex_of",
        "n_vertices",
        "n_edges",
        "n_faces",
        "_face_id",
        "_face_pos",
        "_face_seq",
        "_dist",
    )

    def __init__(self, alpha, sigma, root: int, _skip_checks: bool = False):
        alpha = np.asarray(alpha, dtype=np.int64)
        sigma = np.asarray(sigma, dtype=np.int64)
        m = len(alpha)
        if m == 0 or m % 2:
            raise MapError("dart count must be positive and even")
        if len(sigma) != m:
            raise MapError("alpha and sigma must act on the same darts")
        if not 0 <= root < m:
            raise MapError(f"root dart {root} out of range")
        if not _skip_checks:
            _check_permutation(alpha, "alpha")
            _check_permutation(sigma, "sigma")
            if (alpha[alpha] != np.arange(m)).any():
                raise MapError("alpha is not an involution")
            if (alpha == np.arange(m)).any():
                raise MapError("alpha has a fixed point")
        self.alpha = alpha
        self.sigma = sigma
        self.root = int(root)

        vid, _, nv, _ = kernels.perm_orbits(sigma)
        self.vertex_of = vid
        self.n_vertices = int(nv)
        self.n_edges = m // 2
        fid, fpos, nf, fseq = kernels.perm_orbits(sigma[alpha])
        self._face_id = fid
        self._face_pos = fpos
        self._face_seq = fseq
        self.n_faces = int(nf)
        self._dist = None

        euler = self.n_vertices - self.n_edges + self.n_faces
        if euler % 2:
            raise MapError("impossible Euler characteristic")
        genus = (2 - euler) // 2
        if genus != 0:
            raise MapError(f"map has genus {genus}, not planar")
        # connectivity: darts connect through vertices and edges, so the
        # underlying graph being connected is equivalent
        if (self.distances() < 0).any():
            raise MapError("map is not connected")

    @property
    def n_darts(self) -> int:
        return len(self.alpha)

    @property
    def root_vertex(self) -> int:
        return int(self.vertex_of[self.root])

    @property
    def face_seq(self) -> np.ndarray:
        """All darts grouped by face id, each group in face-walk order."""
        return self._face_seq

    def face_degrees(self) -> np.ndarray:
        return np.bincount(self._face_id, minlength=self.n_faces)

    def face_darts(self) -> list[np.ndarray]:
        """Dart cycle of every face, in face-walk order."""
        bounds = np.flatnonzero(np.diff(self._face_id[self._face_seq], prepend=-1))
        return np.split(self._face_seq, bounds[1:])

    def edge_endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        """(origin vertex, origin of twin) per dart."""
        return self.vertex_of, self.vertex_of[self.alpha]

    def adjacency_csr(self) -> tuple[np.ndarray, np.ndarray]:
        darts = np.arange(self.n_darts)
        lower = darts < self.alpha  # one entry per edge; csr adds both ends
        return kernels.csr_undirected(
            self.vertex_of[lower], self.vertex_of[self.alpha[lower]], self.n_vertices
        )

    def distances(self) -> np.ndarray:
        """BFS distances from the root vertex (graph metric, all edges 1);
        cached, maps are immutable."""
        if self._dist is None:
            indptr, indices = self.adjacency_csr()
            self._dist = kernels.bfs_csr(indptr, indices, self.root_vertex)
        return self._dist

    def to_text(self) -> str:
        """Line-based serialization: (dart, twin, next) triples plus root;
        round trips are bit-exact."""
        lines = [f"map {self.n_darts} {self.root}"]
        for d in range(self.n_darts):
            lines.append(f"{d} {self.alpha[d]} {self.sigma[d]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PlanarMap":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("map "):
            raise MapError("missing 'map <darts> <root>' header")
        _, m_str, root_str = lines[0].split()
        m = int(m_str)
        if len(lines) != m + 1:
            raise MapError(f"expected {m} dart lines, got {len(lines) - 1}")
        alpha = np.empty(m, dtype=np.int64)
        sigma = np.empty(m, dtype=np.int64)
        seen = np.zeros(m, dtype=bool)
        for ln in lines[1:]:
            d_str, a_str, s_str = ln.split()
            d = int(d_str)
            if not 0 <= d < m or seen[d]:
                raise MapError(f"bad or duplicate dart id {d}")
            seen[d] = True
            alpha[d] = int(a_str)
            sigma[d] = int(s_str)
        return cls(alpha, sigma, int(root_str))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PlanarMap)
            and self.root == other.root
            and np.array_equal(self.alpha, other.alpha)
            and np.array_equal(self.sigma, other.sigma)
        )

    def __hash__(self) -> int:
        return hash((self.alpha.tobytes(), self.sigma.tobytes(), self.root))


def build_map(alpha, sigma, root: int) -> PlanarMap:
    """Validate and build a planar map from its rotation system."""
    return PlanarMap(alpha, sigma, root)


def faces(m: PlanarMap) -> list[tuple[tuple[int, ...], int]]:
    """Dart cycles with degrees; the sum of degrees is twice the edges."""
    return [(tuple(int(d) for d in cyc), len(cyc)) for cyc in m.face_darts()]


class Quadrangulation(PlanarMap):
    """Planar map whose faces all have degree 4; bipartite by construction,
    with 2n edges and n+2 vertices for n faces."""

    __slots__ = ()

    def __init__(self, alpha, sigma, root: int, _skip_checks: bool = False):
        super().__init__(alpha, sigma, root, _skip_checks)
        degs = self.face_degrees()
        if (degs != 4).any():
            bad = int(np.flatnonzero(degs != 4)[0])
            raise MapError(f"face {bad} has degree {int(degs[bad])}, not 4")
        if self.n_edges != 2 * self.n_faces or self.n_vertices != self.n_faces + 2:
            raise MapError("count relations e = 2n, v = n + 2 violated")
        dist = self.distances()
        src, dst = self.edge_endpoints()
        if ((dist[src] - dist[dst]) % 2 == 0).any():
            raise MapError("map is not bipartite")

    @property
    def n(self) -> int:
        """Face count."""
        return self.n_faces


@dataclass(frozen=True)
class Profile:
    """Vertex counts by distance from the root vertex; support is [1, r]."""

    counts: np.ndarray  # counts[k-1] = number of vertices at distance k

    @property
    def radius(self) -> int:
        return len(self.counts)

    def count(self, k: int) -> int:
        return int(self.counts[k - 1]) if 1 <= k <= len(self.counts) else 0

    def cumulated(self, k: int) -> int:
        if k <= 0:
            return 0
        return int(self.counts[: min(k, len(self.counts))].sum())

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def bfs_profile(m: PlanarMap) -> Profile:
    """Exact BFS profile (H_k) and radius of a connected map, O(v + e)."""
    dist = m.distances()
    r = int(dist.max())
    counts = np.bincount(dist, minlength=r + 1)[1:]
    return Profile(counts=counts)

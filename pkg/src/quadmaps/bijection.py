"""The quadrangulation <-> well-labelled tree codec.

Encoding a quadrangulation: label every vertex by its distance from the
root vertex, split each confluent face (both diagonals label-equal) by a
max-label diagonal, select in each simple face the edge leaving the
max-label vertex with the face on its left; the selected edges form a tree
on everything but the root vertex, carrying the distances as labels.

Decoding a tree: walk the 2n contour corners; every corner sends one arc to
the next corner (cyclically) whose label is one less, corners at label 1
send theirs to a fresh vertex v0.  The arcs alone are the quadrangulation:
arcs that merely parallel a label-dropping tree edge play that edge's role,
so this is the same map as adding chords face by face and deleting the
label-preserving tree edges.  Both directions are O(n).

Rotation orders are produced by sorting each vertex's darts by (corner in
contour order, cyclic offset of the arc's far endpoint), the straight-chord
realization of the non-crossing arc family.  The handful of free
orientation choices below are pinned by the round-trip identity on
exhaustively enumerated small trees (see tests).
"""

from __future__ import annotations

import numpy as np

from ._backend import kernels
from .labelled import EmbeddedTree, LabelError, WellLabelledTree
from .maps import MapError, PlanarMap, Quadrangulation
from .trees import PlaneTree

__all__ = [
    "BijectionError",
    "tree_to_quad",
    "quad_to_tree",
    "quad_radius_fast",
    "intermediate_map",
]

# Orientation conventions.  Within a corner, incoming arcs attach from the
# arrival side nested by source proximity and the outgoing arc hugs the
# departure side; v0's rotation runs through its sources in reversed
# contour order (it faces the corner circle from the other side).  In a
# simple face the selected dart is the twin of the face dart entering the
# max-label corner, and the decoder scans forward from the root dart's
# reversal.  This set (and its global mirror) is the unique assignment
# under which encode o decode is the identity on all well-labelled trees
# with n <= 5; tests pin it.


class BijectionError(MapError):
    """Internal contradiction while encoding/decoding (never expected on
    validated inputs)."""


def _corner_data(w: EmbeddedTree):
    """Corner vertices, labels and arc successors of a well-labelled tree."""
    n = w.n
    contour = w.tree.contour
    labels = w.labels()
    cv = contour[: 2 * n].astype(np.int64)
    lab = labels[cv]
    succ = kernels.quad_successors(lab)
    return cv, lab, succ


def tree_to_quad(w: WellLabelledTree) -> Quadrangulation:
    """Decode a well-labelled tree with n >= 1 edges into the rooted
    quadrangulation with n faces whose distance labelling matches the tree
    labels; the root dart points from the fresh vertex v0 to the tree root."""
    if not isinstance(w, WellLabelledTree):
        w = WellLabelledTree(w.tree, w.inc, w.root_label)
    n = w.n
    if n < 1:
        raise LabelError("the correspondence is stated for n >= 1")
    two_n = 2 * n
    cv, lab, succ = _corner_data(w)
    v0 = n + 1

    t_idx = np.arange(two_n, dtype=np.int64)
    to_v0 = succ < 0
    vert_out = cv
    vert_in = np.where(to_v0, v0, cv[np.where(to_v0, 0, succ)])
    anchor_out = t_idx
    # v0 lies across the corner circle from the tree vertices, so its
    # rotation runs through the sources in reversed contour order.
    anchor_in = np.where(to_v0, -t_idx, succ)
    # within a corner, incoming arcs nest by source proximity from the
    # arrival side; the outgoing arc hugs the departure side.
    rank_out = np.full(two_n, two_n + 1, dtype=np.int64)
    rank_in = np.where(to_v0, np.int64(0), (succ - t_idx) % two_n)

    vert = np.empty(2 * two_n, dtype=np.int64)
    anchor = np.empty(2 * two_n, dtype=np.int64)
    rank = np.empty(2 * two_n, dtype=np.int64)
    vert[0::2], vert[1::2] = vert_out, vert_in
    anchor[0::2], anchor[1::2] = anchor_out, anchor_in
    rank[0::2], rank[1::2] = rank_out, rank_in

    # one composite sort key: (vertex, anchor, rank), all components bounded
    key = (vert * (4 * two_n + 4) + (anchor + two_n)) * (two_n + 4) + (rank + 1)
    order = np.argsort(key)
    sigma = np.empty(2 * two_n, dtype=np.int64)
    group = vert[order]
    starts = np.flatnonzero(np.diff(group, prepend=-1))
    ends = np.append(starts[1:], len(order))
    nxt = np.empty(len(order), dtype=np.int64)
    nxt[:-1] = order[1:]
    nxt[ends - 1] = order[starts]
    sigma[order] = nxt

    alpha = np.arange(2 * two_n, dtype=np.int64) ^ 1
    return Quadrangulation(alpha, sigma, root=1, _skip_checks=True)


def quad_radius_fast(w: WellLabelledTree) -> tuple[int, np.ndarray]:
    """Radius and profile of tree_to_quad(w) without assembling rotations:
    arcs give the edge list, BFS from v0 does the rest."""
    n = w.n
    cv, lab, succ = _corner_data(w)
    v0 = n + 1
    dst = np.where(succ < 0, v0, cv[np.where(succ < 0, 0, succ)])
    indptr, indices = kernels.csr_undirected(cv, dst, n + 2)
    dist = kernels.bfs_csr(indptr, indices, v0)
    r = int(dist.max())
    profile = np.bincount(dist, minlength=r + 1)[1:]
    return r, profile


def quad_to_tree(q: Quadrangulation) -> WellLabelledTree:
    """Encode a rooted quadrangulation as the well-labelled tree of its
    selected edges; inverse of tree_to_quad."""
    if not isinstance(q, Quadrangulation):
        raise MapError("quad_to_tree needs a validated Quadrangulation")
    n = q.n
    if n < 1:
        raise MapError("the correspondence is stated for n >= 1")
    m = q.n_darts
    sigma = q.sigma
    alpha = q.alpha
    dist = q.distances()

    fseq = q.face_seq  # darts grouped by face, in face-walk order
    nf = q.n_faces
    labf = dist[q.vertex_of[fseq]]
    l0, l1, l2, l3 = labf[0::4], labf[1::4], labf[2::4], labf[3::4]
    # rotate each face so its (unique or first) min-label corner leads
    jmin = np.zeros(nf, dtype=np.int64)
    best = l0.copy()
    for j, lj in ((1, l1), (2, l2), (3, l3)):
        better = lj < best
        jmin[better] = j
        np.minimum(best, lj, out=best)
    base = np.arange(nf, dtype=np.int64) * 4
    fd = np.empty((nf, 4), dtype=np.int64)
    flab = np.empty((nf, 4), dtype=np.int64)
    for j in range(4):
        idx = base + ((jmin + j) & 3)
        fd[:, j] = fseq[idx]
        flab[:, j] = labf[idx]
    confluent = flab[:, 2] == flab[:, 0]

    n_conf = int(confluent.sum())
    total = m + 2 * n_conf
    sigma2 = np.empty(total, dtype=np.int64)
    sigma2[:m] = sigma
    alpha2 = np.empty(total, dtype=np.int64)
    alpha2[:m] = alpha
    selected = np.zeros(total, dtype=bool)

    simple = ~confluent
    sel_simple = alpha[fd[simple, 1]]
    selected[sel_simple] = True
    selected[alpha[sel_simple]] = True

    if n_conf:
        g1 = m + 2 * np.arange(n_conf, dtype=np.int64)
        g2 = g1 + 1
        d0 = fd[confluent, 0]
        d1 = fd[confluent, 1]
        d2 = fd[confluent, 2]
        d3 = fd[confluent, 3]
        # the face corner at d1 sits between alpha(d0) and d1; diagonal darts
        # slot in there (and symmetrically at d3).
        sigma2[alpha[d0]] = g1
        sigma2[g1] = d1
        sigma2[alpha[d2]] = g2
        sigma2[g2] = d3
        alpha2[g1] = g2
        alpha2[g2] = g1
        selected[g1] = True
        selected[g2] = True

    # rotation order of every dart around its vertex in the split map
    vid2, _, _, vseq2 = kernels.perm_orbits(sigma2)

    head = int(q.vertex_of[alpha[q.root]])
    d = int(alpha2[q.root])
    for _ in range(total + 1):
        d = int(sigma2[d])
        if selected[d]:
            break
    else:
        raise BijectionError("no selected edge around the root endpoint")
    root_t = d

    sorder = vseq2[selected[vseq2]]
    sgroup = vid2[sorder]
    sstarts = np.flatnonzero(np.diff(sgroup, prepend=-1))
    sends = np.append(sstarts[1:], len(sorder))
    snxt = np.empty(len(sorder), dtype=np.int64)
    snxt[:-1] = sorder[1:]
    snxt[sends - 1] = sorder[sstarts]
    sigma_t = np.full(total, -1, dtype=np.int64)
    sigma_t[sorder] = snxt

    phi_t = sigma_t[alpha2]
    walk = kernels.walk_cycle(phi_t, root_t, 2 * n)
    edge_ids = np.minimum(walk, alpha2[walk])
    # each edge id occurs exactly twice; a stable sort keeps first visits
    # at the even slots
    pair_order = np.argsort(edge_ids, kind="stable")
    steps = np.full(2 * n, -1, dtype=np.int8)
    steps[pair_order[0::2]] = 1

    verts = np.empty(2 * n + 1, dtype=np.int64)
    origins2 = np.empty(total, dtype=np.int64)
    origins2[: m] = q.vertex_of
    if n_conf:
        origins2[g1] = q.vertex_of[d1]
        origins2[g2] = q.vertex_of[d3]
    verts[:-1] = origins2[walk]
    verts[-1] = origins2[alpha2[walk[-1]]]

    lab_seq = dist[verts]
    if lab_seq[0] != 1 or verts[0] != head:
        raise BijectionError("root selection does not start at a 1-labelled vertex")
    acc = np.cumsum(steps)
    if (acc < 0).any() or acc[-1] != 0 or len(np.unique(verts)) != n + 1:
        raise BijectionError("selected edges do not form a tree")

    inc = np.zeros(n + 1, dtype=np.int8)
    ups = steps > 0
    inc[1:] = (lab_seq[1:] - lab_seq[:-1])[ups].astype(np.int8)
    tree = PlaneTree(steps, validate=False)
    out = WellLabelledTree(tree, inc, 1)
    if not np.array_equal(out.labels()[tree.contour[:-1]], lab_seq[:-1]):
        raise BijectionError("decoded labels disagree with BFS distances")
    return out


def intermediate_map(w: WellLabelledTree) -> tuple[PlanarMap, np.ndarray]:
    """The split map before label-preserving edges are removed: tree edges
    plus all arcs that do not parallel a label-dropping tree edge.  Its
    faces are triangles (e, e+1, e+1) or quadrangles (e, e+1, e+2, e+1);
    exposed for the tests that assert exactly that.  Returns the map and
    the label of every dart's origin."""
    n = w.n
    two_n = 2 * n
    cv, lab, succ = _corner_data(w)
    v0 = n + 1
    t_idx = np.arange(two_n, dtype=np.int64)
    to_v0 = succ < 0
    parallel = (~to_v0) & (succ == (t_idx + 1) % two_n)

    keep = np.flatnonzero(~parallel)
    n_arc = len(keep)
    # darts: tree darts first (dart at corner t = the step-(t+1) contour
    # dart, twin pairing by edge), then arc darts for kept arcs.
    twin = np.empty(two_n, dtype=np.int64)
    contour = w.tree.contour
    # pair tree darts: corner t's outgoing dart traverses contour step t+1
    stack = []
    for t in range(two_n):
        if w.tree.steps[t] > 0:
            stack.append(t)
        else:
            s = stack.pop()
            twin[s] = t
            twin[t] = s

    total = two_n + 2 * n_arc
    alpha = np.empty(total, dtype=np.int64)
    alpha[:two_n] = twin
    out_id = np.full(two_n, -1, dtype=np.int64)
    out_id[keep] = two_n + 2 * np.arange(n_arc)
    in_id = out_id + 1
    alpha[out_id[keep]] = in_id[keep]
    alpha[in_id[keep]] = out_id[keep]

    vert = np.empty(total, dtype=np.int64)
    anchor = np.empty(total, dtype=np.int64)
    rank = np.empty(total, dtype=np.int64)
    vert[:two_n] = cv
    anchor[:two_n] = t_idx
    rank[:two_n] = two_n + 2  # the departure tree dart closes its corner
    vert[out_id[keep]] = cv[keep]
    anchor[out_id[keep]] = t_idx[keep]
    rank[out_id[keep]] = two_n + 1
    vert[in_id[keep]] = np.where(to_v0[keep], v0, cv[np.where(to_v0[keep], 0, succ[keep])])
    anchor[in_id[keep]] = np.where(to_v0[keep], -keep, succ[keep])
    rank[in_id[keep]] = np.where(to_v0[keep], np.int64(0), (succ[keep] - keep) % two_n)

    order = np.lexsort((rank, anchor, vert))
    sigma = np.empty(total, dtype=np.int64)
    group = vert[order]
    starts = np.flatnonzero(np.diff(group, prepend=-1))
    ends = np.append(starts[1:], len(order))
    nxt = np.empty(len(order), dtype=np.int64)
    nxt[:-1] = order[1:]
    nxt[ends - 1] = order[starts]
    sigma[order] = nxt

    labels = w.labels()
    origin_label = np.empty(total, dtype=np.int64)
    origin_label[:two_n] = labels[cv]
    origin_label[out_id[keep]] = lab[keep]
    origin_label[in_id[keep]] = np.where(
        to_v0[keep], 0, lab[np.where(to_v0[keep], 0, succ[keep])]
    )
    root = in_id[0]
    return PlanarMap(alpha, sigma, int(root)), origin_label

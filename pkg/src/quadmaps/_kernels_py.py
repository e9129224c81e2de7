"""Pure-Python kernels.

Reference implementations of the array-level hot loops.  The compiled
extension ``quadmaps._kernels`` mirrors every function here with identical
signatures and bit-identical outputs; which one is used is decided at import
time in :mod:`quadmaps._backend`.  These versions favour clarity over speed
and are the fallback when the extension is unavailable.

All functions take and return numpy arrays.  Dyck/contour steps are ``int8``
(+1/-1), label increments are ``int8`` (-1/0/+1), ids and counters are
``int64``.  None of these functions validate their inputs beyond what the
algorithm needs; callers hold the contracts.
"""

from __future__ import annotations

import numpy as np

IS_COMPILED = False

# Blossom-tree node types shared by both backends.
BT_SPECIAL = 0
BT_INNER = 1
BT_ARROW = 2
BT_FLAG = 3


def tree_from_steps(steps):
    """Decode a Dyck word into (parent, contour) arrays.

    Vertices are numbered 0..n in order of first visit (prefix order), root
    is 0.  ``contour[t]`` is the vertex visited at contour time t.
    """
    two_n = len(steps)
    n = two_n // 2
    parent = np.empty(n + 1, dtype=np.int64)
    contour = np.empty(two_n + 1, dtype=np.int64)
    parent[0] = -1
    contour[0] = 0
    cur = 0
    nxt = 1
    for t in range(two_n):
        if steps[t] > 0:
            parent[nxt] = cur
            cur = nxt
            nxt += 1
        else:
            cur = parent[cur]
        contour[t + 1] = cur
    return parent, contour


def labels_from_parent(parent, inc, root_label):
    """Accumulate per-edge increments down a prefix-ordered tree."""
    n1 = len(parent)
    labels = np.empty(n1, dtype=np.int64)
    labels[0] = root_label
    for v in range(1, n1):
        labels[v] = labels[parent[v]] + inc[v]
    return labels


def kappa_from_contour(e_steps, v_steps):
    """Recover per-edge increments from a contour pair.

    Returns ``(status, t1, t2, inc)``.  status 0 means the pair is
    consistent; otherwise (t1, t2) are contour times of the first and the
    failing traversal of the offending edge.
    """
    two_n = len(e_steps)
    n = two_n // 2
    inc = np.zeros(n + 1, dtype=np.int8)
    first_time = np.zeros(n + 1, dtype=np.int64)
    parent = np.empty(n + 1, dtype=np.int64)
    parent[0] = -1
    cur = 0
    nxt = 1
    for t in range(two_n):
        if e_steps[t] > 0:
            parent[nxt] = cur
            inc[nxt] = v_steps[t]
            first_time[nxt] = t
            cur = nxt
            nxt += 1
        else:
            if v_steps[t] != -inc[cur]:
                return 1, int(first_time[cur]), int(t), inc
            cur = parent[cur]
    return 0, 0, 0, inc


def label_extrema(steps, inc, root_label):
    """Min and max vertex label of an embedded tree, by contour walk."""
    two_n = len(steps)
    n = two_n // 2
    stack = np.empty(n + 1, dtype=np.int8)
    sp = 0
    cur = root_label
    lo = hi = root_label
    e = 1
    for t in range(two_n):
        if steps[t] > 0:
            k = inc[e]
            e += 1
            stack[sp] = k
            sp += 1
            cur += k
            if cur < lo:
                lo = cur
            elif cur > hi:
                hi = cur
        else:
            sp -= 1
            cur -= stack[sp]
    return int(lo), int(hi)


def quad_successors(labels):
    """Cyclic successor of every contour corner: the next corner whose label
    is one less.  Corners with label 1 get -1 (they attach to the extra
    vertex).  Two passes realize the wrap-around."""
    m = len(labels)
    succ = np.full(m, -1, dtype=np.int64)
    stack = np.empty(m, dtype=np.int64)
    sp = 0
    for t in range(m):
        lab = labels[t]
        while sp > 0 and labels[stack[sp - 1]] == lab + 1:
            sp -= 1
            succ[stack[sp]] = t
        if lab > 1:
            stack[sp] = t
            sp += 1
    for t in range(m):
        if sp == 0:
            break
        lab = labels[t]
        while sp > 0 and labels[stack[sp - 1]] == lab + 1:
            sp -= 1
            succ[stack[sp]] = t
    return succ


def bfs_csr(indptr, indices, root):
    """BFS distances over a CSR adjacency; -1 marks unreachable vertices."""
    nv = len(indptr) - 1
    dist = np.full(nv, -1, dtype=np.int64)
    queue = np.empty(nv, dtype=np.int64)
    dist[root] = 0
    queue[0] = root
    head, tail = 0, 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            if dist[v] < 0:
                dist[v] = du + 1
                queue[tail] = v
                tail += 1
    return dist


def perm_orbits(perm):
    """Orbit decomposition of a permutation.

    Returns ``(orbit_id, orbit_pos, n_orbits, seq)``: orbits numbered in
    order of their smallest element, ``orbit_pos`` the position within the
    orbit walked from that element, and ``seq`` all elements ordered by
    (orbit, position) -- the orbits laid out back to back.
    """
    m = len(perm)
    orbit_id = np.full(m, -1, dtype=np.int64)
    orbit_pos = np.empty(m, dtype=np.int64)
    seq = np.empty(m, dtype=np.int64)
    k = 0
    i = 0
    for s in range(m):
        if orbit_id[s] >= 0:
            continue
        d = s
        pos = 0
        while orbit_id[d] < 0:
            orbit_id[d] = k
            orbit_pos[d] = pos
            seq[i] = d
            i += 1
            pos += 1
            d = perm[d]
        k += 1
    return orbit_id, orbit_pos, k, seq


def walk_cycle(perm, start, count):
    """The first ``count`` elements of the perm cycle through ``start``."""
    out = np.empty(count, dtype=np.int64)
    d = start
    for i in range(count):
        out[i] = d
        d = perm[d]
    return out


def blossom_from_embedded(steps, inc):
    """Encode an embedded tree as a blossom tree (arrays).

    One inner node per tree edge, one flag per tree vertex, one arrow per
    inner node, plus the special root flag (node 0).  Child slots follow
    the local rules keyed by the edge increment; see the blossom module.
    Single contour pass: when a vertex closes, its completed child slots
    sit on top of an auxiliary stack and are wrapped right to left.
    Returns ``(btype, bparent, bchild)`` with bchild of shape (3n+2, 3),
    -1-padded int32; the root is node 0.
    """
    two_n = len(steps)
    n = two_n // 2
    size = 3 * n + 2
    btype = np.empty(size, dtype=np.uint8)
    bparent = np.full(size, -1, dtype=np.int32)
    bchild = np.full((size, 3), -1, dtype=np.int32)
    btype[0] = BT_SPECIAL

    slot_stack = np.empty(n + 1, dtype=np.int32)  # completed (slot, kappa)
    kap_stack = np.empty(n + 1, dtype=np.int8)
    open_kids = np.empty(n + 2, dtype=np.int32)  # open vertices: child count
    open_vid = np.empty(n + 2, dtype=np.int32)  # and prefix id
    sp = 0
    osp = 1
    open_kids[0] = 0
    open_vid[0] = 0
    vid = 0
    nxt = 1

    def close_vertex(sp, nxt):
        cur = nxt
        btype[cur] = BT_FLAG
        nxt += 1
        for _ in range(open_kids[osp - 1]):
            sp -= 1
            child_slot = slot_stack[sp]
            kap = kap_stack[sp]
            inner = nxt
            arrow = nxt + 1
            nxt += 2
            btype[inner] = BT_INNER
            btype[arrow] = BT_ARROW
            if kap > 0:
                c0, c1, c2 = arrow, child_slot, cur
            elif kap == 0:
                c0, c1, c2 = cur, arrow, child_slot
            else:
                c0, c1, c2 = cur, child_slot, arrow
            bchild[inner, 0] = c0
            bchild[inner, 1] = c1
            bchild[inner, 2] = c2
            bparent[c0] = inner
            bparent[c1] = inner
            bparent[c2] = inner
            cur = inner
        return cur, sp, nxt

    for t in range(two_n):
        if steps[t] > 0:
            vid += 1
            open_kids[osp - 1] += 1
            open_kids[osp] = 0
            open_vid[osp] = vid
            osp += 1
        else:
            cur, sp, nxt = close_vertex(sp, nxt)
            slot_stack[sp] = cur
            kap_stack[sp] = inc[open_vid[osp - 1]]
            sp += 1
            osp -= 1
    root_slot, sp, nxt = close_vertex(sp, nxt)
    bchild[0, 0] = root_slot
    bparent[root_slot] = 0
    return btype, bparent, bchild


def blossom_walk(btype, bchild, root):
    """Border walk of a blossom tree: +1 at arrows, -1 at flags, final -1
    back at the root flag.  Returns (walk steps, leaf id per step)."""
    size = len(btype)
    n = (size - 2) // 3
    length = 2 * n + 2
    wsteps = np.empty(length, dtype=np.int8)
    leaves = np.empty(length, dtype=np.int64)
    stack = np.empty(size, dtype=np.int64)
    sp = 0
    stack[sp] = bchild[root, 0]
    sp += 1
    i = 0
    while sp > 0:
        sp -= 1
        u = stack[sp]
        t = btype[u]
        if t == BT_INNER:
            stack[sp] = bchild[u, 2]
            stack[sp + 1] = bchild[u, 1]
            stack[sp + 2] = bchild[u, 0]
            sp += 3
        elif t == BT_ARROW:
            wsteps[i] = 1
            leaves[i] = u
            i += 1
        else:
            wsteps[i] = -1
            leaves[i] = u
            i += 1
    wsteps[i] = -1
    leaves[i] = root
    return wsteps, leaves


def reroot_blossom(btype, bparent, bchild, root, new_root):
    """Move the special flag of a blossom tree to the flag ``new_root``.

    Only nodes on the path from the new root to the old one change: their
    parent flips to the previous path node and their children are the
    remaining neighbours in unchanged cyclic order.
    """
    btype2 = btype.copy()
    bparent2 = bparent.copy()
    bchild2 = bchild.copy()
    if new_root == root:
        return btype2, bparent2, bchild2
    btype2[root] = BT_FLAG
    btype2[new_root] = BT_SPECIAL

    path = [new_root]
    u = new_root
    while u != root:
        u = int(bparent[u])
        path.append(u)

    bparent2[new_root] = -1
    bchild2[new_root, 0] = path[1]
    bchild2[new_root, 1] = -1
    bchild2[new_root, 2] = -1
    for i in range(1, len(path)):
        u = path[i]
        prev = path[i - 1]
        neigh = [int(bparent[u])] if bparent[u] >= 0 else []
        for j in range(3):
            c = bchild[u, j]
            if c >= 0:
                neigh.append(int(c))
        pos = neigh.index(prev)
        rotated = neigh[pos + 1:] + neigh[:pos]
        bparent2[u] = prev
        for j in range(3):
            c = rotated[j] if j < len(rotated) else -1
            bchild2[u, j] = c
            if c >= 0:
                bparent2[c] = u
    return btype2, bparent2, bchild2


def embedded_from_blossom(btype, bchild, root):
    """Decode a blossom tree back to an embedded tree (steps, inc)."""
    size = len(btype)
    n = (size - 2) // 3
    steps = np.empty(2 * n, dtype=np.int8)
    inc = np.zeros(n + 1, dtype=np.int8)
    stack = np.empty(n + 1, dtype=np.int64)
    sp = 0
    t = 0
    v = 1
    cur = bchild[root, 0]
    while True:
        if btype[cur] == BT_INNER:
            c0 = bchild[cur, 0]
            c1 = bchild[cur, 1]
            c2 = bchild[cur, 2]
            if btype[c0] == BT_ARROW:
                k, r1, rp = 1, c1, c2
            elif btype[c1] == BT_ARROW:
                k, r1, rp = 0, c2, c0
            else:
                k, r1, rp = -1, c1, c0
            steps[t] = 1
            t += 1
            inc[v] = k
            v += 1
            stack[sp] = rp
            sp += 1
            cur = r1
        else:
            if sp == 0:
                break
            steps[t] = -1
            t += 1
            sp -= 1
            cur = stack[sp]
    return steps, inc


def batch_label_extrema(steps_batch, inc_batch, root_label):
    """Vectorized-over-samples label extrema; one row per sample."""
    b = steps_batch.shape[0]
    lo = np.empty(b, dtype=np.int64)
    hi = np.empty(b, dtype=np.int64)
    for i in range(b):
        lo[i], hi[i] = label_extrema(steps_batch[i], inc_batch[i], root_label)
    return lo, hi


def csr_undirected(src, dst, nv):
    """CSR adjacency of an undirected edge list, by counting sort."""
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    nv = int(nv)
    counts = np.bincount(src, minlength=nv) + np.bincount(dst, minlength=nv)
    indptr = np.zeros(nv + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    indices = np.empty(2 * len(src), dtype=np.int64)
    fill = indptr[:-1].copy()
    for a, b in zip(src, dst):
        indices[fill[a]] = b
        fill[a] += 1
        indices[fill[b]] = a
        fill[b] += 1
    return indptr, indices

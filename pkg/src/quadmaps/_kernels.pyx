# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: typed mirrors of quadmaps._kernels_py.

Same signatures, same outputs, bit for bit; only the loops are C.  Keep the
two files in lockstep (tests/test_backends.py cross-checks them).
"""

import numpy as np

cimport cython
from libc.stdint cimport int8_t, int32_t, int64_t, uint8_t

IS_COMPILED = True

BT_SPECIAL = 0
BT_INNER = 1
BT_ARROW = 2
BT_FLAG = 3

cdef int8_t C_SPECIAL = 0
cdef int8_t C_INNER = 1
cdef int8_t C_ARROW = 2
cdef int8_t C_FLAG = 3


def tree_from_steps(steps):
    cdef const int8_t[::1] s = np.ascontiguousarray(steps, dtype=np.int8)
    cdef Py_ssize_t two_n = s.shape[0]
    cdef Py_ssize_t n = two_n // 2
    parent_arr = np.empty(n + 1, dtype=np.int64)
    contour_arr = np.empty(two_n + 1, dtype=np.int64)
    cdef int64_t[::1] parent = parent_arr
    cdef int64_t[::1] contour = contour_arr
    cdef int64_t cur = 0, nxt = 1
    cdef Py_ssize_t t
    parent[0] = -1
    contour[0] = 0
    for t in range(two_n):
        if s[t] > 0:
            parent[nxt] = cur
            cur = nxt
            nxt += 1
        else:
            cur = parent[cur]
        contour[t + 1] = cur
    return parent_arr, contour_arr


def labels_from_parent(parent, inc, root_label):
    cdef const int64_t[::1] p = np.ascontiguousarray(parent, dtype=np.int64)
    cdef const int8_t[::1] k = np.ascontiguousarray(inc, dtype=np.int8)
    cdef Py_ssize_t n1 = p.shape[0]
    labels_arr = np.empty(n1, dtype=np.int64)
    cdef int64_t[::1] labels = labels_arr
    cdef Py_ssize_t v
    labels[0] = <int64_t> root_label
    for v in range(1, n1):
        labels[v] = labels[p[v]] + k[v]
    return labels_arr


def kappa_from_contour(e_steps, v_steps):
    cdef const int8_t[::1] e = np.ascontiguousarray(e_steps, dtype=np.int8)
    cdef const int8_t[::1] v = np.ascontiguousarray(v_steps, dtype=np.int8)
    cdef Py_ssize_t two_n = e.shape[0]
    cdef Py_ssize_t n = two_n // 2
    inc_arr = np.zeros(n + 1, dtype=np.int8)
    cdef int8_t[::1] inc = inc_arr
    first_arr = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] first_time = first_arr
    parent_arr = np.empty(n + 1, dtype=np.int64)
    cdef int64_t[::1] parent = parent_arr
    cdef int64_t cur = 0, nxt = 1
    cdef Py_ssize_t t
    parent[0] = -1
    for t in range(two_n):
        if e[t] > 0:
            parent[nxt] = cur
            inc[nxt] = v[t]
            first_time[nxt] = t
            cur = nxt
            nxt += 1
        else:
            if v[t] != -inc[cur]:
                return 1, int(first_time[cur]), int(t), inc_arr
            cur = parent[cur]
    return 0, 0, 0, inc_arr


def label_extrema(steps, inc, root_label):
    cdef const int8_t[::1] s = np.ascontiguousarray(steps, dtype=np.int8)
    cdef const int8_t[::1] k = np.ascontiguousarray(inc, dtype=np.int8)
    cdef Py_ssize_t two_n = s.shape[0]
    cdef Py_ssize_t n = two_n // 2
    stack_arr = np.empty(n + 1, dtype=np.int8)
    cdef int8_t[::1] stack = stack_arr
    cdef Py_ssize_t sp = 0, e = 1, t
    cdef int64_t cur = <int64_t> root_label
    cdef int64_t lo = cur, hi = cur
    cdef int8_t kk
    for t in range(two_n):
        if s[t] > 0:
            kk = k[e]
            e += 1
            stack[sp] = kk
            sp += 1
            cur += kk
            if cur < lo:
                lo = cur
            elif cur > hi:
                hi = cur
        else:
            sp -= 1
            cur -= stack[sp]
    return int(lo), int(hi)


def quad_successors(labels):
    cdef const int64_t[::1] lab = np.ascontiguousarray(labels, dtype=np.int64)
    cdef Py_ssize_t m = lab.shape[0]
    succ_arr = np.full(m, -1, dtype=np.int64)
    cdef int64_t[::1] succ = succ_arr
    stack_arr = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] stack = stack_arr
    cdef Py_ssize_t sp = 0, t
    cdef int64_t l
    for t in range(m):
        l = lab[t]
        while sp > 0 and lab[stack[sp - 1]] == l + 1:
            sp -= 1
            succ[stack[sp]] = t
        if l > 1:
            stack[sp] = t
            sp += 1
    for t in range(m):
        if sp == 0:
            break
        l = lab[t]
        while sp > 0 and lab[stack[sp - 1]] == l + 1:
            sp -= 1
            succ[stack[sp]] = t
    return succ_arr


def bfs_csr(indptr, indices, root):
    cdef const int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const int64_t[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef Py_ssize_t nv = ip.shape[0] - 1
    dist_arr = np.full(nv, -1, dtype=np.int64)
    cdef int64_t[::1] dist = dist_arr
    queue_arr = np.empty(nv, dtype=np.int64)
    cdef int64_t[::1] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 1
    cdef int64_t u, vv, du
    cdef Py_ssize_t j
    dist[root] = 0
    queue[0] = <int64_t> root
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        for j in range(ip[u], ip[u + 1]):
            vv = ix[j]
            if dist[vv] < 0:
                dist[vv] = du + 1
                queue[tail] = vv
                tail += 1
    return dist_arr


def perm_orbits(perm):
    cdef const int64_t[::1] p = np.ascontiguousarray(perm, dtype=np.int64)
    cdef Py_ssize_t m = p.shape[0]
    oid_arr = np.full(m, -1, dtype=np.int64)
    opos_arr = np.empty(m, dtype=np.int64)
    seq_arr = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] oid = oid_arr
    cdef int64_t[::1] opos = opos_arr
    cdef int64_t[::1] seq = seq_arr
    cdef Py_ssize_t s, i = 0
    cdef int64_t d, pos, k = 0
    for s in range(m):
        if oid[s] >= 0:
            continue
        d = s
        pos = 0
        while oid[d] < 0:
            oid[d] = k
            opos[d] = pos
            seq[i] = d
            i += 1
            pos += 1
            d = p[d]
        k += 1
    return oid_arr, opos_arr, int(k), seq_arr


def walk_cycle(perm, start, count):
    cdef const int64_t[::1] p = np.ascontiguousarray(perm, dtype=np.int64)
    out_arr = np.empty(count, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef int64_t d = <int64_t> start
    cdef Py_ssize_t i
    for i in range(<Py_ssize_t> count):
        out[i] = d
        d = p[d]
    return out_arr


def blossom_from_embedded(steps, inc):
    cdef const int8_t[::1] s = np.ascontiguousarray(steps, dtype=np.int8)
    cdef const int8_t[::1] k_in = np.ascontiguousarray(inc, dtype=np.int8)
    cdef Py_ssize_t two_n = s.shape[0]
    cdef Py_ssize_t n = two_n // 2
    cdef Py_ssize_t size = 3 * n + 2
    btype_arr = np.empty(size, dtype=np.uint8)
    bparent_arr = np.full(size, -1, dtype=np.int32)
    bchild_arr = np.full((size, 3), -1, dtype=np.int32)
    cdef uint8_t[::1] btype = btype_arr
    cdef int32_t[::1] bparent = bparent_arr
    cdef int32_t[:, ::1] bchild = bchild_arr
    btype[0] = C_SPECIAL

    slot_arr = np.empty(n + 1, dtype=np.int32)
    kap_arr = np.empty(n + 1, dtype=np.int8)
    okids_arr = np.empty(n + 2, dtype=np.int32)
    ovid_arr = np.empty(n + 2, dtype=np.int32)
    cdef int32_t[::1] slot_stack = slot_arr
    cdef int8_t[::1] kap_stack = kap_arr
    cdef int32_t[::1] open_kids = okids_arr
    cdef int32_t[::1] open_vid = ovid_arr
    cdef Py_ssize_t sp = 0, osp = 1, t, j
    cdef int32_t vid = 0, nxt = 1, cur, inner, arrow, child_slot, c0, c1, c2
    cdef int8_t kap
    open_kids[0] = 0
    open_vid[0] = 0

    for t in range(two_n + 1):
        if t < two_n and s[t] > 0:
            vid += 1
            open_kids[osp - 1] += 1
            open_kids[osp] = 0
            open_vid[osp] = vid
            osp += 1
        else:
            cur = nxt
            btype[cur] = C_FLAG
            nxt += 1
            for j in range(open_kids[osp - 1]):
                sp -= 1
                child_slot = slot_stack[sp]
                kap = kap_stack[sp]
                inner = nxt
                arrow = nxt + 1
                nxt += 2
                btype[inner] = C_INNER
                btype[arrow] = C_ARROW
                if kap > 0:
                    c0 = arrow; c1 = child_slot; c2 = cur
                elif kap == 0:
                    c0 = cur; c1 = arrow; c2 = child_slot
                else:
                    c0 = cur; c1 = child_slot; c2 = arrow
                bchild[inner, 0] = c0
                bchild[inner, 1] = c1
                bchild[inner, 2] = c2
                bparent[c0] = inner
                bparent[c1] = inner
                bparent[c2] = inner
                cur = inner
            if t < two_n:
                slot_stack[sp] = cur
                kap_stack[sp] = k_in[open_vid[osp - 1]]
                sp += 1
                osp -= 1
    bchild[0, 0] = cur
    bparent[cur] = 0
    return btype_arr, bparent_arr, bchild_arr


def blossom_walk(btype, bchild, root):
    cdef const uint8_t[::1] bt = np.ascontiguousarray(btype, dtype=np.uint8)
    bchild_c = np.ascontiguousarray(bchild, dtype=np.int32)
    cdef const int32_t[:, ::1] bc = bchild_c
    cdef Py_ssize_t size = bt.shape[0]
    cdef Py_ssize_t n = (size - 2) // 3
    cdef Py_ssize_t length = 2 * n + 2
    wsteps_arr = np.empty(length, dtype=np.int8)
    leaves_arr = np.empty(length, dtype=np.int64)
    cdef int8_t[::1] wsteps = wsteps_arr
    cdef int64_t[::1] leaves = leaves_arr
    stack_arr = np.empty(size + 1, dtype=np.int32)
    cdef int32_t[::1] stack = stack_arr
    cdef Py_ssize_t sp = 0, i = 0
    cdef int32_t u
    cdef uint8_t t
    stack[sp] = bc[<Py_ssize_t> root, 0]
    sp += 1
    while sp > 0:
        sp -= 1
        u = stack[sp]
        t = bt[u]
        if t == C_INNER:
            stack[sp] = bc[u, 2]
            stack[sp + 1] = bc[u, 1]
            stack[sp + 2] = bc[u, 0]
            sp += 3
        elif t == C_ARROW:
            wsteps[i] = 1
            leaves[i] = u
            i += 1
        else:
            wsteps[i] = -1
            leaves[i] = u
            i += 1
    wsteps[i] = -1
    leaves[i] = <int64_t> root
    return wsteps_arr, leaves_arr


def reroot_blossom(btype, bparent, bchild, root, new_root):
    btype2_arr = np.asarray(btype).copy()
    bparent2_arr = np.asarray(bparent).copy()
    bchild2_arr = np.asarray(bchild).copy()
    if new_root == root:
        return btype2_arr, bparent2_arr, bchild2_arr
    cdef const int32_t[::1] bparent_v = np.ascontiguousarray(bparent, dtype=np.int32)
    bchild_c = np.ascontiguousarray(bchild, dtype=np.int32)
    cdef const int32_t[:, ::1] bchild_v = bchild_c
    cdef uint8_t[::1] btype2 = btype2_arr
    cdef int32_t[::1] bparent2 = bparent2_arr
    cdef int32_t[:, ::1] bchild2 = bchild2_arr

    btype2[<Py_ssize_t> root] = C_FLAG
    btype2[<Py_ssize_t> new_root] = C_SPECIAL

    cdef Py_ssize_t size = btype2_arr.shape[0]
    path_arr = np.empty(size, dtype=np.int32)
    cdef int32_t[::1] path = path_arr
    cdef Py_ssize_t plen = 0
    cdef int32_t u = <int32_t> new_root
    path[plen] = u
    plen += 1
    while u != <int32_t> root:
        u = bparent_v[u]
        path[plen] = u
        plen += 1

    bparent2[<Py_ssize_t> new_root] = -1
    bchild2[<Py_ssize_t> new_root, 0] = path[1]
    bchild2[<Py_ssize_t> new_root, 1] = -1
    bchild2[<Py_ssize_t> new_root, 2] = -1

    cdef int32_t neigh[4]
    cdef int32_t rotated[3]
    cdef Py_ssize_t i, j, nn, pos, r
    cdef int32_t prev, c
    for i in range(1, plen):
        u = path[i]
        prev = path[i - 1]
        nn = 0
        if bparent_v[u] >= 0:
            neigh[nn] = bparent_v[u]
            nn += 1
        for j in range(3):
            c = bchild_v[u, j]
            if c >= 0:
                neigh[nn] = c
                nn += 1
        pos = 0
        for j in range(nn):
            if neigh[j] == prev:
                pos = j
                break
        r = 0
        for j in range(pos + 1, nn):
            rotated[r] = neigh[j]
            r += 1
        for j in range(pos):
            rotated[r] = neigh[j]
            r += 1
        bparent2[u] = prev
        for j in range(3):
            if j < r:
                c = rotated[j]
                bchild2[u, j] = c
                bparent2[c] = u
            else:
                bchild2[u, j] = -1
    return btype2_arr, bparent2_arr, bchild2_arr


def embedded_from_blossom(btype, bchild, root):
    cdef const uint8_t[::1] bt = np.ascontiguousarray(btype, dtype=np.uint8)
    bchild_c = np.ascontiguousarray(bchild, dtype=np.int32)
    cdef const int32_t[:, ::1] bc = bchild_c
    cdef Py_ssize_t size = bt.shape[0]
    cdef Py_ssize_t n = (size - 2) // 3
    steps_arr = np.empty(2 * n, dtype=np.int8)
    inc_arr = np.zeros(n + 1, dtype=np.int8)
    cdef int8_t[::1] steps = steps_arr
    cdef int8_t[::1] inc = inc_arr
    stack_arr = np.empty(n + 1, dtype=np.int32)
    cdef int32_t[::1] stack = stack_arr
    cdef Py_ssize_t sp = 0, t = 0
    cdef int64_t v = 1
    cdef int32_t cur, c0, c1, c2, r1, rp
    cdef int8_t k
    cur = bc[<Py_ssize_t> root, 0]
    while True:
        if bt[cur] == C_INNER:
            c0 = bc[cur, 0]
            c1 = bc[cur, 1]
            c2 = bc[cur, 2]
            if bt[c0] == C_ARROW:
                k = 1; r1 = c1; rp = c2
            elif bt[c1] == C_ARROW:
                k = 0; r1 = c2; rp = c0
            else:
                k = -1; r1 = c1; rp = c0
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
    return steps_arr, inc_arr


def csr_undirected(src, dst, nv):
    """CSR adjacency of an undirected edge list, by counting sort."""
    cdef const int64_t[::1] a = np.ascontiguousarray(src, dtype=np.int64)
    cdef const int64_t[::1] b = np.ascontiguousarray(dst, dtype=np.int64)
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t vcount = <Py_ssize_t> nv
    indptr_arr = np.zeros(vcount + 1, dtype=np.int64)
    cdef int64_t[::1] indptr = indptr_arr
    cdef Py_ssize_t i
    for i in range(m):
        indptr[a[i] + 1] += 1
        indptr[b[i] + 1] += 1
    for i in range(vcount):
        indptr[i + 1] += indptr[i]
    indices_arr = np.empty(2 * m, dtype=np.int64)
    cdef int64_t[::1] indices = indices_arr
    fill_arr = indptr_arr[:-1].copy()
    cdef int64_t[::1] fill = fill_arr
    for i in range(m):
        indices[fill[a[i]]] = b[i]
        fill[a[i]] += 1
        indices[fill[b[i]]] = a[i]
        fill[b[i]] += 1
    return indptr_arr, indices_arr


def batch_label_extrema(steps_batch, inc_batch, root_label):
    steps_c = np.ascontiguousarray(steps_batch, dtype=np.int8)
    inc_c = np.ascontiguousarray(inc_batch, dtype=np.int8)
    cdef const int8_t[:, ::1] s = steps_c
    cdef const int8_t[:, ::1] k = inc_c
    cdef Py_ssize_t b = s.shape[0]
    cdef Py_ssize_t two_n = s.shape[1]
    cdef Py_ssize_t n = two_n // 2
    lo_arr = np.empty(b, dtype=np.int64)
    hi_arr = np.empty(b, dtype=np.int64)
    cdef int64_t[::1] lo_v = lo_arr
    cdef int64_t[::1] hi_v = hi_arr
    stack_arr = np.empty(n + 1, dtype=np.int8)
    cdef int8_t[::1] stack = stack_arr
    cdef Py_ssize_t i, t, sp, e
    cdef int64_t cur, lo, hi
    cdef int8_t kk
    for i in range(b):
        sp = 0
        e = 1
        cur = <int64_t> root_label
        lo = cur
        hi = cur
        for t in range(two_n):
            if s[i, t] > 0:
                kk = k[i, e]
                e += 1
                stack[sp] = kk
                sp += 1
                cur += kk
                if cur < lo:
                    lo = cur
                elif cur > hi:
                    hi = cur
            else:
                sp -= 1
                cur -= stack[sp]
        lo_v[i] = lo
        hi_v[i] = hi
    return lo_arr, hi_arr

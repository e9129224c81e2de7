"""Cross-checks: the compiled kernels and the pure-Python mirrors must be
bit-identical on the same inputs."""

import numpy as np
import pytest

from quadmaps import _kernels_py as pure

compiled = pytest.importorskip(
    "quadmaps._kernels", reason="compiled extension not built"
)


def _random_embedded(rng, n):
    from quadmaps.trees import sample_dyck_steps

    steps = sample_dyck_steps(n, rng)
    inc = np.zeros(n + 1, dtype=np.int8)
    if n:
        inc[1:] = rng.integers(-1, 2, size=n, dtype=np.int8)
    return steps, inc


@pytest.fixture(params=range(5))
def case(request):
    rng = np.random.default_rng(1234 + request.param)
    n = int(rng.integers(1, 300))
    return rng, n, *_random_embedded(rng, n)


def test_tree_from_steps(case):
    _, _, steps, _ = case
    p1, c1 = pure.tree_from_steps(steps)
    p2, c2 = compiled.tree_from_steps(steps)
    assert np.array_equal(p1, p2) and np.array_equal(c1, c2)


def test_labels_and_extrema(case):
    _, n, steps, inc = case
    parent, _ = pure.tree_from_steps(steps)
    l1 = pure.labels_from_parent(parent, inc, 1)
    l2 = compiled.labels_from_parent(parent, inc, 1)
    assert np.array_equal(l1, l2)
    assert pure.label_extrema(steps, inc, 1) == compiled.label_extrema(steps, inc, 1)


def test_kappa_from_contour(case):
    rng, n, steps, inc = case
    parent, contour = pure.tree_from_steps(steps)
    labels = pure.labels_from_parent(parent, inc, 0)
    v = (labels[contour][1:] - labels[contour][:-1]).astype(np.int8)
    r1 = pure.kappa_from_contour(steps, v)
    r2 = compiled.kappa_from_contour(steps, v)
    assert r1[:3] == r2[:3]
    assert np.array_equal(r1[3], r2[3])
    # corrupted pair gives the same offending report
    v2 = v.copy()
    j = int(rng.integers(len(v2)))
    v2[j] = (v2[j] + 2) % 3 - 1
    assert pure.kappa_from_contour(steps, v2)[:3] == compiled.kappa_from_contour(
        steps, v2
    )[:3]


def test_quad_successors_and_bfs(case):
    rng, n, steps, inc = case
    inc2 = np.abs(inc)  # force well-labelled
    parent, contour = pure.tree_from_steps(steps)
    labels = pure.labels_from_parent(parent, inc2, 1)
    corner_labels = labels[contour[: 2 * n]]
    s1 = pure.quad_successors(corner_labels)
    s2 = compiled.quad_successors(corner_labels)
    assert np.array_equal(s1, s2)

    cv = contour[: 2 * n]
    dst = np.where(s1 < 0, n + 1, cv[np.where(s1 < 0, 0, s1)])
    src2 = np.concatenate((cv, dst))
    dst2 = np.concatenate((dst, cv))
    order = np.argsort(src2, kind="stable")
    indptr = np.zeros(n + 3, dtype=np.int64)
    np.cumsum(np.bincount(src2, minlength=n + 2), out=indptr[1:])
    d1 = pure.bfs_csr(indptr, dst2[order], n + 1)
    d2 = compiled.bfs_csr(indptr, dst2[order], n + 1)
    assert np.array_equal(d1, d2)


def test_blossom_pipeline(case):
    rng, n, steps, inc = case
    a1 = pure.blossom_from_embedded(steps, inc)
    a2 = compiled.blossom_from_embedded(steps, inc)
    for x, y in zip(a1, a2):
        assert np.array_equal(x, y)
    bt, bp, bc = a1
    w1, l1 = pure.blossom_walk(bt, bc, 0)
    w2, l2 = compiled.blossom_walk(bt, bc, 0)
    assert np.array_equal(w1, w2) and np.array_equal(l1, l2)
    flags = np.flatnonzero(bt == pure.BT_FLAG)
    f = int(flags[rng.integers(len(flags))])
    r1 = pure.reroot_blossom(bt, bp, bc, 0, f)
    r2 = compiled.reroot_blossom(bt, bp, bc, 0, f)
    for x, y in zip(r1, r2):
        assert np.array_equal(x, y)
    e1 = pure.embedded_from_blossom(r1[0], r1[2], f)
    e2 = compiled.embedded_from_blossom(r2[0], r2[2], f)
    assert np.array_equal(e1[0], e2[0]) and np.array_equal(e1[1], e2[1])


def test_perm_orbits_and_walk(case):
    rng, n, _, _ = case
    m = 2 * n
    perm = rng.permutation(m).astype(np.int64)
    o1 = pure.perm_orbits(perm)
    o2 = compiled.perm_orbits(perm)
    assert np.array_equal(o1[0], o2[0])
    assert np.array_equal(o1[1], o2[1])
    assert o1[2] == o2[2]
    assert np.array_equal(o1[3], o2[3])
    start = int(rng.integers(m))
    assert np.array_equal(
        pure.walk_cycle(perm, start, 17), compiled.walk_cycle(perm, start, 17)
    )


def test_batch_extrema(case):
    rng, n, _, _ = case
    b = 6
    steps = np.stack([_random_embedded(rng, n)[0] for _ in range(b)])
    inc = np.zeros((b, n + 1), dtype=np.int8)
    inc[:, 1:] = rng.integers(-1, 2, size=(b, n), dtype=np.int8)
    lo1, hi1 = pure.batch_label_extrema(steps, inc, 1)
    lo2, hi2 = compiled.batch_label_extrema(steps, inc, 1)
    assert np.array_equal(lo1, lo2) and np.array_equal(hi1, hi2)


def test_backend_name_reports_compiled():
    import quadmaps._backend as backend

    assert backend.backend_name() in ("compiled", "pure")

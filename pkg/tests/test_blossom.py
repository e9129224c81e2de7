from collections import Counter

import numpy as np
import pytest

from quadmaps.blossom import (
    BlossomError,
    BlossomTree,
    blossom_to_embedded,
    conjugacy_class,
    embedded_to_blossom,
    labelling_process,
    sample_well_labelled_coupled,
)
from quadmaps.enumeration import enumerate_embedded, exact_counts
from quadmaps.labelled import (
    is_well_labelled,
    label_distribution,
    sample_embedded,
)
from quadmaps.trees import PlaneTree
from quadmaps.walks import cyclic_shift, is_positive_member, walk_class


def _single_vertex():
    return next(iter(enumerate_embedded(0)))


class TestLabellingProcess:
    def test_smallest(self):
        b = embedded_to_blossom(_single_vertex())
        assert b.n == 0
        fl = labelling_process(b)
        assert fl.labels == (1,)
        assert walk_class(fl.walk, 2) == 0  # the unique walk of B(0, 2)
        assert fl.walk.to_string() == "DD"

    def test_three_blossoms_n1(self):
        outs = {embedded_to_blossom(u).serialize() for u in enumerate_embedded(1)}
        assert len(outs) == 3
        # the arrow takes each of the three positions around the inner node
        assert outs == {"S(AFF)", "S(FAF)", "S(FFA)"}

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_walk_is_in_b_n2(self, n):
        for u in enumerate_embedded(n):
            fl = labelling_process(embedded_to_blossom(u))
            assert walk_class(fl.walk, 2) == n

    def test_label_multiset_preserved(self):
        rng = np.random.default_rng(77)
        for n in (1, 5, 40, 200):
            u = sample_embedded(n, rng)
            fl = labelling_process(embedded_to_blossom(u))
            assert sorted(fl.labels) == sorted(u.labels().tolist())

    def test_validation_error(self):
        b = embedded_to_blossom(_single_vertex())
        broken = BlossomTree(
            b.btype.copy(), b.bparent.copy(), b.bchild.copy(), root=1
        )
        with pytest.raises(BlossomError):
            labelling_process(broken)


class TestBijection:
    def test_single_vertex_base(self):
        b = embedded_to_blossom(_single_vertex())
        assert b.serialize() == "SF"

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_image_distinct_and_complete(self, n):
        outs = {embedded_to_blossom(u).serialize() for u in enumerate_embedded(n)}
        assert len(outs) == exact_counts(n).embedded

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_round_trip(self, n):
        for u in enumerate_embedded(n):
            assert blossom_to_embedded(embedded_to_blossom(u)) == u

    def test_round_trip_random_large(self):
        rng = np.random.default_rng(13)
        for n in (50, 500):
            u = sample_embedded(n, rng)
            assert blossom_to_embedded(embedded_to_blossom(u)) == u

    def test_well_labelled_iff_positive_walk(self):
        for u in enumerate_embedded(3):
            fl = labelling_process(embedded_to_blossom(u))
            assert is_positive_member(fl.walk, 2) == is_well_labelled(u)


class TestSerialization:
    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_round_trip(self, n):
        for u in enumerate_embedded(n):
            b = embedded_to_blossom(u)
            back = BlossomTree.deserialize(b.serialize())
            assert back == b
            assert blossom_to_embedded(back) == u

    def test_bad_words(self):
        for bad in ("F", "S", "S(AF)", "S(AFFF)", "S(AAF)", "SFF"):
            with pytest.raises(BlossomError):
                BlossomTree.deserialize(bad)


class TestConjugacy:
    def test_two_flag_class(self):
        cls = conjugacy_class(embedded_to_blossom(_single_vertex()))
        assert 1 <= len(cls) <= 2

    def test_reroot_is_walk_shift(self):
        for n in (1, 2, 3):
            for u in enumerate_embedded(n):
                b = embedded_to_blossom(u)
                fl = labelling_process(b)
                length = len(fl.walk)
                for p, leaf in enumerate(fl.step_leaves, start=1):
                    if fl.walk.increments[p - 1] != -1:
                        continue
                    fl2 = labelling_process(b.reroot(int(leaf)))
                    assert fl2.walk == cyclic_shift(fl.walk, p % length)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_theorem_identities(self, n):
        blossoms = {}
        for u in enumerate_embedded(n):
            b = embedded_to_blossom(u)
            blossoms[b.serialize()] = (b, is_well_labelled(u))
        done = set()
        covered = 0
        for key, (b, _) in blossoms.items():
            if key in done:
                continue
            cls = conjugacy_class(b)
            keys = {c.serialize() for c in cls}
            assert len(keys) == len(cls)
            assert keys <= set(blossoms)
            assert not (keys & done)  # classes partition the set
            wl = sum(1 for c in cls if blossoms[c.serialize()][1])
            assert len(cls) <= n + 2
            assert 2 * len(cls) == (n + 2) * wl
            done |= keys
            covered += len(keys)
        assert covered == len(blossoms)


class TestCoupledSampler:
    def test_marginal_w_uniform_n2(self):
        rng = np.random.default_rng(20)
        counts = Counter()
        draws = 45_000
        for _ in range(draws):
            w, _ = sample_well_labelled_coupled(2, rng)
            counts[w.serialize()] += 1
        assert len(counts) == 9
        exp = draws / 9
        chi2 = sum((c - exp) ** 2 / exp for c in counts.values())
        assert chi2 < 26.0  # 8 dof

    def test_marginal_u_uniform_n2(self):
        rng = np.random.default_rng(21)
        counts = Counter()
        draws = 45_000
        for _ in range(draws):
            _, u = sample_well_labelled_coupled(2, rng)
            counts[u.serialize()] += 1
        assert len(counts) == 18
        exp = draws / 18
        chi2 = sum((c - exp) ** 2 / exp for c in counts.values())
        assert chi2 < 45.0  # 17 dof

    def test_same_class(self):
        rng = np.random.default_rng(22)
        for _ in range(50):
            w, u = sample_well_labelled_coupled(4, rng)
            cls = {c.serialize() for c in conjugacy_class(embedded_to_blossom(u))}
            assert embedded_to_blossom(w).serialize() in cls

    def test_coupling_bounds(self):
        from quadmaps.experiments import coupling_violations

        rng = np.random.default_rng(23)
        for n in (1, 2, 10, 200):
            for _ in range(40):
                w, u = sample_well_labelled_coupled(n, rng)
                assert is_well_labelled(w)
                assert not coupling_violations(w.labels(), u.labels())
                mu = int(w.labels().max())
                ul = u.labels()
                assert abs(mu - (int(ul.max()) - int(ul.min()))) <= 3

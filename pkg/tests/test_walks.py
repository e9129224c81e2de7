import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadmaps.walks import (
    CycleLemmaReport,
    LatticeWalk,
    WalkError,
    canonical_rotation,
    conjugacy_classes,
    count_ballot,
    cyclic_shift,
    enumerate_walks,
    is_positive_member,
    low_records,
    partial_sums,
    records,
    verify_cycle_lemma,
    walk_heights,
)


def W(s):
    return LatticeWalk.from_string(s)


class TestPartialSums:
    def test_empty(self):
        assert partial_sums(W("")) == [0]

    def test_uddd(self):
        assert partial_sums("UDDD") == [0, 1, 0, -1, -2]

    @given(st.lists(st.sampled_from([-1, 1]), max_size=40))
    def test_reversal_negation(self, inc):
        w = LatticeWalk(tuple(inc))
        rev = LatticeWalk(tuple(-s for s in reversed(inc)))
        total = sum(inc)
        forward = partial_sums(w)
        backward = partial_sums(rev)
        assert backward == [v - total for v in reversed(forward)]


class TestCountBallot:
    def test_values(self):
        assert count_ballot(4, 0) == 2
        assert count_ballot(2, 2) == 1
        assert count_ballot(3, 1) == 2

    def test_parity_error(self):
        with pytest.raises(WalkError):
            count_ballot(3, 0)

    @pytest.mark.parametrize("n,a", [(6, 0), (7, 1), (8, 2), (9, 3), (10, 4)])
    def test_against_enumeration(self, n, a):
        count = 0
        for bits in range(1 << n):
            acc = 0
            ok = True
            for i in range(n):
                acc += 1 if (bits >> i) & 1 else -1
                if acc < 0:
                    ok = False
                    break
            if ok and acc == a:
                count += 1
        assert count_ballot(n, a) == count


class TestCyclicShift:
    def test_identity(self):
        assert cyclic_shift("UDDD", 0) == W("UDDD")

    def test_rotation(self):
        assert cyclic_shift("UDDD", 1) == W("DDDU")

    def test_inverse_composition(self):
        w = W("UDDD")
        assert cyclic_shift(cyclic_shift(w, 2), 2) == w

    @given(st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=30),
           st.integers(min_value=0, max_value=29))
    def test_shift_then_complement(self, inc, s):
        w = LatticeWalk(tuple(inc))
        s = s % len(inc)
        assert cyclic_shift(cyclic_shift(w, s), (len(inc) - s) % len(inc)) == w


class TestLowRecords:
    def test_uddd(self):
        assert low_records("UDDD", 2) == [3, 4]

    def test_ddud(self):
        assert low_records("DDUD", 2) == [1, 2]

    def test_dyck_then_down(self):
        # a Dyck path followed by D has its unique low record at the end
        for dyck in ("", "UD", "UUDD", "UDUD", "UUDUDD"):
            w = W(dyck + "D")
            assert low_records(w, 1) == [len(w)]

    def test_membership_enforced(self):
        with pytest.raises(WalkError):
            low_records("UDUD", 1)  # ends down but counts say k=0
        with pytest.raises(WalkError):
            low_records("UDDU", 2)  # does not end with a down step

    def test_position_zero_never_a_record(self):
        assert records(W("UDDD")) == [3, 4]
        assert records(W("DDUD")) == [1, 2]


class TestWalkHeights:
    def test_uddd(self):
        h = walk_heights("UDDD", 2)
        assert list(h.dyck_height) == [0, 1, 0, 0, 0]
        assert list(h.height_to_min) == [2, 3, 2, 1, 0]
        assert [h.dyck_count(i) for i in range(3)] == [3, 3, 3]
        assert [h.min_count(i) for i in range(3)] == [1, 2, 3]
        assert h.low_records == (3, 4)

    def test_single_factor(self):
        # one low record at the end: the factor height is the Dyck path
        # itself and the height-to-min sits exactly one above it inside
        for dyck in ("UD", "UUDD", "UDUDUD"):
            w = W(dyck + "D")
            h = walk_heights(w, 1)
            assert list(h.dyck_height)[:-1] == partial_sums(w)[:-1]
            assert all(
                t == b + 1 for b, t in zip(h.dyck_height[:-1], h.height_to_min[:-1])
            )
            assert h.height_to_min[-1] == h.dyck_height[-1] == 0

    @pytest.mark.parametrize("n,k", [(2, 1), (2, 2), (3, 1), (3, 2), (2, 3)])
    def test_bounds_between_bar_and_tilde(self, n, k):
        for w in enumerate_walks(n, k):
            h = walk_heights(w, k)
            for bar, tilde in zip(h.dyck_height, h.height_to_min):
                assert bar <= tilde <= bar + k
            top = max(max(h.dyck_height), max(h.height_to_min)) + k + 1
            for i in range(top):
                assert h.min_count(i) <= h.dyck_count(i) <= h.min_count(i + k)
            assert h.dyck_count(top) == n + k


class TestPositivity:
    def test_values(self):
        assert is_positive_member("UDDD", 2)
        assert not is_positive_member("DDUD", 2)

    @pytest.mark.parametrize("n", range(0, 6))
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_lowest_record_characterization(self, n, k):
        for w in enumerate_walks(n, k):
            expected = low_records(w, k)[-1] == 2 * n + k
            assert is_positive_member(w, k) == expected


class TestRecordTransport:
    @pytest.mark.parametrize("n,k", [(n, k) for n in range(0, 6) for k in (1, 2, 3)
                                     if 2 * n + k <= 12])
    def test_shifts_transport_low_records(self, n, k):
        length = 2 * n + k
        for w in enumerate_walks(n, k):
            recs = set(low_records(w, k))
            for s in range(length):
                shifted = cyclic_shift(w, s)
                if shifted.increments[-1] != -1:
                    continue
                expect = {(p - s - 1) % length + 1 for p in recs}
                assert set(low_records(shifted, k)) == expect


class TestCycleLemma:
    def test_n1_k2(self):
        rep = verify_cycle_lemma(1, 2)
        assert rep.class_count == 1
        assert rep.class_sizes == (3,)
        assert rep.positive_walks == 2

    def test_degenerate(self):
        rep = verify_cycle_lemma(0, 1)
        assert rep.class_sizes == (1,)
        assert rep.positive_walks == 1

    @pytest.mark.parametrize("n", range(0, 5))
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_grid(self, n, k):
        rep = verify_cycle_lemma(n, k)
        assert isinstance(rep, CycleLemmaReport)
        assert sum(rep.class_sizes) == rep.total_walks

    def test_size_guard(self):
        with pytest.raises(WalkError):
            verify_cycle_lemma(12, 3)


class TestDyckHeightInvariance:
    @pytest.mark.parametrize("n,k", [(n, k) for n in range(0, 6) for k in (1, 2, 3)
                                     if 2 * n + k <= 12])
    def test_ell_constant_on_classes(self, n, k):
        for members in conjugacy_classes(n, k).values():
            base = walk_heights(members[0], k)
            top = 2 * n + k + 1
            ells = [base.dyck_count(i) for i in range(top)]
            for other in members[1:]:
                h = walk_heights(other, k)
                assert [h.dyck_count(i) for i in range(top)] == ells
                for i in range(top):
                    assert base.min_count(i) <= h.min_count(i + k)


class TestSerialization:
    def test_round_trip_binary(self):
        w = W("UUDDUD")
        assert LatticeWalk.from_string(w.to_string()) == w

    def test_ternary(self):
        w = LatticeWalk((1, 0, -1, 0))
        assert w.to_string() == "+0-0"
        assert LatticeWalk.from_string("+0-0") == w

    def test_bad_character(self):
        with pytest.raises(WalkError):
            LatticeWalk.from_string("UDX")

    def test_canonical_rotation_is_class_invariant(self):
        for w in enumerate_walks(3, 2):
            c = canonical_rotation(w, 2)
            length = len(w)
            for s in range(length):
                shifted = cyclic_shift(w, s)
                if shifted.increments[-1] == -1:
                    assert canonical_rotation(shifted, 2) == c

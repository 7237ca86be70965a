from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rumkit import (
    ContourPair,
    LabelError,
    Menu,
    Model,
    Preference,
    RumkitError,
    Universe,
    UniverseMismatchError,
    all_preferences,
    check_minimal_mutual_agreement,
    contour_pair_keys,
    in_contour_class,
    preference_from_labels,
    upper_contour_pairs,
)

U2 = Universe(("a", "b"))
U3 = Universe(("a", "b", "c"))
U4 = Universe(("a", "b", "c", "d"))


def brute_in_class(pref: Preference, x: int, menu_mask: int) -> bool:
    """Definition check via pairwise comparisons only (independent oracle)."""
    if not menu_mask >> x & 1:
        return False
    n = pref.universe.n
    for y in range(n):
        if y == x:
            continue
        if menu_mask >> y & 1:
            if not pref.prefers(x, y):
                return False
        else:
            if not pref.prefers(y, x):
                return False
    return True


def pair(universe: Universe, x_label: str, menu_labels: str) -> ContourPair:
    return ContourPair(
        universe.index(x_label), universe.menu_of_labels(tuple(menu_labels))
    )


class TestPreferenceFromLabels:
    def test_direct_construction(self):
        p = preference_from_labels(U2, ["a", "b"])
        assert p.ranking == (0, 1)

    def test_four_alternatives(self):
        p = preference_from_labels(U4, "abcd")
        assert p.to_labels() == ("a", "b", "c", "d")

    def test_duplicate_label(self):
        with pytest.raises(LabelError, match="duplicate"):
            preference_from_labels(U2, ["a", "a"])

    def test_unknown_label(self):
        with pytest.raises(LabelError, match="unknown"):
            preference_from_labels(U2, ["a", "z"])

    def test_wrong_length(self):
        with pytest.raises(LabelError, match="2"):
            preference_from_labels(U2, ["a"])


class TestContourClass:
    def test_top_element_full_menu(self):
        p = preference_from_labels(U3, "abc")
        assert in_contour_class(p, pair(U3, "a", "abc"))

    def test_forced_by_definition(self):
        p = preference_from_labels(U3, "abc")
        assert in_contour_class(p, pair(U3, "b", "bc"))
        assert not in_contour_class(p, pair(U3, "b", "abc"))

    def test_badc_contour_positions(self):
        # expected values computed with the pairwise-definition oracle:
        # under b>a>d>c the weak lower contour set of d is {c,d}, of c is {c}
        p = preference_from_labels(U4, "badc")
        d, c = U4.index("d"), U4.index("c")
        cd = U4.menu_of_labels("cd").mask
        assert brute_in_class(p, d, cd) is True
        assert in_contour_class(p, pair(U4, "d", "cd"))
        assert brute_in_class(p, c, cd) is False
        assert not in_contour_class(p, pair(U4, "c", "cd"))
        assert not in_contour_class(p, pair(U4, "d", "d"))
        assert in_contour_class(p, pair(U4, "c", "c"))

    def test_universe_mismatch(self):
        p = preference_from_labels(U3, "abc")
        with pytest.raises(UniverseMismatchError):
            in_contour_class(p, pair(U4, "a", "abcd"))

    def test_agrees_with_bruteforce_everywhere(self):
        for p in all_preferences(U4):
            for x, mask in contour_pair_keys(4):
                got = in_contour_class(p, ContourPair(x, Menu(U4, mask)))
                assert got == brute_in_class(p, x, mask)


class TestUpperContourPairs:
    def test_two_alternatives(self):
        p = preference_from_labels(U2, "ab")
        keys = [(c.x, c.mask) for c in upper_contour_pairs(p)]
        assert keys == [(0, 0b11), (1, 0b10)]

    def test_four_alternatives_first_pair(self):
        p = preference_from_labels(U4, "abcd")
        pairs = upper_contour_pairs(p)
        assert len(pairs) == 4
        assert pairs[0].x == 0 and pairs[0].mask == U4.full_mask

    def test_exactly_the_pairs_in_class(self):
        for p in all_preferences(U3):
            member_keys = {
                (x, mask)
                for x, mask in contour_pair_keys(3)
                if in_contour_class(p, ContourPair(x, Menu(U3, mask)))
            }
            assert member_keys == {(c.x, c.mask) for c in upper_contour_pairs(p)}
            assert len(member_keys) == 3

    def test_one_best_per_contour_menu(self):
        for p in all_preferences(U4):
            seen: dict[int, int] = {}
            for x, mask in contour_pair_keys(4):
                if in_contour_class(p, ContourPair(x, Menu(U4, mask))):
                    assert seen.setdefault(mask, x) == x


class TestReverse:
    def test_simple(self):
        p = preference_from_labels(U3, "abc")
        assert p.reverse().to_labels() == ("c", "b", "a")

    @given(st.permutations(list(range(5))))
    def test_involution(self, perm):
        u = Universe.of_size(5)
        p = Preference(u, tuple(perm))
        assert p.reverse().reverse() == p

    def test_reverse_of_identity_order(self):
        u = Universe.of_size(4)
        order = Preference(u, (0, 1, 2, 3))
        assert order.reverse().ranking == (3, 2, 1, 0)

    @given(st.permutations(list(range(4))))
    def test_reverse_flips_every_comparison(self, perm):
        u = Universe.of_size(4)
        p = Preference(u, tuple(perm))
        r = p.reverse()
        for x in range(4):
            for y in range(4):
                if x != y:
                    assert p.prefers(x, y) == r.prefers(y, x)


class TestMinimalMutualAgreement:
    def test_share_worst(self):
        m = Model.of(
            U3,
            [preference_from_labels(U3, "abc"), preference_from_labels(U3, "bac")],
        )
        assert check_minimal_mutual_agreement(m)

    def test_mutually_reversed(self):
        m = Model.of(
            U2, [preference_from_labels(U2, "ab"), preference_from_labels(U2, "ba")]
        )
        assert not check_minimal_mutual_agreement(m)

    def test_halves_of_all_orders(self):
        # pick one of each reversal pair: 2^3 models of size 3 = 3!/2, all pass
        prefs = list(all_preferences(U3))
        pairs = []
        used = set()
        for p in prefs:
            if p.ranking in used:
                continue
            used.add(p.ranking)
            used.add(p.reverse().ranking)
            pairs.append((p, p.reverse()))
        assert len(pairs) == 3
        for bits in range(8):
            chosen = [pr[(bits >> i) & 1] for i, pr in enumerate(pairs)]
            m = Model.of(U3, chosen)
            assert len(m) == 3
            assert check_minimal_mutual_agreement(m)
            spoiled = Model.of(U3, chosen + [chosen[0].reverse()])
            assert not check_minimal_mutual_agreement(spoiled)

    def test_needs_two_alternatives(self):
        u1 = Universe.of_size(1)
        with pytest.raises(RumkitError):
            check_minimal_mutual_agreement(Model.of(u1, [Preference(u1, (0,))]))


class TestModel:
    def test_equality_is_set_equality(self):
        a = preference_from_labels(U3, "abc")
        b = preference_from_labels(U3, "cba")
        assert Model.of(U3, [a, b]) == Model.of(U3, [b, a])

    def test_duplicates_rejected(self):
        a = preference_from_labels(U3, "abc")
        with pytest.raises(RumkitError, match="duplicate"):
            Model.of(U3, [a, Preference(U3, (0, 1, 2))])

    def test_empty_rejected(self):
        with pytest.raises(RumkitError):
            Model.of(U3, [])


class TestCoordinateOrder:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_count(self, n):
        assert len(contour_pair_keys(n)) == n * 2 ** (n - 1)

    def test_order_levels_then_mask_then_element(self):
        keys = contour_pair_keys(3)
        sizes = [mask.bit_count() for _, mask in keys]
        assert sizes == sorted(sizes, reverse=True)
        # within one level, mask ascending and x ascending within a mask
        level2 = [(x, mask) for x, mask in keys if mask.bit_count() == 2]
        assert level2 == sorted(level2, key=lambda key: (key[1], key[0]))

    def test_distinct_and_complete(self):
        keys = contour_pair_keys(4)
        assert len(set(keys)) == len(keys)
        assert all(mask >> x & 1 for x, mask in keys)


class TestCaps:
    def test_lattice_cap_blocks_large_diagrams(self):
        from rumkit import CapExceededError, build_diagram

        with pytest.raises(CapExceededError):
            build_diagram(Universe.of_size(21))

    def test_vector_cap_blocks_large_vectors(self):
        from rumkit import CapExceededError, mobius_vector

        u = Universe.of_size(13)
        with pytest.raises(CapExceededError):
            mobius_vector(Preference(u, tuple(range(13))))

    def test_env_var_overrides_caps(self, monkeypatch):
        from rumkit import CapExceededError, mobius_vector
        from rumkit.core import CAP_ENV_VAR, lattice_cap, vector_cap

        monkeypatch.setenv(CAP_ENV_VAR, "13")
        assert lattice_cap() == vector_cap() == 13
        u = Universe.of_size(13)
        assert sum(mobius_vector(Preference(u, tuple(range(13))))) == 13
        monkeypatch.setenv(CAP_ENV_VAR, "3")
        with pytest.raises(CapExceededError):
            mobius_vector(Preference(Universe.of_size(4), (0, 1, 2, 3)))


class TestUniverse:
    def test_labels_must_be_distinct(self):
        with pytest.raises(LabelError):
            Universe(("a", "a"))

    def test_default_labels(self):
        assert Universe.of_size(3).labels == ("a", "b", "c")
        assert Universe.of_size(27).labels[26] == "x27"

    def test_menu_of_labels(self):
        menu = U3.menu_of_labels(["a", "c"])
        assert menu.mask == 0b101
        assert menu.labels() == ("a", "c")

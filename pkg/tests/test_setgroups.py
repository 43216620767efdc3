import random

import pytest
from hypothesis import given, strategies as st

from cubeboxes.boxcore import FormatError
from cubeboxes.setgroups import (SetFamily, check_group, elements_of, generate_Gv, gf2_rank,
                                 is_subspace, parse_sets, preimage_group, serialize_sets,
                                 two_adic_order)


def closed_brute_force(sets) -> bool:
    fs = {frozenset(s) for s in sets}
    return frozenset() in fs and all(a ^ b in fs for a in fs for b in fs)


def fam(*sets, n=None):
    return SetFamily.from_sets(sets, n)


class TestTwoAdic:
    @pytest.mark.parametrize("k,v", [(4, 2), (6, 1), (1, 0), (96, 5), (7, 0)])
    def test_values(self, k, v):
        assert two_adic_order(k) == v

    def test_zero(self):
        with pytest.raises(ValueError):
            two_adic_order(0)

    @given(st.integers(1, 10**6))
    def test_definition(self, k):
        v = two_adic_order(k)
        assert k % 2**v == 0 and k % 2 ** (v + 1) != 0


class TestCheckGroup:
    def test_g1(self):
        r = check_group(fam((), (1, 2), (1, 3), (2, 3)))
        assert r.is_group and r.uniform_k == 2 and r.v == 1 and r.bound == 4
        assert r.size == 4 and r.bound_ok and r.attains_bound
        assert r.half_intersections_ok

    def test_g0(self):
        r = check_group(fam((), (1,)))
        assert r.is_group and r.uniform_k == 1 and r.v == 0 and r.bound == 2 and r.bound_ok

    def test_not_group(self):
        r = check_group(fam((1, 2), (2, 3)))
        assert not r.is_group
        assert r.witness == ("missing-empty",)

    def test_closure_witness_is_first_pair(self):
        r = check_group(fam((), (1, 2), (2, 3)))
        assert not r.is_group
        # ordered pairs scanned in list order: {} ^ x is fine, then {1,2} ^ {2,3}
        assert r.witness == ("not-closed", 0b011, 0b110)

    def test_non_uniform(self):
        r = check_group(fam((), (1,), (2,), (1, 2)))
        assert r.is_group and r.uniform_k is None and r.bound_ok is None
        assert not r.half_intersections_ok

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            fam((1,), (1,))

    @given(st.lists(st.integers(0, 31), max_size=12, unique=True))
    def test_closure_matches_oracle(self, masks):
        f = SetFamily(5, tuple(masks))
        expected = closed_brute_force(elements_of(m) for m in masks)
        assert check_group(f).is_group == expected
        assert is_subspace(masks) == expected


class TestGenerate:
    def test_g0(self):
        assert generate_Gv(0).as_frozensets() == {frozenset(), frozenset({1})}

    def test_g1(self):
        assert generate_Gv(1).as_frozensets() == {
            frozenset(), frozenset({1, 2}), frozenset({1, 3}), frozenset({2, 3})}

    def test_g2(self):
        g = generate_Gv(2)
        assert len(g) == 8 and g.n == 7
        assert {len(s) for s in g.as_frozensets()} == {0, 4}
        # by hand from G_1: A# = A u (A+3), K = {4,5,6,7}, plus K ^ A#
        assert g.as_frozensets() == {frozenset(s) for s in [
            (), (1, 2, 4, 5), (1, 3, 4, 6), (2, 3, 5, 6),
            (4, 5, 6, 7), (1, 2, 6, 7), (1, 3, 5, 7), (2, 3, 4, 7)]}
        r = check_group(g)
        assert r.is_group and r.uniform_k == 4 and r.attains_bound and r.half_intersections_ok

    @pytest.mark.parametrize("v", range(7))
    def test_equality_case(self, v):
        g = generate_Gv(v)
        r = check_group(g)
        assert len(g) == 2 ** (v + 1)
        assert r.is_group and r.uniform_k == 2**v and r.half_intersections_ok
        assert r.bound_ok and r.attains_bound
        assert max(max(s) for s in g.as_frozensets() if s) == 2 ** (v + 1) - 1

    def test_guard(self):
        with pytest.raises(ValueError):
            generate_Gv(21)
        with pytest.raises(ValueError):
            generate_Gv(-1)


class TestPreimage:
    def test_identity(self):
        assert preimage_group(0, 1).as_frozensets() == {frozenset(), frozenset({1})}
        assert preimage_group(2, 1) == generate_Gv(2)

    def test_v1_p3(self):
        g = preimage_group(1, 3)
        assert g.n == 9 == 2 * 6 - 3
        assert g.as_frozensets() == {
            frozenset(), frozenset(range(1, 7)), frozenset({1, 2, 3, 7, 8, 9}),
            frozenset(range(4, 10))}
        r = check_group(g)
        assert r.is_group and r.uniform_k == 6 and r.attains_bound

    @pytest.mark.parametrize("v,p", [(1, 3), (2, 3), (1, 5), (0, 7), (3, 5)])
    def test_sizes_pull_back(self, v, p):
        base = generate_Gv(v)
        g = preimage_group(v, p)
        assert sorted(len(s) for s in g.as_frozensets()) == sorted(
            p * len(s) for s in base.as_frozensets())
        k = 2**v * p
        assert g.n == 2 * k - p
        r = check_group(g)
        assert r.is_group and r.uniform_k == k and r.attains_bound

    @pytest.mark.parametrize("p", [0, 2, -1])
    def test_bad_p(self, p):
        with pytest.raises(ValueError):
            preimage_group(1, p)


class TestGroupConsequences:
    def test_perturbed_families_never_break_the_implication(self):
        rng = random.Random(1)
        for _ in range(300):
            g = list(generate_Gv(rng.randint(1, 4)).sets)
            n = max(g).bit_length()
            op = rng.choice(["flip", "drop", "add"])
            i = rng.randrange(1, len(g))
            if op == "flip":
                g[i] ^= 1 << rng.randrange(n)
            elif op == "drop":
                g.pop(i)
            else:
                g.append(rng.getrandbits(n))
            if len(set(g)) != len(g):
                continue
            r = check_group(SetFamily(n, tuple(g)))
            nonempty = [s for s in g if s]
            if r.is_group and r.uniform_k is not None and len(nonempty) >= 2:
                assert r.uniform_k % 2 == 0 and r.half_intersections_ok and r.bound_ok

    def test_rank(self):
        assert gf2_rank([0b011, 0b101, 0b110]) == 2
        assert gf2_rank([0b001, 0b010, 0b100, 0b111]) == 3
        assert gf2_rank([]) == 0


class TestFormat:
    def test_round_trip(self):
        g = preimage_group(1, 3)
        assert parse_sets(serialize_sets(g)) == g

    def test_g1_text(self):
        assert serialize_sets(generate_Gv(1)) == "{}\n1,2\n1,3\n2,3\n"

    def test_header_keeps_ground_set(self):
        f = SetFamily(6, (0, 0b11))
        text = serialize_sets(f)
        assert text.startswith("# n=6")
        assert parse_sets(text) == f

    @pytest.mark.parametrize("text", ["1,a\n", "0,1\n", "1,1\n1\n"])
    def test_errors(self, text):
        with pytest.raises(FormatError):
            parse_sets(text)

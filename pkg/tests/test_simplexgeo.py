import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from cubeboxes.boxcore import FormatError, VerificationError, verify_family
from cubeboxes.simplexgeo import (Hyperplane, Simplex, det, encode_boxes, facet_hyperplanes,
                                  hyperplane_through, is_nearly_neighbourly, parse_simplices,
                                  serialize_hyperplanes)

TRI_UP = Simplex(((0, 0), (1, 0), (0, 1)))
TRI_DOWN = Simplex(((0, 0), (1, 0), (0, -1)))
FAR = Simplex(((10, 10), (11, 10), (10, 11)))
SEG_A = Simplex(((0,), (1,)))
SEG_B = Simplex(((1,), (2,)))

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def simplices(draw, d=None):
    d = d or draw(st.integers(1, 3))
    verts = draw(st.lists(st.tuples(*[rationals] * d), min_size=d + 1, max_size=d + 1))
    base = verts[0]
    assume(det([[a - b for a, b in zip(v, base)] for v in verts[1:]]) != 0)
    return Simplex(tuple(verts))


class TestHyperplane:
    def test_canonical_form(self):
        h = Hyperplane.canonical([Fraction(-2, 3), Fraction(-4, 3)], Fraction(-2))
        assert h == Hyperplane((1, 2), 3)

    def test_zero_normal(self):
        with pytest.raises(ValueError):
            Hyperplane.canonical([0, 0], 1)

    @given(st.lists(st.integers(-6, 6), min_size=2, max_size=4), st.integers(-6, 6),
           st.fractions(min_value=-7, max_value=7).filter(bool))
    def test_scaling_invariance_and_idempotence(self, normal, offset, scale):
        assume(any(normal))
        h = Hyperplane.canonical(normal, offset)
        assert Hyperplane.canonical([scale * a for a in normal], scale * offset) == h
        assert Hyperplane.canonical(h.normal, h.offset) == h


class TestFacets:
    def test_segment(self):
        assert facet_hyperplanes(SEG_A) == [Hyperplane((1,), 1), Hyperplane((1,), 0)]

    def test_triangle(self):
        hs = facet_hyperplanes(TRI_UP)
        # facet i omits vertex i
        assert hs == [Hyperplane((1, 1), 1), Hyperplane((1, 0), 0), Hyperplane((0, 1), 0)]
        for i, h in enumerate(hs):
            on = [v for v in TRI_UP.vertices if h.evaluate(v) == 0]
            assert len(on) == 2 and TRI_UP.vertices[i] not in on

    def test_degenerate(self):
        with pytest.raises(ValueError, match="degenerate"):
            Simplex(((0, 0), (1, 1), (2, 2)))

    def test_wrong_shape(self):
        with pytest.raises(ValueError):
            Simplex(((0, 0), (1, 0)))

    @given(simplices())
    def test_facet_property(self, s):
        hs = facet_hyperplanes(s)
        assert len(set(hs)) == s.d + 1
        for i, h in enumerate(hs):
            zeros = [j for j, v in enumerate(s.vertices) if h.evaluate(v) == 0]
            assert zeros == [j for j in range(s.d + 1) if j != i]

    def test_through_points_is_orientation_free(self):
        pts = [(Fraction(1), Fraction(2), Fraction(0)), (Fraction(0), Fraction(1), Fraction(1)),
               (Fraction(3), Fraction(0), Fraction(2))]
        assert hyperplane_through(pts) == hyperplane_through(pts[::-1])


class TestNearlyNeighbourly:
    def test_shared_edge(self):
        r = is_nearly_neighbourly([TRI_UP, TRI_DOWN])
        assert r.ok and r.witnesses == {(0, 1): Hyperplane((0, 1), 0)}

    def test_far_apart(self):
        r = is_nearly_neighbourly([TRI_UP, FAR])
        assert not r.ok and r.failing == [(0, 1)]

    def test_single(self):
        r = is_nearly_neighbourly([TRI_UP])
        assert r.ok and not r.witnesses

    def test_same_side_is_not_separated(self):
        # shares the line x=0 and y=0 with TRI_UP, on the same side of both
        other = Simplex(((0, 0), (2, 0), (0, 2)))
        assert not is_nearly_neighbourly([TRI_UP, other]).ok

    def test_mixed_dimensions(self):
        with pytest.raises(ValueError):
            is_nearly_neighbourly([TRI_UP, SEG_A])


class TestEncode:
    def test_shared_edge(self):
        enc = encode_boxes([TRI_UP, TRI_DOWN])
        # the two triangles share the facet lines y=0 and x=0, so only four distinct lines
        assert enc.hyperplanes == [Hyperplane((0, 1), 0), Hyperplane((1, -1), 1),
                                   Hyperplane((1, 0), 0), Hyperplane((1, 1), 1)]
        assert enc.family.words() == ["1*10", "001*"]
        assert enc.family.k == 3
        assert verify_family(enc.family).ok
        (i,) = enc.pair_witnesses.values()
        a, b = enc.family.boxes
        assert a.fixed >> i & 1 and b.fixed >> i & 1 and (a.values ^ b.values) >> i & 1

    def test_single_segment(self):
        enc = encode_boxes([SEG_A])
        assert enc.family.n == 2 and enc.family.k == 2
        assert enc.family.words() == ["10"]

    def test_two_segments(self):
        enc = encode_boxes([SEG_A, SEG_B])
        assert enc.family.words() == ["10*", "*10"]
        assert len(enc.family) == 2 == 2 ** (1 + 1) - 2
        assert enc.pair_witnesses == {(0, 1): 1}
        assert verify_family(enc.family).ok

    def test_tetrahedra_sharing_face(self):
        up = Simplex(((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)))
        down = Simplex(((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, -1)))
        enc = encode_boxes([up, down])
        assert enc.family.k == 4 and verify_family(enc.family).ok

    def test_rejects_non_neighbourly(self):
        with pytest.raises(VerificationError):
            encode_boxes([TRI_UP, FAR])

    def test_fan_of_triangles(self):
        # four triangles around the origin, one per quadrant, pairwise split by an axis
        quads = [Simplex(((0, 0), (sx, 0), (0, sy))) for sx in (1, -1) for sy in (1, -1)]
        enc = encode_boxes(quads)
        assert verify_family(enc.family).ok and len(enc.family) == 4 <= 2**3 - 2
        assert len(enc.pair_witnesses) == 6

    def test_relabeling_invariance(self):
        quads = [Simplex(((0, 0), (sx, 0), (0, sy))) for sx in (1, -1) for sy in (1, -1)]
        rng = random.Random(0)
        base = encode_boxes(quads)
        for _ in range(5):
            perm = list(range(4))
            rng.shuffle(perm)
            enc = encode_boxes([quads[i] for i in perm])
            assert enc.hyperplanes == base.hyperplanes
            assert list(enc.family.boxes) == [base.family.boxes[i] for i in perm]


class TestFormat:
    def test_parse(self):
        fam = parse_simplices("# d=2\n0 0\n1 0\n0 1\n\n0 0\n1/2 0\n0 -1\n")
        assert len(fam) == 2
        assert fam[1].vertices[1] == (Fraction(1, 2), Fraction(0))

    def test_infer_dimension(self):
        assert parse_simplices("0\n1\n\n\n1\n2\n")[1].d == 1

    @pytest.mark.parametrize("text", ["", "0 0\n1 0\n", "0 0\n1 1\n2 2\n", "0 a\n1 0\n0 1\n",
                                      "0\n1\n\n0 0\n1 0\n0 1\n", "1/0\n1\n"])
    def test_errors(self, text):
        with pytest.raises(FormatError):
            parse_simplices(text)

    def test_hyperplane_rows(self):
        assert serialize_hyperplanes([Hyperplane((1, -1), 1)]) == "1 -1 1\n"

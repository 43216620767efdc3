import random
from math import comb

import pytest
from hypothesis import strategies as st

from cubeboxes import fixtures
from cubeboxes.boxcore import Box, BoxFamily, is_disjoint, parse_family

B3_WORDS = ["**000", "*0*01", "*001*", "*01*0", "01**1", "11*1*"]
B4_WORDS = [
    "**1101*", "**111*0", "*0*100*", "*00*10*", "*001*1*", "*1*01*0", "*101**0",
    "*1100**", "0*000**", "0010***", "01**1*1", "1*1*1*1", "10*00**", "110***1",
]


@pytest.fixture
def b3():
    return parse_family(fixtures.read("b3n5.boxes"))


@pytest.fixture
def b4():
    return parse_family(fixtures.read("b4n7.boxes"))


def random_box(rng: random.Random, n: int, k: int) -> Box:
    coords = rng.sample(range(n), k)
    fixed = sum(1 << c for c in coords)
    return Box(n, fixed, rng.getrandbits(n) & fixed)


def random_verified_family(rng: random.Random, n: int, k: int, tries: int = 60) -> BoxFamily:
    """Greedy random family satisfying all three conditions."""
    boxes: list[Box] = []
    for _ in range(tries):
        b = random_box(rng, n, k)
        if all(b.fixed != a.fixed and is_disjoint(a, b) for a in boxes):
            boxes.append(b)
    return BoxFamily(n, k, tuple(boxes))


@st.composite
def boxes(draw, n=None, max_n=10):
    if n is None:
        n = draw(st.integers(1, max_n))
    fixed = draw(st.integers(0, (1 << n) - 1))
    values = draw(st.integers(0, (1 << n) - 1))
    return Box(n, fixed, values)


@st.composite
def box_pairs(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    return draw(boxes(n=n)), draw(boxes(n=n))


@st.composite
def verified_families(draw, max_n=8):
    n = draw(st.integers(2, max_n))
    k = draw(st.integers(1, n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_verified_family(random.Random(seed), n, k)


def candidate_count(k: int, n: int) -> int:
    return comb(n, k) * 2**k


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)

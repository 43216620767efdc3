"""Families of subsets of [n] closed under symmetric difference.

Subsets are bit masks with element i in bit i-1, so symmetric difference is
XOR.  :func:`generate_Gv` builds the recursive groups whose nonempty
members all have size ``2^v`` and :func:`preimage_group` stretches them to
an arbitrary uniform size ``k = 2^v * p``; both attain ``|G| = 2^(v+1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .boxcore import FormatError

MAX_V = 20


def _popcount(x: int) -> int:
    return bin(x).count("1")


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"elements are 1-based, got {e}")
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int) -> list[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class SetFamily:
    n: int
    sets: tuple[int, ...]

    def __post_init__(self):
        sets = tuple(self.sets)
        if len(set(sets)) != len(sets):
            raise ValueError("duplicate subsets in family")
        if any(s >> self.n for s in sets):
            raise ValueError(f"subset has elements beyond n={self.n}")
        object.__setattr__(self, "sets", sets)

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]], n: int | None = None) -> "SetFamily":
        masks = [mask_of(s) for s in sets]
        if n is None:
            n = max((m.bit_length() for m in masks), default=0)
        return cls(n, tuple(masks))

    def __len__(self):
        return len(self.sets)

    def as_frozensets(self) -> set[frozenset[int]]:
        return {frozenset(elements_of(s)) for s in self.sets}


def two_adic_order(k: int) -> int:
    if k < 1:
        raise ValueError(f"2-adic order needs k >= 1, got {k}")
    return (k & -k).bit_length() - 1


@dataclass
class GroupReport:
    size: int
    is_group: bool
    uniform_k: int | None
    v: int | None
    bound: int | None
    bound_ok: bool | None
    half_intersections_ok: bool
    witness: tuple | None = None

    @property
    def attains_bound(self) -> bool:
        return self.bound is not None and self.size == self.bound


def check_group(f: SetFamily) -> GroupReport:
    """Closure, uniformity and the ``2^(v+1)`` size bound for a set family.

    Closure is tested over all ordered pairs and stops at the first missing
    symmetric difference, which is kept as ``witness``.  ``v``, ``bound`` and
    ``bound_ok`` are ``None`` unless the nonempty members have one common size.
    """
    members = set(f.sets)
    witness = None
    is_group = 0 in members
    if not is_group:
        witness = ("missing-empty",)
    else:
        for a in f.sets:
            for b in f.sets:
                if a ^ b not in members:
                    is_group = False
                    witness = ("not-closed", a, b)
                    break
            if not is_group:
                break

    nonempty = [s for s in f.sets if s]
    sizes = {_popcount(s) for s in nonempty}
    uniform_k = sizes.pop() if len(sizes) == 1 else None
    v = bound = bound_ok = None
    if uniform_k is not None:
        v = two_adic_order(uniform_k)
        bound = 2 ** (v + 1)
        bound_ok = len(f) <= bound

    half_ok = True
    if len(nonempty) >= 2:
        if uniform_k is None or uniform_k % 2:
            half_ok = False
        else:
            half = uniform_k // 2
            half_ok = all(_popcount(a & b) == half
                          for i, a in enumerate(nonempty) for b in nonempty[i + 1:])
    return GroupReport(len(f), is_group, uniform_k, v, bound, bound_ok, half_ok, witness)


def gf2_rank(vectors: Iterable[int]) -> int:
    pivots: dict[int, int] = {}  # leading bit -> basis vector
    for vec in vectors:
        while vec:
            top = vec.bit_length() - 1
            if top not in pivots:
                pivots[top] = vec
                break
            vec ^= pivots[top]
    return len(pivots)


def is_subspace(masks: Iterable[int]) -> bool:
    """XOR-closure via rank: a set containing 0 is closed iff its size is 2^rank."""
    masks = set(masks)
    if 0 not in masks:
        return False
    return len(masks) == 1 << gf2_rank(masks)


def generate_Gv(v: int) -> SetFamily:
    if not 0 <= v <= MAX_V:
        raise ValueError(f"v must be in 0..{MAX_V}, got {v}")
    group = [0, 1]  # {}, {1}
    for _ in range(v):
        union = 0
        for a in group:
            union |= a
        m = union.bit_length()  # max element of the union
        assert union == (1 << m) - 1, "union of G_v is not an initial interval"
        k_set = (union << m) | (1 << (2 * m))  # (U + m) plus the element 2m+1
        sharp = [a | (a << m) for a in group if a]
        group = sharp + [k_set ^ a for a in sharp] + [0, k_set]
    n = max(a.bit_length() for a in group)
    assert n == 2 ** (v + 1) - 1
    return SetFamily(n, tuple(sorted(group)))


def preimage_group(v: int, p: int) -> SetFamily:
    """Pull ``G_v`` back along ``i -> ceil(i / p)``; members get size ``2^v * p``."""
    if p < 1 or p % 2 == 0:
        raise ValueError(f"p must be a positive odd integer, got {p}")
    base = generate_Gv(v)
    block = (1 << p) - 1
    out = []
    for a in base.sets:
        pre = 0
        for e in elements_of(a):
            pre |= block << ((e - 1) * p)
        out.append(pre)
    return SetFamily(base.n * p, tuple(sorted(out)))


def parse_sets(text: str) -> SetFamily:
    """One set per line, comma-separated 1-based elements, ``{}`` for the empty set."""
    sets = []
    header_n = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("n="):
                try:
                    header_n = int(body[2:])
                except ValueError:
                    raise FormatError(f"line {lineno}: bad header {line!r}") from None
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line in ("{}", "∅"):
            sets.append(())
            continue
        line = line.strip("{}")
        try:
            elems = [int(tok) for tok in line.split(",")]
        except ValueError:
            raise FormatError(f"line {lineno}: expected comma-separated integers") from None
        if any(e < 1 for e in elems):
            raise FormatError(f"line {lineno}: elements must be >= 1")
        sets.append(elems)
    try:
        return SetFamily.from_sets(sets, header_n)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_set(mask: int) -> str:
    return ",".join(map(str, elements_of(mask))) if mask else "{}"


def serialize_sets(f: SetFamily) -> str:
    lines = [format_set(s) for s in f.sets]
    if f.n != max((s.bit_length() for s in f.sets), default=0):
        lines.insert(0, f"# n={f.n}")
    return "\n".join(lines) + "\n"

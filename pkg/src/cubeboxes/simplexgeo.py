"""Exact rational geometry for families of d-simplices in R^d.

Facet hyperplanes are kept in a canonical integer form ``a . x = c`` (content
1, first nonzero normal coefficient positive).  A family is nearly
neighbourly when every two members lie in opposite closed half-spaces of a
hyperplane spanned by a facet of each.  :func:`encode_boxes` maps such a
family to boxes over the sorted list of all facet hyperplanes: coordinate i
of B(sigma) is 0 when sigma lies on the negative side of H_i, 1 on the
positive side, and free when H_i is not one of sigma's facet planes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

from .boxcore import Box, BoxFamily, FormatError, VerificationError, verify_family

MAX_D = 8

Point = tuple[Fraction, ...]


def as_point(coords: Iterable) -> Point:
    return tuple(Fraction(c) for c in coords)


def det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = [list(r) for r in rows]
    size = len(m)
    result = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        result *= m[col][col]
        for r in range(col + 1, size):
            factor = m[r][col] / m[col][col]
            if factor:
                for c in range(col, size):
                    m[r][c] -= factor * m[col][c]
    return result


@dataclass(frozen=True, order=True)
class Hyperplane:
    normal: tuple[int, ...]
    offset: int

    @classmethod
    def canonical(cls, normal: Sequence, offset) -> "Hyperplane":
        coeffs = [Fraction(a) for a in normal] + [Fraction(offset)]
        if not any(coeffs[:-1]):
            raise ValueError("hyperplane normal is zero")
        scale = lcm(*(c.denominator for c in coeffs))
        ints = [int(c * scale) for c in coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        ints = [v // g for v in ints]
        lead = next(v for v in ints[:-1] if v)
        if lead < 0:
            ints = [-v for v in ints]
        return cls(tuple(ints[:-1]), ints[-1])

    @property
    def d(self) -> int:
        return len(self.normal)

    def evaluate(self, x: Point) -> Fraction:
        """Signed value ``a . x - c``; negative side is H^0, positive is H^1."""
        return sum((a * xi for a, xi in zip(self.normal, x)), Fraction(0)) - self.offset

    def side(self, x: Point) -> int:
        v = self.evaluate(x)
        return (v > 0) - (v < 0)

    def __str__(self):
        return " ".join(map(str, self.normal)) + f" {self.offset}"


@dataclass(frozen=True)
class Simplex:
    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(as_point(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        d = len(verts) - 1
        if d < 1:
            raise ValueError("a simplex needs at least two vertices")
        if d > MAX_D:
            raise ValueError(f"dimension {d} exceeds the guard of {MAX_D}")
        if any(len(v) != d for v in verts):
            raise ValueError(f"{d + 1} vertices need {d} coordinates each")
        base = verts[0]
        if det([[a - b for a, b in zip(v, base)] for v in verts[1:]]) == 0:
            raise ValueError("degenerate simplex: vertices are affinely dependent")

    @property
    def d(self) -> int:
        return len(self.vertices) - 1

    def sides(self, h: Hyperplane) -> set[int]:
        return {h.side(v) for v in self.vertices}


def hyperplane_through(points: Sequence[Point]) -> Hyperplane:
    """The hyperplane through ``d`` affinely independent points in R^d."""
    d = len(points)
    base = points[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in points[1:]]
    # normal_j = (-1)^j * minor of the difference matrix without column j
    normal = []
    for j in range(d):
        minor = [row[:j] + row[j + 1:] for row in diffs]
        normal.append((-1) ** j * det(minor))
    offset = sum((a * b for a, b in zip(normal, base)), Fraction(0))
    return Hyperplane.canonical(normal, offset)


def facet_hyperplanes(s: Simplex) -> list[Hyperplane]:
    """One canonical hyperplane per facet; facet i omits vertex i."""
    out = []
    for i in range(s.d + 1):
        facet = [v for j, v in enumerate(s.vertices) if j != i]
        h = hyperplane_through(facet)
        assert h.evaluate(s.vertices[i]) != 0
        out.append(h)
    return out


def _closed_side(s: Simplex, h: Hyperplane) -> int:
    """+1 or -1 for the closed half-space of ``h`` holding ``s``, 0 if it crosses."""
    sides = s.sides(h) - {0}
    if len(sides) != 1:
        return 0
    return sides.pop()


@dataclass
class NeighbourlyReport:
    ok: bool
    witnesses: dict[tuple[int, int], Hyperplane] = field(default_factory=dict)
    failing: list[tuple[int, int]] = field(default_factory=list)


def is_nearly_neighbourly(fam: Sequence[Simplex]) -> NeighbourlyReport:
    """Check every pair for a common facet hyperplane with the two on opposite sides.

    The witness for a pair is the least such hyperplane in canonical order.
    """
    if len({s.d for s in fam}) > 1:
        raise ValueError("simplices of mixed dimensions")
    facets = [set(facet_hyperplanes(s)) for s in fam]
    report = NeighbourlyReport(True)
    for i, j in combinations(range(len(fam)), 2):
        for h in sorted(facets[i] & facets[j]):
            si, sj = _closed_side(fam[i], h), _closed_side(fam[j], h)
            if si and sj and si != sj:
                report.witnesses[(i, j)] = h
                break
        else:
            report.ok = False
            report.failing.append((i, j))
    return report


@dataclass
class EncodingResult:
    hyperplanes: list[Hyperplane]
    family: BoxFamily
    pair_witnesses: dict[tuple[int, int], int]


def encode_boxes(fam: Sequence[Simplex]) -> EncodingResult:
    if not fam:
        raise ValueError("empty simplex family")
    nn = is_nearly_neighbourly(fam)
    if not nn.ok:
        raise VerificationError(f"not nearly neighbourly: no separating facet "
                                f"hyperplane for pairs {nn.failing}")
    per_simplex = [facet_hyperplanes(s) for s in fam]
    planes = sorted({h for hs in per_simplex for h in hs})
    index = {h: i for i, h in enumerate(planes)}
    boxes = []
    for si, (s, hs) in enumerate(zip(fam, per_simplex)):
        fixed = values = 0
        for h in hs:
            side = _closed_side(s, h)
            if side == 0:
                raise ValueError(f"simplex {si} has vertices on both sides of its own facet plane")
            fixed |= 1 << index[h]
            if side > 0:
                values |= 1 << index[h]
        boxes.append(Box(len(planes), fixed, values))
    d = fam[0].d
    family = BoxFamily(len(planes), d + 1, tuple(boxes))
    report = verify_family(family)
    if not report.ok:
        raise VerificationError(f"encoded family fails verification: {report.violations}")
    witnesses = {pair: index[h] for pair, h in nn.witnesses.items()}
    return EncodingResult(planes, family, witnesses)


def parse_simplices(text: str) -> list[Simplex]:
    """Blank-line separated blocks of d+1 lines with d rationals each."""
    header_d = None
    blocks: list[list[Point]] = [[]]
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].replace(" ", "")
            if body.startswith("d="):
                try:
                    header_d = int(body[2:])
                except ValueError:
                    raise FormatError(f"line {lineno}: bad header {line!r}") from None
            continue
        if not line:
            if blocks[-1]:
                blocks.append([])
            continue
        try:
            blocks[-1].append(tuple(Fraction(tok) for tok in line.split()))
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"line {lineno}: expected rationals, got {line!r}") from None
    blocks = [b for b in blocks if b]
    if not blocks:
        raise FormatError("no simplices in input")
    out = []
    for bi, block in enumerate(blocks):
        d = header_d if header_d is not None else len(block[0])
        if len(block) != d + 1 or any(len(p) != d for p in block):
            raise FormatError(f"block {bi + 1}: expected {d + 1} points with {d} coordinates")
        try:
            out.append(Simplex(tuple(block)))
        except ValueError as exc:
            raise FormatError(f"block {bi + 1}: {exc}") from None
    if len({s.d for s in out}) > 1:
        raise FormatError("simplices of mixed dimensions")
    return out


def serialize_hyperplanes(planes: Sequence[Hyperplane]) -> str:
    """Rows ``a_1 ... a_d c`` for ``a . x = c``, in coordinate order."""
    return "".join(f"{h}\n" for h in planes)

"""Sub-boxes of the discrete cube {0,1}^n and families of them.

A box is stored as two bit masks over the coordinates: ``fixed`` marks the
coordinates where the box is a single value and ``values`` gives that value.
Coordinate ``i`` (1-based) lives in bit ``i - 1``.  Two boxes are disjoint
exactly when some coordinate is fixed in both with opposite values, which is
the one-word test ``fixed_a & fixed_b & (values_a ^ values_b)``.

Families are read and written as star words, one box per line, over the
alphabet ``0``, ``1``, ``*``::

    **000
    *0*01
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable


class FormatError(ValueError):
    """Malformed text input (star words, set lists, simplex blocks)."""


class VerificationError(ValueError):
    """An operation required a verified family and did not get one."""


@dataclass(frozen=True)
class Box:
    n: int
    fixed: int
    values: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"ambient dimension must be >= 1, got {self.n}")
        full = (1 << self.n) - 1
        if self.fixed & ~full:
            raise ValueError("fixed mask has bits beyond the ambient dimension")
        # canonical form: no value bits outside the fixed coordinates
        object.__setattr__(self, "values", self.values & self.fixed)

    @classmethod
    def from_word(cls, word: str) -> "Box":
        if not word:
            raise FormatError("empty star word")
        fixed = values = 0
        for i, ch in enumerate(word):
            if ch == "*":
                continue
            if ch not in "01":
                raise FormatError(f"illegal character {ch!r} in word {word!r}")
            fixed |= 1 << i
            if ch == "1":
                values |= 1 << i
        return cls(len(word), fixed, values)

    def to_word(self) -> str:
        out = []
        for i in range(self.n):
            bit = 1 << i
            if not self.fixed & bit:
                out.append("*")
            else:
                out.append("1" if self.values & bit else "0")
        return "".join(out)

    @property
    def codim(self) -> int:
        return bin(self.fixed).count("1")

    def contains(self, x: int) -> bool:
        """Membership of the point whose i-th coordinate is bit i-1 of ``x``."""
        return (x ^ self.values) & self.fixed == 0

    def points(self) -> Iterable[int]:
        free = ~self.fixed & ((1 << self.n) - 1)
        sub = free
        while True:
            yield self.values | sub
            if sub == 0:
                break
            sub = (sub - 1) & free

    def __str__(self):
        return self.to_word()


def prop(b: Box) -> frozenset[int]:
    """1-based coordinates where the box is fixed."""
    return frozenset(i + 1 for i in range(b.n) if b.fixed >> i & 1)


def is_disjoint(a: Box, b: Box) -> bool:
    if a.n != b.n:
        raise ValueError(f"ambient dimensions differ: {a.n} vs {b.n}")
    return (a.fixed & b.fixed & (a.values ^ b.values)) != 0


@dataclass(frozen=True)
class BoxFamily:
    n: int
    k: int
    boxes: tuple[Box, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        for b in self.boxes:
            if b.n != self.n:
                raise ValueError(f"box {b} has ambient dimension {b.n}, family has {self.n}")

    @classmethod
    def from_words(cls, words: Iterable[str], k: int | None = None) -> "BoxFamily":
        boxes = [Box.from_word(w) for w in words]
        if not boxes:
            raise ValueError("cannot infer n from an empty word list")
        return cls(boxes[0].n, boxes[0].codim if k is None else k, tuple(boxes))

    def __len__(self):
        return len(self.boxes)

    def __iter__(self):
        return iter(self.boxes)

    def words(self) -> list[str]:
        return [b.to_word() for b in self.boxes]


_HEADER = re.compile(r"^#\s*n\s*=\s*(\d+)(?:\s+k\s*=\s*(\d+))?\s*$")


def parse_family(text: str) -> BoxFamily:
    """Parse a star-word document.

    ``#`` starts a comment and blank lines are skipped.  ``k`` is the
    codimension of the first box.  A ``# n=<int> [k=<int>]`` header is needed
    only for an empty family; when present alongside boxes, ``n`` must agree.
    """
    words = []
    header_n = header_k = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        m = _HEADER.match(line)
        if m:
            header_n = int(m.group(1))
            header_k = int(m.group(2)) if m.group(2) is not None else None
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        bad = set(line) - set("01*")
        if bad:
            raise FormatError(f"line {lineno}: illegal character(s) {''.join(sorted(bad))!r}")
        if words and len(line) != len(words[0]):
            raise FormatError(
                f"line {lineno}: word length {len(line)} differs from {len(words[0])}")
        words.append(line)
    if not words:
        if header_n is None:
            raise FormatError("empty input: no boxes and no '# n=' header")
        return BoxFamily(header_n, header_k or 0, ())
    if header_n is not None and header_n != len(words[0]):
        raise FormatError(f"header says n={header_n} but words have length {len(words[0])}")
    return BoxFamily.from_words(words)


def serialize_family(f: BoxFamily) -> str:
    if not f.boxes:
        return f"# n={f.n} k={f.k}\n"
    return "".join(w + "\n" for w in f.words())


@dataclass
class VerifyReport:
    n: int
    k: int
    size: int
    alpha_ok: bool
    beta_ok: bool
    gamma_ok: bool
    bound_ok: bool
    violations: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.alpha_ok and self.beta_ok and self.gamma_ok

    @property
    def in_bound_range(self) -> bool:
        return 3 <= self.k < self.n

    @property
    def bound(self) -> int:
        return 2**self.k - 2


def verify_family(f: BoxFamily) -> VerifyReport:
    """Check uniform codimension, distinct prop sets and pairwise disjointness.

    Every violation is listed with the (0-based) indices of the offending
    boxes: ``("alpha", (i,))``, ``("beta", (i, j))``, ``("gamma", (i, j))``.
    """
    violations: list[tuple[str, tuple[int, ...]]] = []
    for i, b in enumerate(f.boxes):
        if b.codim != f.k:
            violations.append(("alpha", (i,)))
    for (i, a), (j, b) in combinations(enumerate(f.boxes), 2):
        if a.fixed == b.fixed:
            violations.append(("beta", (i, j)))
        if not is_disjoint(a, b):
            violations.append(("gamma", (i, j)))
    kinds = {v[0] for v in violations}
    alpha_ok, beta_ok, gamma_ok = ("alpha" not in kinds, "beta" not in kinds,
                                   "gamma" not in kinds)
    bound_ok = True
    if alpha_ok and beta_ok and gamma_ok and 3 <= f.k < f.n:
        bound_ok = len(f.boxes) <= 2**f.k - 2
    return VerifyReport(f.n, f.k, len(f.boxes), alpha_ok, beta_ok, gamma_ok,
                        bound_ok, violations)


def double_family(f: BoxFamily) -> BoxFamily:
    """Two copies of ``f`` in dimension ``2n + 1`` with codimension ``k + 1``.

    Copy one is ``A x {0} x *^n``, copy two is ``*^n x {1} x A``; the middle
    coordinate separates the copies and keeps their prop sets apart.
    """
    report = verify_family(f)
    if not report.ok:
        raise VerificationError(
            f"input family fails verification: {report.violations[:5]}")
    n = f.n
    mid = 1 << n
    boxes = [Box(2 * n + 1, b.fixed | mid, b.values) for b in f.boxes]
    boxes += [Box(2 * n + 1, (b.fixed << (n + 1)) | mid, (b.values << (n + 1)) | mid)
              for b in f.boxes]
    return BoxFamily(2 * n + 1, f.k + 1, tuple(boxes))

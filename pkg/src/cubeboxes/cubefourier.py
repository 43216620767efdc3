"""Exact Fourier analysis on {0,1}^n.

Points ``x`` and subsets ``S`` of [n] are both bit masks (coordinate i is
bit i-1), so ``chi_S(x) = (-1) ** popcount(S & x)``.  With the normalized
inner product ``<f, g> = 2^-n sum_x f(x) g(x)`` the coefficients are
``fhat(S) = 2^-n sum_x f(x) chi_S(x)``.  Nothing here touches floating
point: a :class:`Spectrum` stores the integers ``2^e * fhat(S)`` together
with the exponent ``e`` (``e = n`` for a transform, ``2n`` for a
convolution of two transforms).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .boxcore import BoxFamily, VerificationError, verify_family
from .setgroups import is_subspace

MAX_DENSE_N = 24
MAX_CONVOLVE_N = 12
_INT64_LIMIT = 2**63 - 1


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.int64)
    arr.setflags(write=False)
    return arr


def _check_fits(bound: int, what: str) -> None:
    if bound > _INT64_LIMIT:
        raise OverflowError(f"{what} may exceed 64-bit range (bound {bound})")


def _wht(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard butterfly over int64, returns a new array."""
    out = a.copy()
    size = len(out)
    h = 1
    while h < size:
        view = out.reshape(-1, 2, h)
        lo = view[:, 0, :].copy()
        hi = view[:, 1, :]
        view[:, 0, :] += hi
        view[:, 1, :] = lo - hi
        h *= 2
    return out


@dataclass(frozen=True, eq=False)
class CubeFunction:
    n: int
    values: np.ndarray

    def __post_init__(self):
        if not 0 <= self.n <= MAX_DENSE_N:
            raise ValueError(f"n={self.n} outside dense range 0..{MAX_DENSE_N}")
        vals = _frozen(self.values)
        if vals.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} values, got {vals.shape}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, n: int, c: int = 1) -> "CubeFunction":
        return cls(n, np.full(1 << n, c, dtype=np.int64))

    def __eq__(self, other):
        if not isinstance(other, CubeFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.values, other.values)

    def __mul__(self, other: "CubeFunction") -> "CubeFunction":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        _check_fits(_maxabs(self.values) * _maxabs(other.values), "pointwise product")
        return CubeFunction(self.n, self.values * other.values)

    def is_indicator(self) -> bool:
        return bool(np.all((self.values == 0) | (self.values == 1)))

    def energy(self) -> Fraction:
        """``<f, f>``."""
        return Fraction(sum(int(v) * int(v) for v in self.values), 1 << self.n)


def _maxabs(arr: np.ndarray) -> int:
    return int(np.abs(arr).max()) if arr.size else 0


@dataclass(frozen=True, eq=False)
class Spectrum:
    """``scaled[S] = 2**exponent * fhat(S)``; ``exponent`` defaults to ``n``."""

    n: int
    scaled: np.ndarray
    exponent: int = field(default=-1)

    def __post_init__(self):
        vals = _frozen(self.scaled)
        if vals.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} coefficients, got {vals.shape}")
        object.__setattr__(self, "scaled", vals)
        if self.exponent < 0:
            object.__setattr__(self, "exponent", self.n)

    def coefficient(self, s: int) -> Fraction:
        return Fraction(int(self.scaled[s]), 1 << self.exponent)

    def coefficients(self) -> list[Fraction]:
        return [self.coefficient(s) for s in range(1 << self.n)]

    def support(self) -> frozenset[int]:
        return frozenset(int(s) for s in np.flatnonzero(self.scaled))

    def rescaled(self, exponent: int) -> "Spectrum":
        """Same coefficients at another scale; raises if not integral there."""
        shift = self.exponent - exponent
        if shift == 0:
            return self
        if shift < 0:
            _check_fits(_maxabs(self.scaled) << -shift, "rescaling")
            return Spectrum(self.n, self.scaled << -shift, exponent)
        mask = (1 << shift) - 1
        if np.any(self.scaled & mask):
            raise ValueError(f"coefficients are not multiples of 2^-{exponent}")
        return Spectrum(self.n, self.scaled >> shift, exponent)

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        if self.n != other.n:
            return False
        lo = min(self.exponent, other.exponent)
        try:
            a, b = self.rescaled(lo), other.rescaled(lo)
        except ValueError:
            return False
        return np.array_equal(a.scaled, b.scaled)


def indicator_sum(f: BoxFamily) -> CubeFunction:
    """Number of boxes of ``f`` containing each point of the cube."""
    if f.n > MAX_DENSE_N:
        raise ValueError(f"n={f.n} too large for dense storage (max {MAX_DENSE_N})")
    x = np.arange(1 << f.n, dtype=np.int64)
    out = np.zeros(1 << f.n, dtype=np.int64)
    for b in f.boxes:
        out += ((x ^ b.values) & b.fixed) == 0
    return CubeFunction(f.n, out)


def transform(f: CubeFunction) -> Spectrum:
    _check_fits(_maxabs(f.values) << f.n, "transform")
    return Spectrum(f.n, _wht(f.values))


def inverse_transform(s: Spectrum) -> CubeFunction:
    _check_fits(_maxabs(s.scaled) << s.n, "inverse transform")
    raw = _wht(s.scaled)
    mask = (1 << s.exponent) - 1
    if np.any(raw & mask):
        bad = int(np.flatnonzero(raw & mask)[0])
        raise ValueError(
            f"spectrum does not come from an integer function: value at point {bad} "
            f"is {Fraction(int(raw[bad]), 1 << s.exponent)}")
    return CubeFunction(s.n, raw >> s.exponent)


def convolve(a: Spectrum, b: Spectrum) -> Spectrum:
    """``(A*B)(S) = sum_T A(S ^ T) B(T)`` evaluated directly, O(4^n).

    The result keeps integer entries at exponent ``a.exponent + b.exponent``
    (``2n`` for two plain transforms); use :meth:`Spectrum.rescaled` to
    compare against a transform at exponent ``n``.
    """
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    n = a.n
    if n > MAX_CONVOLVE_N:
        raise ValueError(f"n={n} too large for direct convolution (max {MAX_CONVOLVE_N})")
    _check_fits((_maxabs(a.scaled) * _maxabs(b.scaled)) << n, "convolution")
    idx = np.arange(1 << n, dtype=np.int64)
    out = np.empty(1 << n, dtype=np.int64)
    for s in range(1 << n):
        out[s] = int(np.dot(a.scaled[idx ^ s], b.scaled))
    return Spectrum(n, out, a.exponent + b.exponent)


def is_idempotent(s: Spectrum) -> bool:
    """Whether ``fhat == fhat * fhat``, i.e. the function squares to itself."""
    return convolve(s, s) == s


@dataclass
class ProofTrace:
    m: int
    k: int
    n: int
    fhat_empty: Fraction
    fhat_props: dict[frozenset[int], Fraction]
    energy: Fraction
    bessel_rhs: Fraction
    support: frozenset[int]
    support_equals_m: bool
    support_is_group: bool
    idempotent: bool | None = None

    @property
    def bessel_slack(self) -> Fraction:
        return self.energy - self.bessel_rhs

    @property
    def props_are_pm(self) -> bool:
        unit = Fraction(1, 2**self.k)
        return all(abs(v) == unit for v in self.fhat_props.values())


def proof_trace(f: BoxFamily, idempotence: bool | None = None) -> ProofTrace:
    """Recompute the quantities of the counting argument on a concrete family.

    ``idempotence`` controls the convolution check (default: on when
    ``n <= 12``).  The support analysis uses a GF(2) rank test and works up
    to the dense limit.
    """
    report = verify_family(f)
    if not report.ok:
        raise VerificationError(f"family fails verification: {report.violations[:5]}")
    if f.n > MAX_DENSE_N:
        raise ValueError(f"n={f.n} too large (max {MAX_DENSE_N})")
    if idempotence is None:
        idempotence = f.n <= MAX_CONVOLVE_N
    func = indicator_sum(f)
    spec = transform(func)
    fhat_props = {}
    for b in f.boxes:
        key = frozenset(i + 1 for i in range(f.n) if b.fixed >> i & 1)
        fhat_props[key] = spec.coefficient(b.fixed)
    fhat_empty = spec.coefficient(0)
    bessel_rhs = fhat_empty**2 + sum(v * v for v in fhat_props.values())
    support = spec.support()
    m_set = frozenset([0] + [b.fixed for b in f.boxes])
    return ProofTrace(
        m=len(f),
        k=f.k,
        n=f.n,
        fhat_empty=fhat_empty,
        fhat_props=fhat_props,
        energy=func.energy(),
        bessel_rhs=bessel_rhs,
        support=support,
        support_equals_m=support == m_set,
        support_is_group=is_subspace(support),
        idempotent=is_idempotent(spec) if idempotence else None,
    )

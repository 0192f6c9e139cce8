"""Exact roots of unity and sums of them.

A :class:`PhaseExp` is e^{2 pi i k/L} stored as a reduced fraction k/L.  A
:class:`Cyclotomic` is an element of Q(zeta_N) written in the power basis
1, zeta, ..., zeta^{phi(N)-1}; reducing modulo the N-th cyclotomic polynomial
makes the representation canonical for a fixed N, so equality is decided
exactly after lifting both operands to the lcm of their conductors.
"""

from __future__ import annotations

import cmath
import functools
import math
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

__all__ = ["PhaseExp", "Cyclotomic", "cyclotomic_polynomial", "ONE"]


@dataclass(frozen=True)
class PhaseExp:
    """The root of unity exp(2 pi i k / L)."""

    k: int = 0
    L: int = 1

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError(f"phase modulus must be positive, got {self.L}")
        k = self.k % self.L
        g = math.gcd(k, self.L)
        object.__setattr__(self, "k", k // g)
        object.__setattr__(self, "L", self.L // g)

    @classmethod
    def from_fraction(cls, frac) -> PhaseExp:
        frac = Fraction(frac)
        return cls(frac.numerator, frac.denominator)

    @classmethod
    def from_complex(cls, z: complex, max_order: int = 64, atol: float = 1e-9) -> PhaseExp:
        """Snap a unit complex number to the nearest root of unity of order <= max_order."""
        if abs(abs(z) - 1) > atol:
            raise ValueError(f"{z} is not a unit scalar")
        turn = (cmath.phase(z) / (2 * math.pi)) % 1.0
        for L in range(1, max_order + 1):
            k = round(turn * L)
            if abs(cmath.exp(2j * math.pi * k / L) - z) <= atol:
                return cls(k, L)
        raise ValueError(f"{z} is not a root of unity of order <= {max_order}")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.k, self.L)

    @property
    def value(self) -> complex:
        if self.k == 0:
            return 1 + 0j
        # exact values for the common quarter turns
        quarter = {(1, 2): -1 + 0j, (1, 4): 1j, (3, 4): -1j}
        if (self.k, self.L) in quarter:
            return quarter[(self.k, self.L)]
        return cmath.exp(2j * math.pi * self.k / self.L)

    def __complex__(self):
        return self.value

    def __mul__(self, other: PhaseExp) -> PhaseExp:
        return PhaseExp.from_fraction(self.fraction + other.fraction)

    def __truediv__(self, other: PhaseExp) -> PhaseExp:
        return PhaseExp.from_fraction(self.fraction - other.fraction)

    def __pow__(self, e: int) -> PhaseExp:
        return PhaseExp.from_fraction(self.fraction * e)

    def conj(self) -> PhaseExp:
        return PhaseExp(-self.k, self.L)

    def __repr__(self):
        return f"PhaseExp({self.k}/{self.L})"


ONE = PhaseExp()


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Divide integer polynomials (low degree first); ``den`` must be monic."""
    num = list(num)
    dq = len(den) - 1
    if len(num) <= dq:
        return [0], num
    quot = [0] * (len(num) - dq)
    for i in range(len(num) - 1, dq - 1, -1):
        c = num[i]
        if c:
            quot[i - dq] = c
            for j, dc in enumerate(den):
                num[i - dq + j] -= c * dc
    return quot, num[:dq]


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("n must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(poly)


def _reduce(coeffs: Iterable, n: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    c = [Fraction(x) for x in coeffs]
    for i in range(len(c) - 1, deg - 1, -1):
        a = c[i]
        if a:
            for j, p in enumerate(phi):
                c[i - deg + j] -= a * p
    c = c[:deg] + [Fraction(0)] * max(0, deg - len(c))
    return tuple(c)


@dataclass(frozen=True, eq=False)
class Cyclotomic:
    """An exact element sum_j c_j zeta_N^j of the N-th cyclotomic field."""

    N: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _reduce(self.coeffs, self.N))

    @classmethod
    def from_int(cls, value) -> Cyclotomic:
        return cls(1, (Fraction(value),))

    @classmethod
    def from_exponents(cls, exponents: Iterable[int], N: int) -> Cyclotomic:
        """Sum of zeta_N^e over the given exponents (with multiplicity)."""
        counts = [0] * N
        for e in exponents:
            counts[e % N] += 1
        return cls(N, tuple(counts))

    @classmethod
    def from_phases(cls, phases: Iterable[PhaseExp]) -> Cyclotomic:
        phases = list(phases)
        N = math.lcm(1, *(p.L for p in phases))
        return cls.from_exponents((p.k * (N // p.L) for p in phases), N)

    @classmethod
    def gaussian(cls, re, im) -> Cyclotomic:
        """re + im*i, with i = zeta_4."""
        return cls(4, (Fraction(re), Fraction(im)))

    def lift(self, M: int) -> Cyclotomic:
        if M % self.N:
            raise ValueError(f"cannot lift from Q(zeta_{self.N}) to Q(zeta_{M})")
        step = M // self.N
        coeffs = [Fraction(0)] * (step * max(len(self.coeffs), 1))
        for j, c in enumerate(self.coeffs):
            coeffs[j * step] += c
        return Cyclotomic(M, tuple(coeffs))

    def _common(self, other) -> tuple[Cyclotomic, Cyclotomic]:
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.from_int(other)
        M = math.lcm(self.N, other.N)
        return self.lift(M), other.lift(M)

    def __add__(self, other) -> Cyclotomic:
        a, b = self._common(other)
        width = max(len(a.coeffs), len(b.coeffs))
        pa = list(a.coeffs) + [0] * (width - len(a.coeffs))
        pb = list(b.coeffs) + [0] * (width - len(b.coeffs))
        return Cyclotomic(a.N, tuple(x + y for x, y in zip(pa, pb)))

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic(self.N, tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> Cyclotomic:
        return self + (-other if isinstance(other, Cyclotomic) else -Fraction(other))

    def __mul__(self, other) -> Cyclotomic:
        a, b = self._common(other)
        prod = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs))
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    prod[i + j] += x * y
        return Cyclotomic(a.N, tuple(prod))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Cyclotomic:
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = Cyclotomic.from_int(1)
        for _ in range(e):
            result = result * self
        return result

    def __truediv__(self, other) -> Cyclotomic:
        q = Fraction(other)
        return Cyclotomic(self.N, tuple(c / q for c in self.coeffs))

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Cyclotomic, int, Fraction)):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    __hash__ = None

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __complex__(self) -> complex:
        zeta = cmath.exp(2j * math.pi / self.N)
        return complex(sum(float(c) * zeta**j for j, c in enumerate(self.coeffs) if c))

    def __repr__(self):
        if self.is_rational():
            return f"Cyclotomic({self.as_fraction()})"
        z = complex(self)
        return f"Cyclotomic(N={self.N}, {z.real:.6g}{z.imag:+.6g}j)"

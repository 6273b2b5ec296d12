"""Exact arithmetic in Z[zeta_M] and character-sum vanishing tests.

Character values are M-th roots of unity (M the group exponent), so every
character sum lives in Z[zeta_M] = Z[x]/(Phi_M). Vanishing is decided
exactly: build the mask polynomial sum_x A(x) x^{<x,g>} and test
divisibility by the M-th cyclotomic polynomial Phi_M. No floating point
anywhere; floats appear only in tests as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .errors import GroupMismatch, InvalidArgument, NotTwoDistinctPrimes
from .groups import Element, Group, Multiset, dot


@dataclass(frozen=True)
class IntPolynomial:
    """Dense integer polynomial, coefficients ascending, no trailing zeros."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        c = self.coeffs
        end = len(c)
        while end and c[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "coeffs", tuple(c[:end]))

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @classmethod
    def zero(cls) -> "IntPolynomial":
        return cls(())

    @classmethod
    def one(cls) -> "IntPolynomial":
        return cls((1,))

    @classmethod
    def x_pow_minus_one(cls, n: int) -> "IntPolynomial":
        """x^n - 1."""
        return cls((-1,) + (0,) * (n - 1) + (1,))

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(tuple(out))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        if self.is_zero or other.is_zero:
            return IntPolynomial.zero()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def divmod_monic(self, divisor: "IntPolynomial") -> tuple["IntPolynomial", "IntPolynomial"]:
        """Quotient and remainder by a monic divisor, exactly over Z."""
        if divisor.is_zero or divisor.coeffs[-1] != 1:
            raise InvalidArgument("divisor must be monic")
        d = divisor.degree
        rem = list(self.coeffs)
        if len(rem) <= d:
            return IntPolynomial.zero(), self
        quot = [0] * (len(rem) - d)
        dc = divisor.coeffs
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c:
                quot[i - d] = c
                for j in range(d + 1):
                    rem[i - d + j] -= c * dc[j]
        return IntPolynomial(tuple(quot)), IntPolynomial(tuple(rem[:d]))

    def exact_div(self, divisor: "IntPolynomial") -> "IntPolynomial":
        q, r = self.divmod_monic(divisor)
        if not r.is_zero:
            raise InvalidArgument("division was not exact")
        return q

    def evaluate(self, x: complex) -> complex:
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    if n < 1:
        raise InvalidArgument("phi is defined for n >= 1")
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out -= out // m
    return out


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    sign = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            sign = -sign
        p += 1
    if n > 1:
        sign = -sign
    return sign


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> IntPolynomial:
    """The n-th cyclotomic polynomial Phi_n, degree phi(n).

    Computed by the Mobius product Phi_n = prod_{d|n} (x^d - 1)^{mu(n/d)};
    the numerator/denominator quotient is exact over Z.
    """
    if n < 1:
        raise InvalidArgument("cyclotomic_poly requires n >= 1")
    num = IntPolynomial.one()
    den = IntPolynomial.one()
    for d in _divisors(n):
        mu = _mobius(n // d)
        if mu == 1:
            num = num * IntPolynomial.x_pow_minus_one(d)
        elif mu == -1:
            den = den * IntPolynomial.x_pow_minus_one(d)
    poly = num.exact_div(den)
    assert poly.degree == euler_phi(n)
    return poly


@dataclass(frozen=True)
class CyclotomicInt:
    """An element of Z[zeta_M], stored as the unique remainder mod Phi_M.

    coeffs always has length phi(M), zero-padded; value equality is
    coefficient equality.
    """

    modulus: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        d = euler_phi(self.modulus)
        if len(self.coeffs) != d:
            raise InvalidArgument(f"need exactly {d} coefficients for modulus {self.modulus}")

    @classmethod
    def zero(cls, M: int) -> "CyclotomicInt":
        return cls(M, (0,) * euler_phi(M))

    @classmethod
    def from_int(cls, M: int, c: int) -> "CyclotomicInt":
        d = euler_phi(M)
        if d == 0:
            raise InvalidArgument("modulus must be >= 1")
        return cls(M, (c,) + (0,) * (d - 1))

    @classmethod
    def from_polynomial(cls, M: int, poly: IntPolynomial) -> "CyclotomicInt":
        _, rem = poly.divmod_monic(cyclotomic_poly(M))
        d = euler_phi(M)
        padded = rem.coeffs + (0,) * (d - len(rem.coeffs))
        return cls(M, padded)

    @classmethod
    def root_power(cls, M: int, k: int) -> "CyclotomicInt":
        """zeta_M^k reduced mod Phi_M."""
        k %= M
        return cls.from_polynomial(M, IntPolynomial((0,) * k + (1,)))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        if self.modulus != other.modulus:
            raise InvalidArgument("mixed cyclotomic moduli")
        return CyclotomicInt(self.modulus, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        if self.modulus != other.modulus:
            raise InvalidArgument("mixed cyclotomic moduli")
        return CyclotomicInt(self.modulus, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scaled(self, k: int) -> "CyclotomicInt":
        return CyclotomicInt(self.modulus, tuple(k * c for c in self.coeffs))

    def evaluate(self) -> complex:
        """Numeric value at zeta_M = exp(2 pi i / M); for diagnostics only."""
        import cmath

        z = cmath.exp(2j * cmath.pi / self.modulus)
        return IntPolynomial(self.coeffs).evaluate(z)


# ---------------------------------------------------------------------------
# packed character tables: the exact fast path shared by zero sets and sweeps
#
# zeta_M^k mod Phi_M has phi(M) integer coefficients; each is stored in a
# 64-bit limb of one big int, biased by 2^32 so limbs never go negative.
# Summing the packed values of a multiset then comparing against
# mass * (packed all-zero) decides vanishing with one big-int comparison.

_LIMB = 64
_BIAS = 1 << 32


class CharTable:
    """Per-group exact character machinery (internal, cached per group)."""

    def __init__(self, G: Group):
        self.group = G
        self.M = G.exponent
        self.phi = euler_phi(self.M)
        phi_M = cyclotomic_poly(self.M)
        x = IntPolynomial((0, 1))
        pows: list[tuple[int, ...]] = []
        cur = IntPolynomial.one()
        for _ in range(self.M):
            pows.append(cur.coeffs + (0,) * (self.phi - len(cur.coeffs)))
            _, cur = (cur * x).divmod_monic(phi_M)
        self.reduced_powers = pows
        self.max_abs = max((abs(c) for row in pows for c in row), default=0)
        self.packed = [self._pack(row) for row in pows]
        self.bias_unit = self._pack((0,) * self.phi)
        self._rows: list[Optional[list[int]]] = [None] * G.order
        self._weights = tuple(self.M // n for n in G.moduli)

    def _pack(self, coeffs: tuple[int, ...]) -> int:
        out = 0
        for i, c in enumerate(coeffs):
            out |= (c + _BIAS) << (_LIMB * i)
        return out

    def mass_ok(self, mass: int) -> bool:
        """Packed sums stay exact while mass * max|coeff| < bias."""
        return mass * max(self.max_abs, 1) < _BIAS and mass < _BIAS

    def row(self, g_index: int) -> list[int]:
        """packed[<s, g>] for every s, indexed by element index."""
        cached = self._rows[g_index]
        if cached is not None:
            return cached
        G = self.group
        g = G.coords_of(g_index)
        M = self.M
        w = [wi * gi % M for wi, gi in zip(self._weights, g)]
        packed = self.packed
        row = []
        for x in G.elements:
            t = 0
            for wi, xi in zip(w, x):
                t += wi * xi
            row.append(packed[t % M])
        self._rows[g_index] = row
        return row

    def vanishes_index(self, items: list[tuple[int, int]], g_index: int) -> bool:
        """Exact vanishing of sum mult * zeta^{<x,g>} over (index, mult) pairs."""
        row = self.row(g_index)
        acc = 0
        mass = 0
        for idx, m in items:
            acc += m * row[idx]
            mass += m
        return acc == mass * self.bias_unit


@lru_cache(maxsize=None)
def char_table(G: Group) -> CharTable:
    return CharTable(G)


# ---------------------------------------------------------------------------
# public operations


def char_sum(G: Group, A: Multiset, g: Element) -> CyclotomicInt:
    """sum_x A(x) zeta_M^{<x, g>}, reduced mod Phi_M, exactly."""
    if A.group != G:
        raise GroupMismatch("multiset lives on a different group")
    G.check(g)
    M = G.exponent
    counts = [0] * M
    for x, m in A.items():
        counts[dot(G, x, g)] += m
    return CyclotomicInt.from_polynomial(M, IntPolynomial(tuple(counts)))


def char_sum_vanishes(G: Group, A: Multiset, g: Element) -> bool:
    """True iff the character sum of A at g is exactly zero."""
    if A.group != G:
        raise GroupMismatch("multiset lives on a different group")
    G.check(g)
    table = char_table(G)
    if table.mass_ok(A.mass):
        items = [(G.index_of(x), m) for x, m in A.items()]
        return table.vanishes_index(items, G.index_of(g))
    return char_sum(G, A, g).is_zero


@dataclass(frozen=True)
class ZeroSet:
    """The nonzero g with vanishing character sum; a union of directions."""

    group: Group
    elements: frozenset[Element]

    def __contains__(self, g: Element) -> bool:
        return g in self.elements

    def __iter__(self) -> Iterator[Element]:
        return iter(sorted(self.elements))

    def __len__(self) -> int:
        return len(self.elements)


def zero_set(G: Group, A: Multiset) -> ZeroSet:
    """All nonzero g with char_sum(A, g) = 0."""
    if A.group != G:
        raise GroupMismatch("multiset lives on a different group")
    if not A.mult:
        return ZeroSet(G, frozenset())
    table = char_table(G)
    out = []
    if table.mass_ok(A.mass):
        items = [(G.index_of(x), m) for x, m in A.items()]
        target = A.mass * table.bias_unit
        for gi in range(1, G.order):
            row = table.row(gi)
            acc = 0
            for idx, m in items:
                acc += m * row[idx]
            if acc == target:
                out.append(G.coords_of(gi))
    else:  # pragma: no cover - only for masses beyond the packed range
        for g in G.elements:
            if g != G.identity and char_sum(G, A, g).is_zero:
                out.append(g)
    return ZeroSet(G, frozenset(out))


@dataclass(frozen=True)
class CubeDecomposition:
    """A(i, j) = row_coeffs[j] + col_coeffs[i] on Z_p x Z_q.

    row_coeffs[j] weights the full first-factor coset at second coordinate
    j; col_coeffs[i] weights the full second-factor coset at first
    coordinate i. Canonical form has min(row_coeffs) = 0.
    """

    p: int
    q: int
    row_coeffs: tuple[int, ...]
    col_coeffs: tuple[int, ...]

    def reconstruct(self, group: Group) -> Multiset:
        counts: dict[Element, int] = {}
        for i in range(self.p):
            for j in range(self.q):
                m = self.row_coeffs[j] + self.col_coeffs[i]
                if m:
                    counts[(i, j)] = m
        return Multiset(group, counts)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def cube_decompose(A: Multiset) -> Optional[CubeDecomposition]:
    """Write a multiset on Z_p x Z_q as full-row plus full-column weights.

    Returns the canonical nonnegative solution (min row weight 0) when one
    exists, None otherwise. Existence is equivalent to the vanishing of the
    order-pq character sum.
    """
    G = A.group
    if len(G.moduli) != 2:
        raise NotTwoDistinctPrimes(f"need two factors, got {G.moduli!r}")
    p, q = G.moduli
    if p == q or not (_is_prime(p) and _is_prime(q)):
        raise NotTwoDistinctPrimes(f"moduli {G.moduli!r} are not two distinct primes")

    def a(i: int, j: int) -> int:
        return A((i, j))

    t = min(a(0, j) for j in range(q))
    u = tuple(a(0, j) - t for j in range(q))
    v = tuple(a(i, 0) - a(0, 0) + t for i in range(p))
    if any(c < 0 for c in v):
        return None
    for i in range(p):
        for j in range(q):
            if a(i, j) != u[j] + v[i]:
                return None
    return CubeDecomposition(p=p, q=q, row_coeffs=u, col_coeffs=v)

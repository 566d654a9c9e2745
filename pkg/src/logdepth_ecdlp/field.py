"""Reference arithmetic in GF(2^n), polynomial basis.

Elements are stored as Python integers whose bit ``i`` is the coefficient
of ``x^i``.  Everything in this module is classical and serves as the
ground truth for the synthesized circuits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator

from .bitmatrix import BitMatrix, int_to_bits


class FieldMismatchError(ValueError):
    """Raised when elements of different fields are combined."""


# ---------------------------------------------------------------------------
# polynomials over F2 packed into ints
# ---------------------------------------------------------------------------

def clmul(a: int, b: int) -> int:
    """Carry-less product of two F2[x] polynomials."""
    if a.bit_length() < b.bit_length():
        a, b = b, a
    out = 0
    while b:
        low = b & -b
        out ^= a << (low.bit_length() - 1)
        b ^= low
    return out


def clsquare(a: int) -> int:
    # squaring in F2[x] interleaves zeros between the coefficients
    if a == 0:
        return 0
    return int("0".join(bin(a)[2:]), 2)


def poly_mod(a: int, p: int) -> int:
    dp = p.bit_length()
    while a.bit_length() >= dp:
        a ^= p << (a.bit_length() - dp)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _reducer(p: int):
    """Fast ``v mod p`` for sparse ``p``; falls back to long division."""
    n = p.bit_length() - 1
    taps = [i for i in range(n) if p >> i & 1]
    if len(taps) > 8:
        return lambda v: poly_mod(v, p)
    mask = (1 << n) - 1

    def reduce(v: int) -> int:
        while v >> n:
            hi = v >> n
            v &= mask
            for t in taps:
                v ^= hi << t
        return v

    return reduce


@lru_cache(maxsize=None)
def is_irreducible(p: int) -> bool:
    """Rabin's irreducibility test for a polynomial over F2."""
    n = p.bit_length() - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if not p & 1:
        return False
    reduce = _reducer(p)

    # cheap rejection of factors of small degree
    r = 2
    for d in range(1, min(8, n // 2) + 1):
        r = reduce(clsquare(r))
        if poly_gcd(p, r ^ 2) != 1:
            return False

    def frob_x(k: int) -> int:
        # x^(2^k) mod p
        r = 2
        for _ in range(k):
            r = reduce(clsquare(r))
        return r

    if frob_x(n) != reduce(2):
        return False
    for q in _prime_factors(n):
        if poly_gcd(p, frob_x(n // q) ^ 2) != 1:
            return False
    return True


_DEFAULT_MODULI = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    8: 0b100011011,
    163: (1 << 163) | (1 << 7) | (1 << 6) | (1 << 3) | 1,
    233: (1 << 233) | (1 << 74) | 1,
}


@lru_cache(maxsize=None)
def default_modulus(n: int) -> int:
    """Low-weight irreducible modulus of degree ``n``.

    Uses the fixed table where present, else the trinomial ``x^n+x^k+1``
    with least ``k``, else the least pentanomial ``x^n+x^a+x^b+x^c+1``
    ordered by ``(a, b, c)``.
    """
    if n < 2:
        raise ValueError("extension degree must be at least 2")
    if n in _DEFAULT_MODULI:
        return _DEFAULT_MODULI[n]
    top = (1 << n) | 1
    for k in range(1, n):
        if is_irreducible(top | (1 << k)):
            return top | (1 << k)
    for a in range(3, n):
        for b in range(2, a):
            for c in range(1, b):
                p = top | (1 << a) | (1 << b) | (1 << c)
                if is_irreducible(p):
                    return p
    raise ValueError(f"no trinomial or pentanomial of degree {n} found")


# ---------------------------------------------------------------------------
# field spec and elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """GF(2^n) as F2[x]/(modulus)."""

    n: int
    modulus: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("extension degree must be at least 2")
        if self.modulus.bit_length() != self.n + 1:
            raise ValueError(f"modulus {self.modulus:#x} does not have degree {self.n}")
        if not self.modulus & 1:
            raise ValueError("modulus must have constant term 1")
        if not is_irreducible(self.modulus):
            raise ValueError(f"modulus {self.modulus:#x} is reducible")

    @classmethod
    def default(cls, n: int) -> FieldSpec:
        return cls(n, default_modulus(n))

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        m = re.fullmatch(r"\s*gf2n\s+n=(\d+)\s+poly=0x([0-9a-fA-F]+)\s*", text)
        if not m:
            raise ValueError(f"malformed field description: {text!r}")
        return cls(int(m.group(1)), int(m.group(2), 16))

    def __str__(self):
        return f"gf2n n={self.n} poly={self.modulus:#x}"

    @property
    def size(self) -> int:
        return 1 << self.n

    @cached_property
    def mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def reduce(self):
        """``v mod modulus`` for an arbitrary polynomial ``v``."""
        return _reducer(self.modulus)

    def mul(self, a: int, b: int) -> int:
        return self.reduce(clmul(a, b))

    def sq(self, a: int) -> int:
        return self.reduce(clsquare(a))

    def pow(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.sq(a)
            e >>= 1
        return out

    def frob(self, a: int, e: int) -> int:
        """``a^(2^e)``."""
        for _ in range(e % self.n):
            a = self.sq(a)
        return a

    def inv(self, a: int) -> int:
        # Fermat exponent; maps 0 to 0
        return self.pow(a, (1 << self.n) - 2)

    def tr(self, a: int) -> int:
        acc, t = 0, a
        for _ in range(self.n):
            acc ^= t
            t = self.sq(t)
        if acc >> 1:
            raise ArithmeticError("trace left F2; modulus is not irreducible")
        return acc

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in GF(2^n)")
        return self.mul(a, self.inv(b))

    # -- element-level -------------------------------------------------------

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(self, value)

    def element(self, coeffs) -> FieldElement:
        v = 0
        for i, c in enumerate(coeffs):
            if c & 1:
                v |= 1 << i
        return FieldElement(self, v)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> Iterator[FieldElement]:
        for v in range(self.size):
            yield FieldElement(self, v)


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def __post_init__(self):
        if not 0 <= self.value <= self.spec.mask:
            raise ValueError(f"{self.value:#x} is not an element of {self.spec}")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(int(b) for b in int_to_bits(self.value, self.spec.n))

    def _check(self, other: FieldElement):
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.spec != self.spec:
            raise FieldMismatchError(f"{self.spec} vs {other.spec}")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.spec, self.value ^ other.value)

    __sub__ = __add__

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.spec, self.spec.mul(self.value, other.value))

    def __truediv__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.spec, self.spec.div(self.value, other.value))

    def __pow__(self, e: int) -> FieldElement:
        return FieldElement(self.spec, self.spec.pow(self.value, e))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"GF(2^{self.spec.n})({self.value:#x})"


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul_schoolbook(a: FieldElement, b: FieldElement) -> FieldElement:
    """Polynomial product reduced modulo the field polynomial."""
    return a * b


def square(a: FieldElement) -> FieldElement:
    return FieldElement(a.spec, a.spec.sq(a.value))


def inv_fermat(a: FieldElement) -> FieldElement:
    """``a^(2^n - 2)``; the inverse for nonzero ``a`` and 0 for 0."""
    return FieldElement(a.spec, a.spec.inv(a.value))


def itoh_tsuji_chain(n: int) -> list[tuple[str, int]]:
    """Steps of the binary addition chain on ``n - 1`` used for inversion.

    Each step is ``("double", k)`` meaning ``beta_{2k} = beta_k^(2^k) * beta_k``
    or ``("inc", k)`` meaning ``beta_{k+1} = beta_k^2 * a``, where
    ``beta_k = a^(2^k - 1)``.  The chain starts from ``beta_1 = a``.
    """
    steps = []
    k = 1
    for bit in bin(n - 1)[3:]:
        steps.append(("double", k))
        k *= 2
        if bit == "1":
            steps.append(("inc", k))
            k += 1
    return steps


def itoh_tsuji_inverse(a: FieldElement) -> tuple[FieldElement, int]:
    """Invert via Itoh-Tsuji; returns ``(inverse, number of general multiplications)``."""
    spec = a.spec
    beta, mults = a.value, 0
    for op, k in itoh_tsuji_chain(spec.n):
        if op == "double":
            beta = spec.mul(spec.frob(beta, k), beta)
        else:
            beta = spec.mul(spec.sq(beta), a.value)
        mults += 1
    return FieldElement(spec, spec.sq(beta)), mults


def trace(a: FieldElement) -> int:
    return a.spec.tr(a.value)


def build_toeplitz_L(a: FieldElement) -> BitMatrix:
    """Lower-triangular Toeplitz matrix with ``L[i][j] = a_{i-j}``."""
    n = a.spec.n
    c = a.coeffs
    return BitMatrix.from_array([[c[i - j] if i >= j else 0 for j in range(n)] for i in range(n)])


def build_toeplitz_U(a: FieldElement) -> BitMatrix:
    """``(n-1) x n`` matrix with ``U[i][j] = a_{n+i-j}`` for ``j > i``.

    ``U @ b`` gives the coefficients of ``x^n .. x^(2n-2)`` of the unreduced product.
    """
    n = a.spec.n
    c = a.coeffs
    rows = [[c[n + i - j] if j > i else 0 for j in range(n)] for i in range(n - 1)]
    return BitMatrix(n - 1, n, rows)


@lru_cache(maxsize=None)
def build_reduction_matrix(spec: FieldSpec) -> BitMatrix:
    """``n x (n-1)`` matrix whose column ``j`` holds ``x^(n+j) mod p``."""
    return BitMatrix.from_columns([spec.reduce(1 << (spec.n + j)) for j in range(spec.n - 1)], spec.n)


@lru_cache(maxsize=None)
def frobenius_matrix(spec: FieldSpec, e: int) -> BitMatrix:
    """Matrix of ``a -> a^(2^e)`` acting on coefficient vectors."""
    if e < 0:
        raise ValueError("exponent must be non-negative")
    return BitMatrix.from_columns([spec.frob(1 << j, e) for j in range(spec.n)], spec.n)


def squaring_matrix(spec: FieldSpec) -> BitMatrix:
    return frobenius_matrix(spec, 1)


@lru_cache(maxsize=None)
def constant_mul_matrix(spec: FieldSpec, c: int) -> BitMatrix:
    """Matrix of ``a -> c * a``."""
    return BitMatrix.from_columns([spec.mul(c, 1 << j) for j in range(spec.n)], spec.n)


def mastrovito_product(a: FieldElement, b: FieldElement) -> FieldElement:
    """``L b + M (U b)``: the product assembled from the three matrices."""
    if a.spec != b.spec:
        raise FieldMismatchError(f"{a.spec} vs {b.spec}")
    beta = b.coeffs
    low = build_toeplitz_L(a) @ beta
    high = build_toeplitz_U(a) @ beta
    gamma = low ^ (build_reduction_matrix(a.spec) @ high)
    return a.spec.element(gamma)

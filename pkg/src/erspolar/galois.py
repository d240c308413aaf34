"""Arithmetic in GF(2^n), 2 <= n <= 10.

Elements are plain integers whose bit ``j`` is the coefficient of ``alpha**j``
(the binary composition of the element), so ``bits_of(a)[j] == (a >> j) & 1``.
Scalar arithmetic goes through log/antilog tables; the same tables back a full
multiplication table used by the vectorized matrix helpers.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# Conventional primitive polynomials, x^n term included.
DEFAULT_PRIM_POLY = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
}


class FieldError(ValueError):
    """Invalid field parameters or an undefined field operation."""


class FieldSpec:
    """GF(2^n) context built from a primitive polynomial.

    Parameters
    ----------
    n : int
        Extension degree, 2..10.
    prim_poly : int, optional
        Primitive polynomial as an (n+1)-bit mask. Defaults to
        ``DEFAULT_PRIM_POLY[n]``.

    Raises
    ------
    FieldError
        If ``n`` is out of range, the polynomial has the wrong degree, or the
        polynomial is not primitive.
    """

    def __init__(self, n: int, prim_poly: int | None = None) -> None:
        if not 2 <= n <= 10:
            raise FieldError(f"field exponent n={n} outside supported range 2..10")
        if prim_poly is None:
            prim_poly = DEFAULT_PRIM_POLY[n]
        if prim_poly.bit_length() != n + 1:
            raise FieldError(
                f"polynomial {prim_poly:#b} has degree {prim_poly.bit_length() - 1}, expected {n}"
            )
        self.n = n
        self.prim_poly = prim_poly
        self.size = 1 << n
        self.order = self.size - 1  # multiplicative group order

        exp = np.zeros(2 * self.order, dtype=np.int64)
        log = np.full(self.size, -1, dtype=np.int64)
        x = 1
        for k in range(self.order):
            if log[x] >= 0 or x == 0:
                raise FieldError(
                    f"polynomial {prim_poly:#b} is not primitive: "
                    f"alpha^{k} repeats alpha^{log[x] if x else '?'} (value {x})"
                )
            exp[k] = x
            log[x] = k
            x <<= 1
            if x & self.size:
                x ^= prim_poly
        if x != 1:
            raise FieldError(f"polynomial {prim_poly:#b} is not primitive: alpha^{self.order} != 1")
        exp[self.order:] = exp[: self.order]
        exp.flags.writeable = False
        log.flags.writeable = False
        self.exp = exp
        self.log = log

        nz = np.arange(1, self.size)
        mul_table = np.zeros((self.size, self.size), dtype=np.int64)
        mul_table[1:, 1:] = exp[(log[nz][:, None] + log[nz][None, :]) % self.order]
        mul_table.flags.writeable = False
        self.mul_table = mul_table
        inv_table = np.zeros(self.size, dtype=np.int64)
        inv_table[1:] = exp[(-log[nz]) % self.order]
        inv_table.flags.writeable = False
        self.inv_table = inv_table

    def __repr__(self) -> str:
        return f"FieldSpec(n={self.n}, prim_poly={self.prim_poly:#b})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and (self.n, self.prim_poly) == (other.n, other.prim_poly)

    def __hash__(self) -> int:
        return hash((self.n, self.prim_poly))

    # scalar arithmetic -------------------------------------------------

    def _check(self, a: int) -> int:
        if not 0 <= a < self.size:
            raise FieldError(f"{a} is not an element of GF(2^{self.n})")
        return a

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % self.order])

    def inv(self, a: int) -> int:
        if self._check(a) == 0:
            raise FieldError("zero has no multiplicative inverse")
        return int(self.exp[(-self.log[a]) % self.order])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """``a**e``; ``0**0`` is 1 and negative exponents invert."""
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise FieldError("zero has no multiplicative inverse")
            return 0
        return int(self.exp[(self.log[a] * e) % self.order])

    def alpha_pow(self, k: int) -> int:
        return int(self.exp[k % self.order])

    def bits_of(self, a: int) -> tuple[int, ...]:
        self._check(a)
        return tuple((a >> j) & 1 for j in range(self.n))

    def from_bits(self, bits) -> int:
        bits = list(bits)
        if len(bits) != self.n:
            raise FieldError(f"expected {self.n} bits, got {len(bits)}")
        value = 0
        for j, b in enumerate(bits):
            if b not in (0, 1):
                raise FieldError(f"bit {j} is {b!r}, expected 0 or 1")
            value |= int(b) << j
        return value

    # vectorized helpers (numpy int arrays of elements) ----------------

    def vmul(self, a, b) -> np.ndarray:
        return self.mul_table[np.asarray(a), np.asarray(b)]

    def matmul(self, A, B) -> np.ndarray:
        """Matrix product over GF(2^n) of integer arrays ``A @ B``."""
        A = np.atleast_2d(np.asarray(A, dtype=np.int64))
        B = np.atleast_2d(np.asarray(B, dtype=np.int64))
        if A.shape[1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
        prods = self.mul_table[A[:, :, None], B[None, :, :]]
        return np.bitwise_xor.reduce(prods, axis=1)

    def vecmat(self, v, B) -> np.ndarray:
        """Row vector(s) times matrix; ``v`` may carry leading batch axes."""
        v = np.asarray(v, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        prods = self.mul_table[v[..., :, None], B]
        return np.bitwise_xor.reduce(prods, axis=-2)

    def to_bits(self, a) -> np.ndarray:
        """Bit planes of an element array: output shape ``a.shape + (n,)``."""
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] >> np.arange(self.n)) & 1

    def from_bit_planes(self, bits) -> np.ndarray:
        bits = np.asarray(bits, dtype=np.int64)
        return (bits << np.arange(self.n)).sum(axis=-1)


@lru_cache(maxsize=None)
def field_new(n: int, prim_poly: int | None = None) -> FieldSpec:
    """Cached :class:`FieldSpec` constructor."""
    return FieldSpec(n, prim_poly)


def poly_mulmod(a: int, b: int, poly: int) -> int:
    """Schoolbook carry-less product of ``a`` and ``b`` reduced modulo ``poly``.

    Independent of the table path; used to cross-check it.
    """
    deg = poly.bit_length() - 1
    prod = 0
    while b:
        if b & 1:
            prod ^= a
        b >>= 1
        a <<= 1
    for shift in range(prod.bit_length() - 1 - deg, -1, -1):
        if prod >> (shift + deg) & 1:
            prod ^= poly << shift
    return prod


def is_primitive(poly: int) -> bool:
    """Brute force: does x cycle through every nonzero residue mod ``poly``?"""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    seen = set()
    x = 1
    for _ in range((1 << deg) - 1):
        if x in seen or x == 0:
            return False
        seen.add(x)
        x = poly_mulmod(x, 2, poly)
    return x == 1 and len(seen) == (1 << deg) - 1

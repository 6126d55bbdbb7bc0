"""Exact arithmetic in a prime field GF(q).

Every other layer of the package works over a single ``PrimeField``: matrix
algebra, query encoding, decoding, and the privacy verifiers all reduce to
add/mul/inv modulo a prime.  Moduli are restricted below 2**31 so that numpy
int64 products never overflow.
"""

from __future__ import annotations

import numpy as np

MAX_MODULUS = 1 << 31


class FieldError(Exception):
    """Base class for field arithmetic errors."""


class NonPrimeModulus(FieldError):
    """Raised when a field is requested for a composite or too-small modulus."""


class DivisionByZero(FieldError):
    """Raised when inverting the zero element."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (exact for n < 3.3e24)."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    if n in small:
        return True
    if any(n % p == 0 for p in small):
        return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    c = max(n, 2)
    while not is_prime(c):
        c += 1
    return c


class PrimeField:
    """The field GF(q) for a prime q, with scalar and numpy-array arithmetic.

    Instances are immutable and safe to share across threads; all operations
    are pure functions of their arguments.
    """

    __slots__ = ("q", "_block")

    def __init__(self, q: int):
        if not isinstance(q, (int, np.integer)) or q < 2:
            raise NonPrimeModulus(f"modulus must be a prime >= 2, got {q!r}")
        q = int(q)
        if q >= MAX_MODULUS:
            raise NonPrimeModulus(f"modulus {q} exceeds the 2**31 limit")
        if not is_prime(q):
            raise NonPrimeModulus(f"{q} is not prime")
        self.q = q
        # Largest inner-dimension chunk whose accumulated products stay below 2**62.
        self._block = max(1, (1 << 62) // ((q - 1) * (q - 1)))

    def __repr__(self):
        return f"PrimeField({self.q})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self):
        return hash(("PrimeField", self.q))

    # -- scalar API ---------------------------------------------------------

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self, value % self.q)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def neg(self, a: int) -> int:
        return (-a) % self.q

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise DivisionByZero("0 has no multiplicative inverse")
        return pow(a, self.q - 2, self.q)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("exponent must be nonnegative")
        if a % self.q == 0:
            return 1 if e == 0 else 0  # fixes 0**0 = 1
        return pow(a % self.q, e, self.q)

    # -- numpy array API ----------------------------------------------------

    def array(self, values) -> np.ndarray:
        """Reduce arbitrary integer data into a canonical int64 array mod q."""
        return np.asarray(values, dtype=np.int64) % self.q

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def random_array(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    def pow_array(self, base: np.ndarray, e: int) -> np.ndarray:
        """Elementwise base**e mod q by square and multiply."""
        if e < 0:
            raise ValueError("exponent must be nonnegative")
        result = np.ones_like(base)
        acc = base % self.q
        while e:
            if e & 1:
                result = result * acc % self.q
            acc = acc * acc % self.q
            e >>= 1
        return result

    def inv_array(self, values: np.ndarray) -> np.ndarray:
        values = values % self.q
        if np.any(values == 0):
            raise DivisionByZero("0 has no multiplicative inverse")
        return self.pow_array(values, self.q - 2)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """a @ b mod q, accumulating in chunks so int64 never overflows."""
        a = np.atleast_2d(a)
        inner = a.shape[-1]
        if inner <= self._block:
            return (a @ b) % self.q
        out = None
        for start in range(0, inner, self._block):
            piece = (a[:, start:start + self._block] @ b[start:start + self._block]) % self.q
            out = piece if out is None else (out + piece) % self.q
        return out


class FieldElement:
    """A value in [0, q-1] bound to its PrimeField."""

    __slots__ = ("field", "value")

    def __init__(self, field: PrimeField, value: int):
        self.field = field
        self.value = value % field.q

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("elements belong to different fields")
            return other.value
        return int(other) % self.field.q

    def __add__(self, other):
        return FieldElement(self.field, self.value + self._coerce(other))

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        return FieldElement(self.field, self.value - self._coerce(other))

    def __rsub__(self, other):
        return FieldElement(self.field, self._coerce(other) - self.value)

    def __mul__(self, other):
        return FieldElement(self.field, self.value * self._coerce(other))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __neg__(self):
        return FieldElement(self.field, -self.value)

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __truediv__(self, other):
        return self * FieldElement(self.field, self._coerce(other)).inverse()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        return self.value == int(other) % self.field.q

    def __hash__(self):
        return hash((self.field.q, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"GF({self.field.q})({self.value})"


def field_new(q: int) -> PrimeField:
    """Construct GF(q), rejecting composite moduli."""
    return PrimeField(q)

"""Finite fields GF(p) and GF(p^m).

Elements are carried internally as integer *codes* in ``[0, q)``: the
coefficient of ``x^i`` in the power basis is the i-th base-p digit.  All
arithmetic goes through lookup tables built once per field, which is what
keeps the exhaustive searches elsewhere in the package affordable.

:class:`FieldElement` is the user-facing scalar; matrices and vectors hold
bare codes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import TYPE_CHECKING, Iterator, NamedTuple, Sequence

from .errors import DomainError

if TYPE_CHECKING:
    from .linalg import MatrixF

# Lookup tables are q x q; beyond this they stop being cheap.
MAX_ORDER = 256


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p**m``; raise :class:`DomainError` if q is not a prime power."""
    if q < 2:
        raise DomainError(f"field order must be >= 2, got {q}")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise DomainError(f"{q} is not a prime power")
    return p, m


def to_digits(code: int, base: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        code, d = divmod(code, base)
        out.append(d)
    return out


def from_digits(digits: Sequence[int], base: int) -> int:
    code = 0
    for d in reversed(digits):
        code = code * base + d
    return code


class Tables(NamedTuple):
    add: list[list[int]]
    sub: list[list[int]]
    mul: list[list[int]]
    neg: list[int]
    inv: list[int]  # inv[0] is a placeholder 0


# --- polynomials over a field, coefficient lists low-to-high of codes -------


def _trim(poly: list[int]) -> list[int]:
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def poly_mod(num: Sequence[int], den: Sequence[int], t: Tables) -> list[int]:
    """Remainder of ``num`` modulo ``den`` (``den`` nonzero, trimmed)."""
    num = _trim(list(num))
    den = _trim(list(den))
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = t.inv[den[-1]]
    dd = len(den) - 1
    while len(num) - 1 >= dd and num:
        shift = len(num) - 1 - dd
        factor = t.mul[num[-1]][lead_inv]
        mf = t.mul[factor]
        for k, c in enumerate(den):
            num[shift + k] = t.sub[num[shift + k]][mf[c]]
        _trim(num)
    return num


def poly_mulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], t: Tables) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if not x:
            continue
        mx = t.mul[x]
        for j, y in enumerate(b):
            prod[i + j] = t.add[prod[i + j]][mx[y]]
    return poly_mod(prod, modulus, t)


def _monic_polys(q: int, degree: int) -> Iterator[list[int]]:
    for low in itertools.product(range(q), repeat=degree):
        yield list(reversed(low)) + [1]


def is_irreducible(poly: Sequence[int], field: FieldSpec) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _trim(list(poly))
    degree = len(poly) - 1
    if degree < 1:
        return False
    t = field.tables
    for d in range(1, degree // 2 + 1):
        for g in _monic_polys(field.q, d):
            if not poly_mod(poly, g, t):
                return False
    return True


def find_irreducible(field: FieldSpec, degree: int) -> tuple[int, ...]:
    """Smallest monic irreducible of the given degree over ``field``.

    Candidates are ordered by their coefficients read from ``x^(degree-1)``
    down to the constant term, compared lexicographically by code.
    """
    if degree < 1:
        raise DomainError("degree must be >= 1")
    q = field.q
    for code in range(q**degree):
        poly = to_digits(code, q, degree) + [1]
        if is_irreducible(poly, field):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # impossible over a finite field


def multiplication_matrix(f: Sequence[int], modulus: Sequence[int], base: FieldSpec) -> list[list[int]]:
    """Matrix of ``v -> v*f`` on ``base[y]/(modulus)`` in the basis 1, y, ..., y^(k-1).

    Row ``t`` holds the coordinates of ``y^t * f`` (row-vector convention).
    """
    t = base.tables
    k = len(modulus) - 1
    rows = []
    power = [1]
    for _ in range(k):
        r = poly_mulmod(power, f, modulus, t) if any(f) else []
        rows.append(r + [0] * (k - len(r)))
        power = poly_mulmod(power, [0, 1], modulus, t)
    return rows


# --- the field description -------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """Description of GF(p^m).

    ``modulus`` lists the coefficients of a monic irreducible polynomial of
    degree m from low to high degree; it is ``None`` for prime fields and
    defaults to :func:`find_irreducible` otherwise.
    """

    p: int
    m: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"characteristic {self.p} is not prime")
        if self.m < 1:
            raise DomainError(f"extension degree must be >= 1, got {self.m}")
        if self.p**self.m > MAX_ORDER:
            raise DomainError(f"GF({self.p}^{self.m}) exceeds the supported order {MAX_ORDER}")
        if self.m == 1:
            if self.modulus is not None:
                raise DomainError("prime fields take no modulus")
            return
        base = FieldSpec(self.p)
        if self.modulus is None:
            object.__setattr__(self, "modulus", find_irreducible(base, self.m))
            return
        mod = tuple(int(c) for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != self.m + 1 or mod[-1] != 1:
            raise DomainError(f"modulus {mod} is not monic of degree {self.m}")
        if any(not 0 <= c < self.p for c in mod):
            raise DomainError(f"modulus coefficients must lie in [0, {self.p})")
        if not is_irreducible(mod, base):
            raise DomainError(f"modulus {mod} is reducible over GF({self.p})")

    @classmethod
    def from_order(cls, q: int, modulus: Sequence[int] | None = None) -> FieldSpec:
        p, m = prime_power(q)
        return cls(p, m, tuple(modulus) if modulus is not None else None)

    @property
    def q(self) -> int:
        return self.p**self.m

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    @cached_property
    def tables(self) -> Tables:
        return _build_tables(self.p, self.m, self.modulus)

    def __call__(self, value: int | Sequence[int]) -> FieldElement:
        """Element from a code (int) or a coefficient sequence (low to high)."""
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise DomainError("element belongs to a different field")
            return value
        if isinstance(value, int):
            if self.m == 1:
                return FieldElement(self, value % self.p)
            if not 0 <= value < self.q:
                raise DomainError(f"code {value} out of range for {self}")
            return FieldElement(self, tuple(to_digits(value, self.p, self.m)))
        coeffs = [int(c) % self.p for c in value]
        if self.m == 1:
            if len(coeffs) != 1:
                raise DomainError("prime-field element needs exactly one coefficient")
            return FieldElement(self, coeffs[0])
        poly = poly_mod(coeffs, self.modulus, FieldSpec(self.p).tables)
        return FieldElement(self, tuple(poly + [0] * (self.m - len(poly))))

    @property
    def zero(self) -> FieldElement:
        return self(0)

    @property
    def one(self) -> FieldElement:
        return self(1)

    def elements(self) -> Iterator[FieldElement]:
        return (self(c) for c in range(self.q))

    def __str__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}; {','.join(map(str, self.modulus))})"


@lru_cache(maxsize=None)
def _build_tables(p: int, m: int, modulus: tuple[int, ...] | None) -> Tables:
    q = p**m
    if m == 1:
        add = [[(a + b) % p for b in range(q)] for a in range(q)]
        sub = [[(a - b) % p for b in range(q)] for a in range(q)]
        mul = [[(a * b) % p for b in range(q)] for a in range(q)]
    else:
        digits = [to_digits(c, p, m) for c in range(q)]
        add = [[from_digits([(x + y) % p for x, y in zip(da, db)], p) for db in digits] for da in digits]
        sub = [[from_digits([(x - y) % p for x, y in zip(da, db)], p) for db in digits] for da in digits]
        prime = _build_tables(p, 1, None)
        mul = [[0] * q for _ in range(q)]
        for a in range(1, q):
            for b in range(a, q):
                r = poly_mulmod(digits[a], digits[b], modulus, prime)
                mul[a][b] = mul[b][a] = from_digits(r, p)
    neg = [sub[0][a] for a in range(q)]
    inv = [0] * q
    for a in range(1, q):
        row = mul[a]
        inv[a] = next(b for b in range(1, q) if row[b] == 1)
    return Tables(add, sub, mul, neg, inv)


# --- scalars ----------------------------------------------------------------


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    rep: int | tuple[int, ...]

    def __post_init__(self):
        if self.spec.m == 1:
            if not isinstance(self.rep, int) or not 0 <= self.rep < self.spec.p:
                raise DomainError(f"{self.rep!r} is not a reduced element of {self.spec}")
        elif (
            not isinstance(self.rep, tuple)
            or len(self.rep) != self.spec.m
            or any(not 0 <= c < self.spec.p for c in self.rep)
        ):
            raise DomainError(f"{self.rep!r} is not a reduced element of {self.spec}")

    @property
    def code(self) -> int:
        if self.spec.m == 1:
            return self.rep
        return from_digits(self.rep, self.spec.p)

    def _other(self, other) -> int:
        if isinstance(other, int):
            return self.spec(other).code
        if not isinstance(other, FieldElement) or other.spec != self.spec:
            raise DomainError("operands belong to different fields")
        return other.code

    def __add__(self, other):
        return self.spec(self.spec.tables.add[self.code][self._other(other)])

    def __sub__(self, other):
        return self.spec(self.spec.tables.sub[self.code][self._other(other)])

    def __mul__(self, other):
        return self.spec(self.spec.tables.mul[self.code][self._other(other)])

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return self.spec(self.spec.tables.neg[self.code])

    def inverse(self) -> FieldElement:
        if self.code == 0:
            raise ZeroDivisionError(f"zero has no inverse in {self.spec}")
        return self.spec(self.spec.tables.inv[self.code])

    def __truediv__(self, other):
        return self * self.spec(self._other(other)).inverse()

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"{self.spec}({self.code})"


def field_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def field_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def regular_representation(f: FieldElement, base: FieldSpec) -> MatrixF:
    """Matrix of multiplication by ``f`` on GF(p^m) viewed as a GF(p)-space.

    Power basis ``1, x, ..., x^(m-1)``; row t is ``x^t * f``.
    """
    from .linalg import MatrixF

    spec = f.spec
    if not base.is_prime_field or base.p != spec.p:
        raise DomainError(f"{base} is not the prime subfield of {spec}")
    coeffs = [f.rep] if spec.m == 1 else list(f.rep)
    modulus = spec.modulus if spec.m > 1 else (0, 1)
    return MatrixF.from_rows(base, multiplication_matrix(coeffs, modulus, base))

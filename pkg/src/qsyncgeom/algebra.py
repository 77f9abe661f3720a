"""Arithmetic in GF(2)[x] and in the extension fields GF(2^e).

Polynomials are packed into Python integers (bit i is the coefficient of
x^i).  Hot loops work on raw ints; :class:`BitPoly` is the immutable public
wrapper.
"""

from __future__ import annotations

import math
import re
from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from ._primitive_table import PRIMITIVE_POLYS

MAX_DEGREE = 1 << 25
MAX_FIELD_DEGREE = 32
LOG_TABLE_MAX_DEGREE = 24
DEFAULT_ORDER_CAP = 1 << 22


class InvariantViolation(RuntimeError):
    """An internal consistency check failed (wrong field, bad indexing, ...)."""


# ---------------------------------------------------------------------------
# raw-int kernels

_SPREAD = np.array(
    [sum(((b >> i) & 1) << (2 * i) for i in range(8)) for b in range(256)],
    dtype="<u2",
)


def _square(a: int) -> int:
    """Square in GF(2)[x]: interleave zero bits between the coefficients."""
    if a < 1 << 64:
        r = 0
        while a:
            low = a & -a
            r |= low * low
            a ^= low
        return r
    raw = np.frombuffer(a.to_bytes((a.bit_length() + 7) // 8, "little"), dtype=np.uint8)
    return int.from_bytes(_SPREAD[raw].tobytes(), "little")


def _clmul(a: int, b: int) -> int:
    if a.bit_count() < b.bit_count():
        a, b = b, a
    if b.bit_length() <= 64:
        r = 0
        while b:
            low = b & -b
            r ^= a << (low.bit_length() - 1)
            b ^= low
        return r
    # byte-windowed schoolbook product
    table = [0] * 256
    for k in range(1, 256):
        low = k & -k
        table[k] = table[k ^ low] ^ (a << (low.bit_length() - 1))
    r = 0
    data = b.to_bytes((b.bit_length() + 7) // 8, "little")
    for i, byte in enumerate(data):
        if byte:
            r ^= table[byte] << (8 * i)
    return r


@lru_cache(maxsize=64)
def _reduction_table(m: int) -> tuple[list[int], list[int]]:
    """For every byte value T, the multiple q_T*m whose top 8 bits equal T."""
    dm = m.bit_length() - 1
    mults = [0] * 256
    quots = [0] * 256
    for top in range(256):
        r = top << dm
        q = 0
        for i in range(7, -1, -1):
            if (r >> (dm + i)) & 1:
                r ^= m << i
                q |= 1 << i
        mults[top] = (top << dm) ^ r
        quots[top] = q
    return mults, quots


def _mod_direct(a: int, m: int, dm: int) -> int:
    la = a.bit_length()
    if la - 1 - dm >= 8:
        mults = _reduction_table(m)[0]
        while la - 1 - dm >= 8:
            s = la - 8
            a ^= mults[a >> s] << (s - dm)
            la = a.bit_length()
    while la - 1 >= dm:
        a ^= m << (la - 1 - dm)
        la = a.bit_length()
    return a


def _mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    if dm < 0:
        raise ZeroDivisionError("polynomial division by zero")
    if dm == 0:
        return 0
    la = a.bit_length()
    if la <= dm:
        return a
    if la <= 4 * dm + 256:
        return _mod_direct(a, m, dm)
    # long dividend: fold byte-aligned chunks in from the top so every
    # reduction step touches only ~2*deg(m) bits
    chunk = max(1, dm // 8)
    data = a.to_bytes((la + 7) // 8, "little")
    nbytes = len(data)
    r = 0
    hi = nbytes
    first = nbytes % chunk or chunk
    lo = hi - first
    while hi > 0:
        r = _mod_direct((r << (8 * (hi - lo))) | int.from_bytes(data[lo:hi], "little"), m, dm)
        hi = lo
        lo = max(0, hi - chunk)
    return r


def _divmod(a: int, b: int) -> tuple[int, int]:
    db = b.bit_length() - 1
    if db < 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = 0
    la = a.bit_length()
    if la - 1 - db >= 8:
        mults, quots = _reduction_table(b)
        while la - 1 - db >= 8:
            s = la - 8
            top = a >> s
            a ^= mults[top] << (s - db)
            q ^= quots[top] << (s - db)
            la = a.bit_length()
    while la - 1 >= db:
        shift = la - 1 - db
        a ^= b << shift
        q ^= 1 << shift
        la = a.bit_length()
    return q, a


def _x_pow_mod(exp: int, m: int) -> int:
    """x^exp mod m by left-to-right square-and-multiply."""
    dm = m.bit_length() - 1
    if dm < 1:
        if dm == 0:
            return 0
        raise ZeroDivisionError("polynomial division by zero")
    r = 1
    for bit in bin(exp)[2:] if exp else "":
        r = _square(r)
        if r.bit_length() - 1 >= dm:
            r = _mod(r, m)
        if bit == "1":
            r <<= 1
            if (r >> dm) & 1:
                r ^= m
    return r


# ---------------------------------------------------------------------------
# BitPoly


@dataclass(frozen=True, slots=True)
class BitPoly:
    """Polynomial over GF(2), packed little-endian into ``bits``.

    The zero polynomial has ``degree == -1``.
    """

    bits: int = 0

    def __post_init__(self) -> None:
        if self.bits < 0:
            raise ValueError("coefficient bits must be non-negative")
        if self.bits.bit_length() - 1 > MAX_DEGREE:
            raise ValueError(f"degree exceeds the representable cap 2^25 ({MAX_DEGREE})")

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> BitPoly:
        bits = 0
        for e in exps:
            bits ^= 1 << e
        return cls(bits)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> BitPoly:
        """Build from a low-to-high coefficient sequence of 0/1 values."""
        return cls(sum(1 << i for i, c in enumerate(coeffs) if c & 1))

    @classmethod
    def x_n_minus_1(cls, n: int) -> BitPoly:
        return cls((1 << n) | 1)

    @property
    def degree(self) -> int:
        return self.bits.bit_length() - 1

    @property
    def coeffs(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.bits.bit_length())]

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def exponents(self) -> list[int]:
        """Exponents with nonzero coefficient, descending."""
        b = self.bits
        out = []
        while b:
            top = b.bit_length() - 1
            out.append(top)
            b ^= 1 << top
        return out

    def reciprocal(self) -> BitPoly:
        """x^deg * p(1/x)."""
        if not self.bits:
            return self
        d = self.degree
        return BitPoly(int(format(self.bits, f"0{d + 1}b")[::-1], 2))

    def __bool__(self) -> bool:
        return self.bits != 0

    def __add__(self, other: BitPoly) -> BitPoly:
        return BitPoly(self.bits ^ other.bits)

    __sub__ = __add__
    __xor__ = __add__

    def __mul__(self, other: BitPoly) -> BitPoly:
        return poly_mul(self, other)

    def __divmod__(self, other: BitPoly) -> tuple[BitPoly, BitPoly]:
        return poly_divmod(self, other)

    def __floordiv__(self, other: BitPoly) -> BitPoly:
        return poly_divmod(self, other)[0]

    def __mod__(self, other: BitPoly) -> BitPoly:
        return BitPoly(_mod(self.bits, other.bits))

    def __str__(self) -> str:
        return format_sparse(self)

    def __repr__(self) -> str:
        if self.degree > 64:
            return f"BitPoly(<degree {self.degree}, weight {self.weight}>)"
        return f"BitPoly({format_sparse(self)})"


ONE = BitPoly(1)
X = BitPoly(2)


def poly_mul(a: BitPoly, b: BitPoly) -> BitPoly:
    return BitPoly(_clmul(a.bits, b.bits))


def poly_divmod(a: BitPoly, b: BitPoly) -> tuple[BitPoly, BitPoly]:
    """Quotient and remainder, ``a == q*b + r`` with ``deg r < deg b``."""
    if not b.bits:
        raise ZeroDivisionError("polynomial division by zero")
    q, r = _divmod(a.bits, b.bits)
    return BitPoly(q), BitPoly(r)


def poly_modexp(exp: int, modulus: BitPoly) -> BitPoly:
    """``x^exp mod modulus`` using O(log exp) squarings."""
    if exp < 0:
        raise ValueError("exponent must be non-negative")
    if modulus.degree < 1:
        raise ValueError("modulus must have degree >= 1")
    return BitPoly(_x_pow_mod(exp, modulus.bits))


def divides(d: BitPoly, a: BitPoly) -> bool:
    return _mod(a.bits, d.bits) == 0


def divides_x_n_minus_1(g: BitPoly, n: int) -> bool:
    if g.degree == 0:
        return True
    return g.degree <= n and _x_pow_mod(n, g.bits) == 1


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def poly_order(f: BitPoly, divisor_hint: int | None = None, cap: int = DEFAULT_ORDER_CAP) -> int:
    """Smallest e > 0 with x^e = 1 (mod f).

    With ``divisor_hint=n`` the caller promises f | x^n - 1, so the order is a
    divisor of n and is found by stripping prime factors from n.  Without a
    hint the powers of x are walked one by one up to ``cap``.
    """
    if not f.bits & 1:
        raise ValueError("order undefined: f(0) = 0")
    if f.degree == 0:
        return 1
    m = f.bits
    if divisor_hint is not None:
        n = divisor_hint
        if _x_pow_mod(n, m) != 1:
            raise ValueError(f"f does not divide x^{n} - 1")
        e = n
        for p in prime_factors(n):
            while e % p == 0 and _x_pow_mod(e // p, m) == 1:
                e //= p
        return e
    dm = f.degree
    r = 1
    for e in range(1, cap + 1):
        r <<= 1
        if (r >> dm) & 1:
            r ^= m
        if r == 1:
            return e
    raise ValueError(f"order exceeds cap={cap}; pass divisor_hint")


# ---------------------------------------------------------------------------
# text formats


def format_sparse(p: BitPoly) -> str:
    if not p.bits:
        return "0"
    terms = []
    for e in p.exponents():
        terms.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
    return "+".join(terms)


def format_hex(p: BitPoly) -> str:
    return hex(p.bits)


_TERM = re.compile(r"^(?:1|x(?:\^(\d+))?)$")


def parse_poly(text: str) -> BitPoly:
    """Parse ``x^15+x^7+1`` or little-endian hex ``0x8081``."""
    s = text.strip().replace(" ", "")
    if s.lower().startswith("0x"):
        return BitPoly(int(s, 16))
    if s == "0":
        return BitPoly(0)
    bits = 0
    for term in s.split("+"):
        match = _TERM.match(term)
        if match is None:
            raise ValueError(f"cannot parse polynomial term {term!r}")
        if term == "1":
            e = 0
        else:
            e = int(match.group(1)) if match.group(1) is not None else 1
        bits ^= 1 << e
    return BitPoly(bits)


# ---------------------------------------------------------------------------
# primitive polynomials


def is_primitive(p: BitPoly) -> bool:
    """True iff the root of ``p`` has multiplicative order 2^deg - 1."""
    e = p.degree
    if e < 1 or not p.bits & 1:
        return False
    order = (1 << e) - 1
    if _x_pow_mod(order, p.bits) != 1:
        return False
    return all(_x_pow_mod(order // r, p.bits) != 1 for r in prime_factors(order))


_OVERRIDES: dict[int, int] = {}


def primitive_poly(e: int) -> BitPoly:
    """Primitive polynomial used for GF(2^e): the pinned table entry unless overridden."""
    if not 1 <= e <= MAX_FIELD_DEGREE:
        raise ValueError(f"degree {e} outside 1..{MAX_FIELD_DEGREE}")
    return BitPoly(_OVERRIDES.get(e, PRIMITIVE_POLYS[e]))


@contextmanager
def primitive_overrides(mapping: dict[int, int | BitPoly]):
    """Temporarily replace the default modulus for some degrees.

    Overrides are not validated here; building a field from a non-primitive
    override raises ``ValueError``.
    """
    saved = dict(_OVERRIDES)
    try:
        for e, p in mapping.items():
            bits = p.bits if isinstance(p, BitPoly) else int(p)
            if bits.bit_length() - 1 != int(e):
                raise ValueError(f"override for degree {e} has degree {bits.bit_length() - 1}")
            _OVERRIDES[int(e)] = bits
        yield
    finally:
        _OVERRIDES.clear()
        _OVERRIDES.update(saved)


# ---------------------------------------------------------------------------
# extension fields


def _build_tables(e: int, modulus: int) -> tuple[np.ndarray, np.ndarray]:
    order = (1 << e) - 1
    exp = np.empty(order, dtype=np.int64)
    seed = min(order, 4096)
    v = 1
    for i in range(seed):
        exp[i] = v
        v <<= 1
        if (v >> e) & 1:
            v ^= modulus
    filled = seed
    while filled < order:
        # exp[filled + i] = exp[i] * alpha^filled, a GF(2)-linear map of exp[i]
        step = min(filled, order - filled)
        c = int(exp[filled - 1])
        c <<= 1
        if (c >> e) & 1:
            c ^= modulus
        src = exp[:step]
        out = np.zeros(step, dtype=np.int64)
        for b in range(e):
            out ^= ((src >> b) & 1) * c
            c <<= 1
            if (c >> e) & 1:
                c ^= modulus
        exp[filled : filled + step] = out
        filled += step
    log = np.full(order + 1, -1, dtype=np.int32)
    log[exp] = np.arange(order, dtype=np.int32)
    if (log[1:] < 0).any():
        raise InvariantViolation("modulus is not primitive: powers of alpha miss some elements")
    return exp.astype(np.int32), log


class GF2m:
    """The field GF(2^e) as GF(2)[x]/(modulus), with alpha = x primitive.

    Elements are plain ints (bit i = coefficient of alpha^i).  Discrete
    log/exp tables are built when ``e <= 24``; larger fields multiply by
    carry-less product and reduction.
    """

    def __init__(self, e: int, modulus: BitPoly | int | None = None, *, tables: bool | None = None):
        if not 1 <= e <= MAX_FIELD_DEGREE:
            raise ValueError(f"field degree {e} outside 1..{MAX_FIELD_DEGREE}")
        if modulus is None:
            modulus = primitive_poly(e)
        elif isinstance(modulus, int):
            modulus = BitPoly(modulus)
        if modulus.degree != e:
            raise ValueError(f"modulus {modulus} does not have degree {e}")
        if not is_primitive(modulus):
            raise ValueError(f"modulus {modulus} is not primitive")
        self.e = e
        self.modulus = modulus
        self.order = (1 << e) - 1
        if tables is None:
            tables = e <= LOG_TABLE_MAX_DEGREE
        self.has_tables = bool(tables)
        self._exp_list: list[int] | None = None
        self._log_list: list[int] | None = None
        if self.has_tables:
            self.exp_table, self.log_table = _build_tables(e, modulus.bits)
            if e <= 20:
                self._exp_list = self.exp_table.tolist()
                self._log_list = self.log_table.tolist()

    def __repr__(self) -> str:
        return f"GF2m(e={self.e}, modulus={self.modulus})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GF2m) and (self.e, self.modulus) == (other.e, other.modulus)

    def __hash__(self) -> int:
        return hash((self.e, self.modulus.bits))

    # int-level operations -------------------------------------------------

    def exp(self, k: int) -> int:
        """alpha^k."""
        k %= self.order
        if self._exp_list is not None:
            return self._exp_list[k]
        if self.has_tables:
            return int(self.exp_table[k])
        return _mod(1 << k, self.modulus.bits) if k < 2 * self.e else _x_pow_mod(k, self.modulus.bits)

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("log of zero")
        if self._log_list is not None:
            return self._log_list[a]
        if self.has_tables:
            return int(self.log_table[a])
        raise ValueError(f"no discrete-log table for GF(2^{self.e}); cap is {LOG_TABLE_MAX_DEGREE}")

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp_list is not None:
            lg = self._log_list
            return self._exp_list[(lg[a] + lg[b]) % self.order]
        if self.has_tables:
            return int(self.exp_table[(int(self.log_table[a]) + int(self.log_table[b])) % self.order])
        return _mod(_clmul(a, b), self.modulus.bits)

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 1 if k == 0 else 0
        k %= self.order
        if self.has_tables:
            return self.exp(self.log(a) * k)
        r = 1
        base = a
        while k:
            if k & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            k >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.order - 1)

    def trace(self, a: int) -> int:
        """Absolute trace GF(2^e) -> GF(2)."""
        t = 0
        x = a
        for _ in range(self.e):
            t ^= x
            x = self.mul(x, x)
        if t not in (0, 1):
            raise InvariantViolation("trace left GF(2)")
        return t

    # element wrappers ------------------------------------------------------

    def __call__(self, rep: int) -> FieldElem:
        return FieldElem(self, rep)

    @property
    def zero(self) -> FieldElem:
        return FieldElem(self, 0)

    @property
    def one(self) -> FieldElem:
        return FieldElem(self, 1)

    @property
    def alpha(self) -> FieldElem:
        return FieldElem(self, self.exp(1))

    def elements(self) -> list[FieldElem]:
        return [FieldElem(self, r) for r in range(self.order + 1)]


def field(e: int, modulus: int | None = None, *, tables: bool | None = None) -> GF2m:
    """Cached field constructor (fields are immutable once built)."""
    if modulus is None:
        modulus = primitive_poly(e).bits
    if tables is None:
        tables = e <= LOG_TABLE_MAX_DEGREE
    return _field(e, int(modulus), bool(tables))


@lru_cache(maxsize=None)
def _field(e: int, modulus: int, tables: bool) -> GF2m:
    return GF2m(e, modulus, tables=tables)


@dataclass(frozen=True, slots=True)
class FieldElem:
    field: GF2m
    rep: int

    def __post_init__(self) -> None:
        if not 0 <= self.rep <= self.field.order:
            raise ValueError(f"{self.rep:#x} is not reduced modulo {self.field.modulus}")

    def _check(self, other: FieldElem) -> None:
        if other.field != self.field:
            raise ValueError("elements belong to different fields")

    def __add__(self, other: FieldElem) -> FieldElem:
        self._check(other)
        return FieldElem(self.field, self.rep ^ other.rep)

    __sub__ = __add__

    def __mul__(self, other: FieldElem) -> FieldElem:
        self._check(other)
        return FieldElem(self.field, self.field.mul(self.rep, other.rep))

    def __pow__(self, k: int) -> FieldElem:
        return field_pow(self, k)

    def __bool__(self) -> bool:
        return self.rep != 0

    def inverse(self) -> FieldElem:
        return FieldElem(self.field, self.field.inv(self.rep))

    def order(self) -> int:
        """Multiplicative order."""
        if not self.rep:
            raise ValueError("zero has no multiplicative order")
        n = self.field.order
        if self.field.has_tables:
            return n // math.gcd(n, self.field.log(self.rep))
        e = n
        for p in prime_factors(n):
            while e % p == 0 and self.field.pow(self.rep, e // p) == 1:
                e //= p
        return e

    def __repr__(self) -> str:
        return f"FieldElem({self.rep:#x} in GF(2^{self.field.e}))"


def field_pow(base: FieldElem, exp: int) -> FieldElem:
    return FieldElem(base.field, base.field.pow(base.rep, exp))


# ---------------------------------------------------------------------------
# cyclotomic cosets and minimal polynomials


def cyclotomic_coset(j: int, n: int) -> list[int]:
    """Orbit of ``j`` under doubling modulo odd ``n``, sorted."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"n={n} must be odd and positive")
    if not 0 <= j < n:
        raise ValueError(f"j={j} outside 0..{n - 1}")
    out = [j]
    k = (2 * j) % n
    while k != j:
        out.append(k)
        k = (2 * k) % n
    return sorted(out)


def _expand_roots(fld: GF2m, roots: Iterable[int]) -> int:
    """Expand prod (x - r) over ``fld``; must land in GF(2)[x]."""
    coeffs = [1]
    mul = fld.mul
    for r in roots:
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] ^= c
            if c:
                nxt[i] ^= mul(r, c)
        coeffs = nxt
    bits = 0
    for i, c in enumerate(coeffs):
        if c > 1:
            raise InvariantViolation("minimal polynomial has a coefficient outside GF(2)")
        bits |= c << i
    return bits


def _dependency_minpoly(fld: GF2m, powers: Sequence[int]) -> int:
    """Minimal polynomial of gamma as the first GF(2) relation among ``powers`` (gamma^0, gamma^1, ...)."""
    basis: dict[int, tuple[int, int]] = {}  # pivot bit -> (vector, combination)
    for i, v in enumerate(powers):
        vec, combo = v, 1 << i
        while vec:
            top = vec.bit_length() - 1
            if top not in basis:
                basis[top] = (vec, combo)
                break
            bv, bc = basis[top]
            vec ^= bv
            combo ^= bc
        else:
            return combo
    raise InvariantViolation("no linear relation among the given powers")


def _powers(fld: GF2m, k: int) -> list[int]:
    """alpha^(k*i) for i = 0..e."""
    if fld.has_tables:
        idx = (np.arange(fld.e + 1, dtype=np.int64) * k) % fld.order
        return fld.exp_table[idx].tolist()
    gamma, m = fld.exp(k), fld.modulus.bits
    out = [1]
    for _ in range(fld.e):
        out.append(_mod(_clmul(out[-1], gamma), m))
    return out


@lru_cache(maxsize=None)
def _alpha_power_minpoly(fld: GF2m, k: int) -> int:
    """Minimal polynomial of alpha^k, k a representative modulo 2^e - 1."""
    order = fld.order
    exps = cyclotomic_coset(k % order, order)
    if fld._exp_list is not None:
        return _expand_roots(fld, (fld.exp(x) for x in exps))
    mp = _dependency_minpoly(fld, _powers(fld, k))
    if mp.bit_length() - 1 != len(exps):
        raise InvariantViolation("minimal polynomial degree differs from coset size")
    return mp


def minimal_polynomial(j: int, beta: FieldElem, n: int) -> BitPoly:
    """Minimal polynomial over GF(2) of ``beta^j`` where ``beta`` has order ``n``."""
    if not 0 <= j < n:
        raise ValueError(f"j={j} outside 0..{n - 1}")
    fld = beta.field
    coset = cyclotomic_coset(j, n)
    if fld.has_tables:
        scale = fld.order // n
        lb = fld.log(beta.rep)
        if lb % scale:
            raise InvariantViolation("beta does not have order n")
        k = (lb * j) % fld.order
        return BitPoly(_alpha_power_minpoly(fld, min(cyclotomic_coset(k, fld.order))))
    return BitPoly(_expand_roots(fld, (fld.pow(beta.rep, i) for i in coset)))


def order_of_two(n: int) -> int:
    """Smallest e with n | 2^e - 1."""
    if n % 2 == 0:
        raise ValueError("n must be odd")
    if n == 1:
        return 1
    e, v = 1, 2 % n
    while v != 1:
        v = (2 * v) % n
        e += 1
    return e

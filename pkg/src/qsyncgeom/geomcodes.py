"""Generator polynomials, dimensions and parameters of the PG and EG codes.

``C(m,t,2^h)`` is the dual of the span of complemented t-space incidence
vectors of PG(m, 2^h); ``E(m,t,2^h)`` is the dual of the span of t-flat
incidence vectors of EG(m, 2^h).  Both are cyclic and their zeros are given
by 2^h-ary digit-sum conditions on the exponents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import comb

import numpy as np

from .algebra import (
    BitPoly,
    GF2m,
    InvariantViolation,
    _alpha_power_minpoly,
    _clmul,
    cyclotomic_coset,
)
from .algebra import field as cached_field
from .codes import CyclicCode
from .geometry import Family, ambient_degree, point_count

_CHUNK = 1 << 20


@dataclass(frozen=True)
class GeometryCodeSpec:
    family: Family
    m: int
    h: int
    t: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family.parse(self.family))
        check_mht(self.m, self.h, self.t)

    @property
    def n(self) -> int:
        return point_count(self.family, self.m, self.h)


def check_mht(m: int, h: int, t: int) -> None:
    if m < 2 or h < 1:
        raise ValueError(f"need m >= 2 and h >= 1, got m={m}, h={h}")
    if not 1 <= t <= m - 1:
        raise ValueError(f"t={t} outside 1..{m - 1}")


@dataclass(frozen=True)
class CodeParams:
    n: int
    k: int
    d: int
    provenance: dict[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if not 0 < self.k < self.n or not 1 <= self.d <= self.n:
            raise InvariantViolation(f"implausible parameters [{self.n}, {self.k}, {self.d}]")

    def as_tuple(self) -> tuple[int, int, int]:
        return self.n, self.k, self.d


@dataclass(frozen=True)
class IndexSet:
    """Root exponents j in 1..n of a cyclic code (j = n stands for exponent 0)."""

    n: int
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.members:
            arr = np.asarray(self.members, dtype=np.int64)
            if arr.min() < 1 or arr.max() > self.n or np.any(np.diff(arr) <= 0):
                raise InvariantViolation("index set must be sorted and inside 1..n")
            mask = np.zeros(self.n + 1, dtype=bool)
            mask[arr] = True
            doubled = (2 * arr) % self.n
            doubled[doubled == 0] = self.n
            if not mask[doubled].all():
                raise InvariantViolation("index set is not closed under doubling modulo n")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, j: int) -> bool:
        return j in self._set

    @property
    def _set(self) -> frozenset[int]:
        cached = self.__dict__.get("_members_set")
        if cached is None:
            cached = frozenset(self.members)
            object.__setattr__(self, "_members_set", cached)
        return cached

    def residues(self) -> list[int]:
        """Members reduced modulo n (so n becomes 0), sorted."""
        return sorted(j % self.n for j in self.members)

    def difference(self, other: IndexSet) -> list[int]:
        return sorted(self._set - other._set)


def weight_qary(a: int, h: int) -> int:
    """Digit sum of ``a`` in base 2^h."""
    if a < 0 or h < 1:
        raise ValueError("need a >= 0 and h >= 1")
    mask = (1 << h) - 1
    s = 0
    while a:
        s += a & mask
        a >>= h
    return s


def _max_rotated_weight(v: np.ndarray, bits: int, h: int) -> np.ndarray:
    """max over i in 0..h of the base-2^h digit sum of v*2^i mod (2^bits - 1)."""
    full = (1 << bits) - 1
    digit_mask = (1 << h) - 1
    best = np.zeros(v.shape, dtype=np.int64)
    for i in range(h + 1):
        rot = ((v << i) | (v >> (bits - i))) & full if i else v
        w = np.zeros(v.shape, dtype=np.int64)
        for d in range(0, bits, h):
            w += (rot >> d) & digit_mask
        np.maximum(best, w, out=best)
    return best


def _digit_index_set(n: int, bits: int, h: int, multiplier: int, bound: int) -> tuple[int, ...]:
    full = (1 << bits) - 1
    out = []
    for start in range(1, n + 1, _CHUNK):
        a = np.arange(start, min(n, start + _CHUNK - 1) + 1, dtype=np.int64)
        v = (a * multiplier) % full
        v[v == 0] = full
        keep = _max_rotated_weight(v, bits, h) <= bound
        out.append(a[keep])
    return tuple(np.concatenate(out).tolist())


@lru_cache(maxsize=None)
def pg_index_set(m: int, h: int, t: int) -> IndexSet:
    """Exponents j of beta = alpha^(2^h-1) that are zeros of the PG code generator."""
    check_mht(m, h, t)
    n = point_count(Family.PG, m, h)
    members = _digit_index_set(n, h * (m + 1), h, (1 << h) - 1, (m - t) * ((1 << h) - 1))
    return IndexSet(n, members)


@lru_cache(maxsize=None)
def eg_index_set(m: int, h: int, t: int) -> IndexSet:
    """Exponents j of alpha that are zeros of the EG code generator."""
    check_mht(m, h, t)
    n = point_count(Family.EG, m, h)
    members = _digit_index_set(n, h * m, h, 1, (m - t) * ((1 << h) - 1))
    return IndexSet(n, members)


def index_set(family: Family | str, m: int, h: int, t: int) -> IndexSet:
    if Family.parse(family) is Family.PG:
        return pg_index_set(m, h, t)
    return eg_index_set(m, h, t)


def ambient_field(family: Family | str, m: int, h: int, modulus: int | None = None) -> GF2m:
    return cached_field(ambient_degree(family, m, h), modulus)


def _product(factors: list[int]) -> int:
    # balanced pairing keeps the operands of each multiplication similar in size
    while len(factors) > 1:
        paired = [_clmul(a, b) for a, b in zip(factors[::2], factors[1::2])]
        if len(factors) % 2:
            paired.append(factors[-1])
        factors = paired
    return factors[0] if factors else 1


def _generator_from_index_set(iset: IndexSet, fld: GF2m, root_step: int) -> BitPoly:
    """prod_{j in iset} (x - alpha^(root_step*j)), one minimal polynomial per coset."""
    n = iset.n
    order = fld.order
    seen: set[int] = set()
    members = iset._set
    factors = []
    for j in iset.members:
        r = j % n
        if r in seen:
            continue
        coset = cyclotomic_coset(r, n)
        seen.update(coset)
        if any((c or n) not in members for c in coset):
            raise InvariantViolation(f"coset of {r} leaves the index set")
        k = min(cyclotomic_coset((root_step * r) % order, order))
        mp = _alpha_power_minpoly(fld, k)
        if mp.bit_length() - 1 != len(coset):
            raise InvariantViolation("minimal polynomial degree differs from coset size")
        factors.append(mp)
    g = _product(factors)
    if g.bit_length() - 1 != len(iset):
        raise InvariantViolation("generator degree differs from index set size")
    return BitPoly(g)


def root_minimal_polynomial(family: Family | str, m: int, h: int, r: int, fld: GF2m | None = None) -> BitPoly:
    """Minimal polynomial of the r-th power of the code's n-th root of unity.

    That root is beta = alpha^(2^h-1) for PG codes and alpha for EG codes.
    """
    fam = Family.parse(family)
    fld = fld or ambient_field(fam, m, h)
    step = (1 << h) - 1 if fam is Family.PG else 1
    n = point_count(fam, m, h)
    k = (step * (r % n)) % fld.order
    return BitPoly(_alpha_power_minpoly(fld, min(cyclotomic_coset(k, fld.order))))


def pg_generator_poly(m: int, h: int, t: int, fld: GF2m | None = None) -> BitPoly:
    fld = fld or ambient_field(Family.PG, m, h)
    if fld.e != h * (m + 1):
        raise ValueError("field degree must be h(m+1)")
    return _generator_from_index_set(pg_index_set(m, h, t), fld, (1 << h) - 1)


def eg_generator_poly(m: int, h: int, t: int, fld: GF2m | None = None) -> BitPoly:
    fld = fld or ambient_field(Family.EG, m, h)
    if fld.e != h * m:
        raise ValueError("field degree must be hm")
    return _generator_from_index_set(eg_index_set(m, h, t), fld, 1)


def generator_poly(family: Family | str, m: int, h: int, t: int, fld: GF2m | None = None) -> BitPoly:
    if Family.parse(family) is Family.PG:
        return pg_generator_poly(m, h, t, fld)
    return eg_generator_poly(m, h, t, fld)


@lru_cache(maxsize=256)
def _cached_generator(family: Family, m: int, h: int, t: int, fld: GF2m) -> BitPoly:
    return generator_poly(family, m, h, t, fld)


def geometry_code(family: Family | str, m: int, h: int, t: int, fld: GF2m | None = None) -> CyclicCode:
    """The PG or EG code as a :class:`CyclicCode` carrying its zero set."""
    fam = Family.parse(family)
    g = _cached_generator(fam, m, h, t, fld or ambient_field(fam, m, h))
    iset = index_set(fam, m, h, t)
    return CyclicCode(iset.n, g, roots=tuple(iset.residues()))


# ---------------------------------------------------------------------------
# dimensions and parameters


def _signed_binomial_term(m: int, length: int) -> int:
    return sum(
        (-1) ** i * comb(m + 1, i) * comb(m + length - 2 * i, m)
        for i in range(length // 2 + 1)
    )


@lru_cache(maxsize=None)
def hamada_dimension(m: int, h: int, t: int) -> int:
    """Rank over GF(2) of the t-space incidence vectors of PG(m, 2^h)."""
    check_mht(m, h, t)
    total = 0
    for head in product(range(t + 1, m + 2), repeat=h):
        s = head + (head[0],)
        lengths = [2 * s[j + 1] - s[j] for j in range(h)]
        if any(not 0 <= L <= m + 1 for L in lengths):
            continue
        term = 1
        for L in lengths:
            term *= _signed_binomial_term(m, L)
        total += term
    return total


def pg_distance(m: int, h: int, t: int) -> int:
    q = 1 << h
    return (q ** (m - t + 1) - 1) // (q - 1)


def eg_distance(m: int, h: int, t: int) -> int:
    return ((1 << (h - 1)) + 1) * (1 << (h * (m - t - 1) + 1)) - 1


def pg_params(m: int, h: int, t: int) -> CodeParams:
    check_mht(m, h, t)
    n = point_count(Family.PG, m, h)
    return CodeParams(
        n,
        n - hamada_dimension(m, h, t) + 1,
        pg_distance(m, h, t),
        {"n": "formula", "k": "formula", "d": "formula"},
    )


def eg_params(m: int, h: int, t: int) -> CodeParams:
    check_mht(m, h, t)
    n = point_count(Family.EG, m, h)
    if t == m - 1:
        # the only (m-1)-space of PG(m-1) is the whole space: its span has rank 1
        p_sub = 1
    else:
        p_sub = hamada_dimension(m - 1, h, t)
    k = (1 << (h * m)) - hamada_dimension(m, h, t) + p_sub
    return CodeParams(n, k, eg_distance(m, h, t), {"n": "formula", "k": "formula", "d": "formula"})


def code_params(family: Family | str, m: int, h: int, t: int) -> CodeParams:
    if Family.parse(family) is Family.PG:
        return pg_params(m, h, t)
    return eg_params(m, h, t)


@dataclass(frozen=True)
class DualDimensionReport:
    m: int
    h: int
    t: int
    dim_pm: int
    dim_pm1: int
    dim_dual: int
    index_set_size: int
    k: int

    @property
    def ok(self) -> bool:
        n = point_count(Family.EG, self.m, self.h)
        return self.dim_dual == self.index_set_size and self.k == n - self.dim_dual


def dual_dimension_check(m: int, h: int, t: int) -> DualDimensionReport:
    """Compare dim of the EG incidence span (via Hamada) with the zero count of g."""
    if m < 2 or not 1 <= t <= m - 2:
        raise ValueError(f"t={t} outside 1..{m - 2}; the boundary t = m-1 is rejected")
    pm = hamada_dimension(m, h, t)
    pm1 = hamada_dimension(m - 1, h, t)
    return DualDimensionReport(
        m, h, t, pm, pm1, pm - pm1 - 1, len(eg_index_set(m, h, t)), eg_params(m, h, t).k
    )

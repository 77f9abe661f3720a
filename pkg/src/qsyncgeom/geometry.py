"""Singer-indexed point models of PG(m, 2^h) and EG(m, 2^h).

PG(m, q), q = 2^h, is modelled inside GF(2^{h(m+1)}): point i is the
GF(q)-line through alpha^i, so multiplying by alpha shifts every point index
by one.  EG(m, q) is modelled inside GF(2^{hm}) with point i = alpha^i (the
origin is not a point).  In both cases 1, alpha, ..., alpha^{dim-1} is the
coordinate basis over the subfield GF(q).
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from .algebra import LOG_TABLE_MAX_DEGREE, MAX_FIELD_DEGREE, FieldElem, GF2m, InvariantViolation
from .algebra import field as cached_field

EXHAUSTIVE_FLAT_CAP = 10**7


class Family(str, enum.Enum):
    PG = "pg"
    EG = "eg"

    @classmethod
    def parse(cls, value: Family | str) -> Family:
        if isinstance(value, Family):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown geometry family {value!r} (expected pg or eg)") from None


def ambient_degree(family: Family | str, m: int, h: int) -> int:
    return h * (m + 1) if Family.parse(family) is Family.PG else h * m


def point_count(family: Family | str, m: int, h: int) -> int:
    q = 1 << h
    if Family.parse(family) is Family.PG:
        return ((1 << (h * (m + 1))) - 1) // (q - 1)
    return (1 << (h * m)) - 1


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if not 0 <= k <= n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@dataclass(frozen=True)
class GeometryModel:
    family: Family
    m: int
    h: int
    n: int
    ambient: GF2m = field(repr=False)

    @property
    def q(self) -> int:
        return 1 << self.h

    @property
    def dim(self) -> int:
        """Vector-space dimension over GF(q) of the ambient field."""
        return self.m + 1 if self.family is Family.PG else self.m

    @property
    def has_log_table(self) -> bool:
        return self.ambient.has_tables

    @property
    def scalars(self) -> tuple[int, ...]:
        """The subfield GF(q) inside the ambient field; index 0 is zero."""
        return _subfield(self.ambient, self.h)

    def basis_element(self, i: int) -> int:
        return self.ambient.exp(i)

    def vector_to_element(self, coords: tuple[int, ...]) -> int:
        """Map subfield coordinates (c_0, ..., c_{dim-1}) to sum c_i alpha^i."""
        mul = self.ambient.mul
        v = 0
        for i, c in enumerate(coords):
            if c:
                v ^= mul(c, self.ambient.exp(i))
        return v


@lru_cache(maxsize=None)
def _subfield(fld: GF2m, h: int) -> tuple[int, ...]:
    step = fld.order // ((1 << h) - 1)
    return (0,) + tuple(fld.exp(k * step) for k in range((1 << h) - 1))


def build_model(
    family: Family | str,
    m: int,
    h: int,
    *,
    max_log_degree: int = LOG_TABLE_MAX_DEGREE,
    max_degree: int = MAX_FIELD_DEGREE,
) -> GeometryModel:
    """Build (and cache) the point model of PG(m, 2^h) or EG(m, 2^h)."""
    fam = Family.parse(family)
    if m < 2 or h < 1:
        raise ValueError(f"need m >= 2 and h >= 1, got m={m}, h={h}")
    e = ambient_degree(fam, m, h)
    if e > max_degree:
        raise ValueError(f"ambient field degree {e} exceeds cap max_degree={max_degree}")
    fld = cached_field(e, tables=e <= max_log_degree)
    return _model(fam, m, h, fld)


@lru_cache(maxsize=None)
def _model(family: Family, m: int, h: int, fld: GF2m) -> GeometryModel:
    return GeometryModel(family, m, h, point_count(family, m, h), fld)


def point_index(model: GeometryModel, v: FieldElem | int) -> int:
    rep = v.rep if isinstance(v, FieldElem) else v
    if rep == 0:
        raise ValueError("the zero vector is not a point")
    return model.ambient.log(rep) % model.n


# ---------------------------------------------------------------------------
# flats


@dataclass(frozen=True)
class Flat:
    """A t-flat: GF(q)-span of ``basis`` translated by ``offset``.

    Basis vectors and offset are ambient field elements as ints.  PG flats
    have ``len(basis) == t + 1`` and zero offset; EG flats have
    ``len(basis) == t`` and an offset outside the span.
    """

    model: GeometryModel = field(repr=False)
    basis: tuple[int, ...]
    offset: int = 0

    @property
    def t(self) -> int:
        return len(self.basis) - 1 if self.model.family is Family.PG else len(self.basis)

    def span_vectors(self) -> list[int]:
        """All GF(q)-combinations of the basis (including zero)."""
        mul = self.model.ambient.mul
        scal = self.model.scalars
        vecs = [0]
        for b in self.basis:
            mults = [mul(s, b) for s in scal]
            vecs = [v ^ w for v in vecs for w in mults]
        return vecs

    def point_elements(self) -> list[int]:
        """One ambient representative per point of the flat."""
        if self.model.family is Family.EG:
            return [v ^ self.offset for v in self.span_vectors()]
        # normalised combinations: leading coefficient one
        mul = self.model.ambient.mul
        scal = self.model.scalars
        out: list[int] = []
        tail = [0]
        for b in reversed(self.basis):
            out.extend(b ^ v for v in tail)
            mults = [mul(s, b) for s in scal]
            tail = [v ^ w for v in tail for w in mults]
        return out

    def to_json(self) -> dict:
        return {
            "family": self.model.family.value,
            "m": self.model.m,
            "h": self.model.h,
            "basis": [hex(b) for b in self.basis],
            "offset": hex(self.offset),
        }

    @classmethod
    def from_json(cls, data: dict) -> Flat:
        model = build_model(data["family"], int(data["m"]), int(data["h"]))
        return cls(model, tuple(int(b, 16) for b in data["basis"]), int(data["offset"], 16))


def flat_count(model: GeometryModel, t: int) -> int:
    if model.family is Family.PG:
        return gaussian_binomial(model.m + 1, t + 1, model.q)
    return gaussian_binomial(model.m, t, model.q) * (model.q ** (model.m - t) - 1)


def _check_t(model: GeometryModel, t: int) -> None:
    if not 1 <= t <= model.m - 1:
        raise ValueError(f"t={t} outside 1..{model.m - 1}")


def _rref_subspaces(model: GeometryModel, rank: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Yield (pivot columns, basis elements) for every rank-``rank`` subspace."""
    dim = model.dim
    scal = model.scalars
    mul = model.ambient.mul
    # scaled[col][k] = scalar_k * alpha^col
    scaled = [[mul(s, model.basis_element(c)) for s in scal] for c in range(dim)]
    for pivots in itertools.combinations(range(dim), rank):
        pivot_set = set(pivots)
        free = [
            [c for c in range(p + 1, dim) if c not in pivot_set]
            for p in pivots
        ]
        slots = [(r, c) for r in range(rank) for c in free[r]]
        for choice in itertools.product(range(len(scal)), repeat=len(slots)):
            rows = [model.basis_element(p) for p in pivots]
            for (r, c), k in zip(slots, choice):
                if k:
                    rows[r] ^= scaled[c][k]
            yield pivots, tuple(rows)


def _coset_offsets(model: GeometryModel, pivots: tuple[int, ...]) -> Iterator[int]:
    scal = model.scalars
    mul = model.ambient.mul
    free = [c for c in range(model.dim) if c not in set(pivots)]
    scaled = [[mul(s, model.basis_element(c)) for s in scal] for c in free]
    for choice in itertools.product(range(len(scal)), repeat=len(free)):
        if not any(choice):
            continue
        v = 0
        for col, k in enumerate(choice):
            if k:
                v ^= scaled[col][k]
        yield v


def _rref(rows: list[list[int]], fld: GF2m) -> tuple[tuple[int, ...], list[list[int]]] | None:
    """Reduced row echelon form over the subfield; None if rank-deficient."""
    rows = [r[:] for r in rows]
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = fld.inv(rows[r][c])
        rows[r] = [fld.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x ^ fld.mul(f, y) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    if r < len(rows):
        return None
    return tuple(pivots), rows


def _sample_flats(model: GeometryModel, t: int, count: int, seed: int) -> Iterator[Flat]:
    rng = random.Random(seed)
    scal = model.scalars
    rank = t + 1 if model.family is Family.PG else t
    produced = 0
    while produced < count:
        mat = [[rng.choice(scal) for _ in range(model.dim)] for _ in range(rank)]
        red = _rref(mat, model.ambient)
        if red is None:
            continue
        pivots, rows = red
        basis = tuple(model.vector_to_element(tuple(r)) for r in rows)
        offset = 0
        if model.family is Family.EG:
            free = [c for c in range(model.dim) if c not in set(pivots)]
            coords = [0] * model.dim
            while not any(coords):
                coords = [0] * model.dim
                for c in free:
                    coords[c] = rng.choice(scal)
            offset = model.vector_to_element(tuple(coords))
        produced += 1
        yield Flat(model, basis, offset)


def enumerate_flats(
    model: GeometryModel,
    t: int,
    mode: str = "exhaustive",
    *,
    count: int = 1000,
    seed: int = 0,
) -> Iterator[Flat]:
    """Stream t-flats: every one exactly once, or ``count`` seeded samples.

    Exhaustive mode walks canonical reduced-echelon bases over GF(q); EG flats
    are the nonzero cosets of each t-dimensional vector subspace, with the
    offset zero on the pivot coordinates.
    """
    _check_t(model, t)
    if mode == "sample":
        return _sample_flats(model, t, count, seed)
    if mode != "exhaustive":
        raise ValueError(f"unknown enumeration mode {mode!r}")
    total = flat_count(model, t)
    if total > EXHAUSTIVE_FLAT_CAP:
        raise ValueError(
            f"{total} flats exceed the exhaustive cap {EXHAUSTIVE_FLAT_CAP}; use mode='sample'"
        )
    return _exhaustive_flats(model, t)


def _exhaustive_flats(model: GeometryModel, t: int) -> Iterator[Flat]:
    if model.family is Family.PG:
        for _, basis in _rref_subspaces(model, t + 1):
            yield Flat(model, basis)
    else:
        for pivots, basis in _rref_subspaces(model, t):
            for off in _coset_offsets(model, pivots):
                yield Flat(model, basis, off)


# ---------------------------------------------------------------------------
# incidence vectors


@dataclass(frozen=True)
class IncidenceVector:
    model: GeometryModel = field(repr=False)
    bits: int

    @property
    def n(self) -> int:
        return self.model.n

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        b = self.bits
        out = []
        while b:
            low = b & -b
            out.append(low.bit_length() - 1)
            b ^= low
        return out

    def to_hex(self) -> str:
        return hex(self.bits)

    @classmethod
    def from_hex(cls, model: GeometryModel, text: str) -> IncidenceVector:
        bits = int(text, 16)
        if bits.bit_length() > model.n:
            raise ValueError("bitstring longer than the point count")
        return cls(model, bits)


def _bits_from_indices(indices, n: int) -> int:
    if len(indices) < 64:
        bits = 0
        for i in indices:
            bits |= 1 << i
        return bits
    arr = np.zeros(n, dtype=np.uint8)
    arr[np.asarray(indices, dtype=np.int64)] = 1
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def incidence_vector(flat: Flat) -> IncidenceVector:
    model = flat.model
    log = model.ambient.log
    n = model.n
    idx = [log(v) % n for v in flat.point_elements()]
    return IncidenceVector(model, _bits_from_indices(idx, n))


def complement_vector(v: IncidenceVector) -> IncidenceVector:
    return IncidenceVector(v.model, v.bits ^ ((1 << v.n) - 1))


def cyclic_shift(v: IncidenceVector, s: int) -> IncidenceVector:
    """Move the entry at index i to index (i + s) mod n."""
    n = v.n
    s %= n
    mask = (1 << n) - 1
    return IncidenceVector(v.model, ((v.bits << s) | (v.bits >> (n - s))) & mask)


# ---------------------------------------------------------------------------
# hyperovals and minimum-weight supports


def _affine_hyperoval(fld: GF2m, scalars: tuple[int, ...]) -> list[tuple[int, int]]:
    """q + 2 points of AG(2, q), no three collinear, containing (0, 0).

    The conic x^2 + xy + d*y^2 = 1 with Tr(d) = 1 has no points at infinity
    (the quadratic form is anisotropic) and its nucleus is the origin.
    """
    mul = fld.mul

    def trace(a: int) -> int:
        t, x = 0, a
        for _ in range(len(scalars).bit_length() - 1):
            t ^= x
            x = mul(x, x)
        return t

    delta = next(d for d in sorted(scalars) if trace(d) == 1)
    pts = [(0, 0)]
    for x in sorted(scalars):
        for y in sorted(scalars):
            if mul(x, x) ^ mul(x, y) ^ mul(delta, mul(y, y)) == 1:
                pts.append((x, y))
    if len(pts) != len(scalars) + 2:
        raise InvariantViolation("hyperoval has the wrong size")
    return pts


def hyperoval(h: int) -> list[tuple[FieldElem, FieldElem]]:
    """A hyperoval of AG(2, 2^h) through the origin, as coordinate pairs."""
    if h < 1:
        raise ValueError("h must be positive")
    fld = cached_field(h)
    scalars = tuple(range(fld.order + 1))
    return [(fld(x), fld(y)) for x, y in _affine_hyperoval(fld, scalars)]


def pg_min_weight_support(model: GeometryModel, t: int) -> IncidenceVector:
    """Incidence vector of the (m-t)-space spanned by alpha^0..alpha^{m-t}."""
    if model.family is not Family.PG:
        raise ValueError("pg_min_weight_support needs a PG model")
    _check_t(model, t)
    basis = tuple(model.basis_element(i) for i in range(model.m - t + 1))
    return incidence_vector(Flat(model, basis))


def eg_min_weight_support(model: GeometryModel, t: int) -> IncidenceVector:
    """Weight (q+2)q^{m-t-1} - 1 codeword of the EG code built from a hyperoval.

    H is a hyperoval through the origin in U = <e0, e1>; W = <e2, ...,
    e_{m-t}> has dimension m-t-1 and meets U only in zero.  The support is
    the union of the cosets p + W (p in H) with the origin removed.
    """
    if model.family is not Family.EG:
        raise ValueError("eg_min_weight_support needs an EG model")
    _check_t(model, t)
    wdim = model.m - t - 1
    if wdim + 2 > model.m:
        raise ValueError(f"no direction space of dimension {wdim} avoids the hyperoval plane")
    fld = model.ambient
    mul = fld.mul
    e0, e1 = model.basis_element(0), model.basis_element(1)
    oval = _affine_hyperoval(fld, model.scalars)
    direction = Flat(model, tuple(model.basis_element(2 + i) for i in range(wdim)))
    wvecs = direction.span_vectors()
    points = set()
    for x, y in oval:
        p = mul(x, e0) ^ mul(y, e1)
        points.update(p ^ w for w in wvecs)
    points.discard(0)
    expected = (model.q + 2) * model.q**wdim - 1
    if len(points) != expected:
        raise InvariantViolation(f"support has {len(points)} points, expected {expected}")
    log = fld.log
    return IncidenceVector(model, _bits_from_indices([log(p) for p in points], model.n))


def flat_point_count(model: GeometryModel, t: int) -> int:
    q = model.q
    if model.family is Family.PG:
        return (q ** (t + 1) - 1) // (q - 1)
    return q**t


def is_power_of_two(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0


__all__ = [
    "Family",
    "GeometryModel",
    "Flat",
    "IncidenceVector",
    "build_model",
    "point_index",
    "enumerate_flats",
    "flat_count",
    "flat_point_count",
    "gaussian_binomial",
    "incidence_vector",
    "complement_vector",
    "cyclic_shift",
    "hyperoval",
    "pg_min_weight_support",
    "eg_min_weight_support",
    "ambient_degree",
    "point_count",
    "is_power_of_two",
]

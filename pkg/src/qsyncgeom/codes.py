"""Binary cyclic codes: membership, duality, nesting, rank and minimum distance."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .algebra import BitPoly, InvariantViolation, _clmul, _mod, divides, divides_x_n_minus_1

MATRIX_MAX_N = 1 << 16
EXHAUSTIVE_MAX_K = 26
DEFAULT_BUDGET = 1 << 28


@dataclass(frozen=True)
class CyclicCode:
    """The ideal generated by ``g`` in GF(2)[x]/(x^n - 1).

    ``roots`` optionally records the zero exponents of ``g`` (residues mod n
    with respect to some fixed primitive n-th root of unity); the root-based
    checks below need them, everything else works from ``g`` alone.
    """

    n: int
    g: BitPoly
    roots: tuple[int, ...] | None = field(default=None, compare=False, repr=False)

    @property
    def k(self) -> int:
        return self.n - self.g.degree

    @property
    def check_poly(self) -> BitPoly:
        """h(x) = (x^n - 1) / g(x)."""
        return BitPoly.x_n_minus_1(self.n) // self.g

    @property
    def dual_generator(self) -> BitPoly:
        """Generator of the dual code: the reciprocal of the check polynomial."""
        return self.check_poly.reciprocal()

    def generator_rows(self) -> list[int]:
        g = self.g.bits
        return [g << i for i in range(self.k)]

    def generator_matrix(self) -> BitMatrix:
        return BitMatrix(self.n, self.generator_rows())

    def parity_check_matrix(self) -> BitMatrix:
        hr = self.dual_generator.bits
        return BitMatrix(self.n, [hr << i for i in range(self.n - self.k)])

    def encode(self, message: int) -> int:
        """Non-systematic encoding m(x) g(x)."""
        if message.bit_length() > self.k:
            raise ValueError("message longer than k")
        return _clmul(message, self.g.bits)


def code_from_generator(n: int, g: BitPoly, roots: Iterable[int] | None = None, check: bool = True) -> CyclicCode:
    if n < 1:
        raise ValueError("n must be positive")
    if not g or g.degree > n:
        raise ValueError("generator must be nonzero with degree at most n")
    if check and not divides_x_n_minus_1(g, n):
        raise ValueError(f"g does not divide x^{n} - 1")
    return CyclicCode(n, g, tuple(sorted(roots)) if roots is not None else None)


def _word_bits(w, n: int) -> int:
    if isinstance(w, int):
        if w < 0 or w.bit_length() > n:
            raise ValueError(f"word does not fit in length {n}")
        return w
    if hasattr(w, "bits") and hasattr(w, "n"):
        if w.n != n:
            raise ValueError(f"length mismatch: {w.n} != {n}")
        return w.bits
    if isinstance(w, BitPoly):
        return _word_bits(w.bits, n)
    seq = list(w)
    if len(seq) != n:
        raise ValueError(f"length mismatch: {len(seq)} != {n}")
    return sum(1 << i for i, b in enumerate(seq) if b)


def contains_word(code: CyclicCode, w) -> bool:
    """True iff g(x) divides the word polynomial.

    ``w`` may be an int bit mask, a 0/1 sequence of length n, or any object
    with ``bits`` and ``n`` attributes (such as an incidence vector).
    """
    bits = _word_bits(w, code.n)
    return _mod(bits, code.g.bits) == 0


def _gram_by_lag(v: int, shifts: int) -> bool:
    """Gram matrix of {x^i v : 0 <= i < shifts} is zero over GF(2).

    Shifts never wrap past position n-1 for the rows used here, so entry
    (i, j) only depends on |i - j| and equals the parity of v & (v >> |i-j|).
    """
    for lag in range(min(shifts, v.bit_length())):
        if (v & (v >> lag)).bit_count() & 1:
            return False
    return True


def is_dual_containing(code: CyclicCode, method: str = "auto") -> bool:
    """Whether the dual code is contained in ``code``.

    ``matrix`` checks H H^T = 0 for the parity-check matrix H (its rows span
    the dual, and a code whose dual is self-orthogonal contains that dual);
    ``poly`` checks that g divides the dual generator; ``roots`` checks that
    the zero set Z satisfies Z and -Z are disjoint.
    """
    if method == "auto":
        if code.n <= 1 << 12:
            method = "matrix"
        elif code.roots is not None and code.n > MATRIX_MAX_N:
            method = "roots"
        else:
            method = "poly"
    if code.g.degree == 0:
        return True
    if method == "matrix":
        if code.n > MATRIX_MAX_N:
            raise ValueError(
                f"n={code.n} exceeds the matrix cap {MATRIX_MAX_N}; use method='poly' "
                "(g divides the reciprocal of (x^n-1)/g)"
            )
        return _gram_by_lag(code.dual_generator.bits, code.n - code.k)
    if method == "poly":
        return divides(code.g, code.dual_generator)
    if method == "roots":
        if code.roots is None:
            raise ValueError("code carries no root set")
        zs = set(code.roots)
        return all((-z) % code.n not in zs for z in zs)
    raise ValueError(f"unknown method {method!r}")


def is_subcode(a: CyclicCode, b: CyclicCode) -> bool:
    """True iff ``a`` is contained in ``b``."""
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} != {b.n}")
    return divides(b.g, a.g)


# ---------------------------------------------------------------------------
# bit matrices


class BitMatrix:
    """Rows of length-n bit vectors, stored packed in uint64 words (bit i of row = column i)."""

    def __init__(self, n: int, rows: Iterable[int] = ()):
        self.n = n
        self.words = max(1, (n + 63) // 64)
        rows = list(rows)
        data = np.zeros((len(rows), self.words), dtype=np.uint64)
        nbytes = self.words * 8
        for r, v in enumerate(rows):
            if v < 0 or v.bit_length() > n:
                raise ValueError(f"row {r} does not fit in {n} columns")
            data[r] = np.frombuffer(v.to_bytes(nbytes, "little"), dtype="<u8")
        self.data = data

    @classmethod
    def from_array(cls, n: int, data: np.ndarray) -> BitMatrix:
        """Pack a (rows, n) array of 0/1 entries."""
        data = np.asarray(data, dtype=np.uint8)
        if data.ndim != 2 or data.shape[1] != n:
            raise ValueError(f"expected a (rows, {n}) array, got {data.shape}")
        m = cls(n)
        padded = np.zeros((data.shape[0], m.words * 64), dtype=np.uint8)
        padded[:, :n] = data & 1
        m.data = np.packbits(padded, axis=1, bitorder="little").view("<u8").astype(np.uint64)
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[0], self.n

    def row(self, i: int) -> int:
        return int.from_bytes(self.data[i].astype("<u8").tobytes(), "little")

    def rows(self) -> list[int]:
        return [self.row(i) for i in range(self.data.shape[0])]

    def __len__(self) -> int:
        return self.data.shape[0]


def rank_gf2(mat: BitMatrix | Sequence[int], n: int | None = None) -> int:
    """Row rank over GF(2) by packed Gaussian elimination."""
    if not isinstance(mat, BitMatrix):
        rows = list(mat)
        mat = BitMatrix(n if n is not None else max((r.bit_length() for r in rows), default=1), rows)
    a = mat.data.copy()
    nrows = a.shape[0]
    rank = 0
    for col in range(mat.n):
        if rank == nrows:
            break
        w, b = divmod(col, 64)
        bit = np.uint64(1 << b)
        hits = np.nonzero(a[rank:, w] & bit)[0]
        if hits.size == 0:
            continue
        p = rank + hits[0]
        if p != rank:
            a[[rank, p]] = a[[p, rank]]
        below = rank + 1 + np.nonzero(a[rank + 1:, w] & bit)[0]
        if below.size:
            a[below] ^= a[rank]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# distance


def bch_bound(exponents: Iterable[int], n: int | None = None) -> int:
    """1 + the longest run of cyclically consecutive residues in the set.

    ``exponents`` may be an index set object (with ``n`` and ``residues()``).
    """
    if hasattr(exponents, "residues"):
        n = exponents.n
        res = set(exponents.residues())
    else:
        if n is None:
            raise ValueError("n is required for a plain exponent collection")
        res = {e % n for e in exponents}
    if not res:
        return 1
    if len(res) == n:
        return n + 1
    best = 0
    for s in res:
        if (s - 1) % n in res:
            continue
        run = 1
        while (s + run) % n in res:
            run += 1
        best = max(best, run)
    return best + 1


@dataclass
class DistanceReport:
    """Outcome of a distance computation.

    ``value`` is the distance when ``certified``; otherwise it is the best
    proven lower bound and ``upper`` (if known) the smallest weight seen.
    """

    value: int
    method: str
    certified: bool
    lower: int
    upper: int | None
    elapsed_ms: float

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "certified": self.certified,
            "lower": self.lower,
            "upper": self.upper,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


def _to_words(v: int, words: int) -> np.ndarray:
    return np.frombuffer(v.to_bytes(words * 8, "little"), dtype="<u8").astype(np.uint64)


def _span(rows: list[int], words: int) -> np.ndarray:
    span = np.zeros((1, words), dtype=np.uint64)
    for r in rows:
        span = np.concatenate([span, span ^ _to_words(r, words)])
    return span


def exhaustive_min_distance(code: CyclicCode) -> int:
    """Minimum nonzero weight over all 2^k codewords.

    The message space is split in two halves; for each codeword of the first
    half the whole second half is scanned at once with numpy popcounts.
    """
    if code.k < 1:
        raise ValueError("zero code has no minimum distance")
    if code.k > EXHAUSTIVE_MAX_K:
        raise ValueError(f"k={code.k} exceeds exhaustive cap {EXHAUSTIVE_MAX_K}")
    rows = code.generator_rows()
    words = (code.n + 63) // 64
    split = code.k // 2
    left = _span(rows[:split], words)
    right = _span(rows[split:], words)
    best = code.n
    for i in range(left.shape[0]):
        w = np.bitwise_count(right ^ left[i]).sum(axis=1, dtype=np.int64)
        if i == 0:
            w = w[1:]
        best = min(best, int(w.min()))
    return best


def _residues(code: CyclicCode) -> list[int]:
    g = code.g.bits
    dg = code.g.degree
    out = []
    r = 1
    for _ in range(code.n):
        out.append(r)
        r <<= 1
        if (r >> dg) & 1:
            r ^= g
    return out


def weight_search(code: CyclicCode, w_max: int = 4, budget: int = DEFAULT_BUDGET) -> tuple[int, int | None, int | None]:
    """Look for codewords of weight <= w_max.

    Returns ``(lower, found_weight, word)``: no codeword of weight below
    ``lower`` exists, and ``word`` is a codeword of weight ``found_weight``
    if one was found.  By cyclicity every codeword has a shift with bit 0
    set, so only such words are tested.  The search stops raising the lower
    bound once ``budget`` elementary steps would be exceeded.
    """
    n = code.n
    if code.g.degree == 0:
        return 1, 1, 1
    r = _residues(code)
    index: dict[int, list[int]] = {}
    for i, v in enumerate(r):
        index.setdefault(v, []).append(i)
    lower = 2  # x^0 = 1 is never divisible by a non-constant g
    if w_max >= 2:
        for i in index.get(1, []):
            if i > 0:
                return 2, 2, 1 | (1 << i)
        lower = 3
    if w_max >= 3:
        if n > budget:
            return lower, None, None
        for i in range(1, n):
            for j in index.get(1 ^ r[i], []):
                if j > i:
                    return 3, 3, 1 | (1 << i) | (1 << j)
        lower = 4
    if w_max >= 4:
        if n * n // 2 > budget:
            return lower, None, None
        for i in range(1, n):
            ri = 1 ^ r[i]
            for j in range(i + 1, n):
                for k in index.get(ri ^ r[j], []):
                    if k > j:
                        return 4, 4, 1 | (1 << i) | (1 << j) | (1 << k)
        lower = 5
    return lower, None, None


def min_distance(
    code: CyclicCode,
    budget: int = DEFAULT_BUDGET,
    witness=None,
    w_max: int = 4,
    strategy: str = "auto",
) -> DistanceReport:
    """Certify the minimum distance if possible, else report an interval.

    Ladder: exhaustive enumeration when k <= 26; otherwise a bounded-weight
    search, the BCH bound from the code's roots, and an optional witness
    codeword.  The result is certified when lower and upper bounds meet.
    """
    start = time.perf_counter()

    def done(value, method, certified, lower, upper):
        return DistanceReport(value, method, certified, lower, upper, (time.perf_counter() - start) * 1e3)

    if strategy not in ("auto", "exhaustive", "bounds"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "exhaustive" or (strategy == "auto" and code.k <= EXHAUSTIVE_MAX_K):
        if (1 << code.k) > budget * 64:
            raise ValueError("budget too small for exhaustive enumeration")
        d = exhaustive_min_distance(code)
        return done(d, "exhaustive", True, d, d)

    upper = None
    bch = bch_bound(code.roots, code.n) if code.roots is not None else 1
    lower, method = bch, "bch_bound"
    if bch <= w_max:
        # the search can only help when it reaches past the BCH bound
        lo_ws, found, _ = weight_search(code, w_max, budget)
        if found is not None:
            return done(found, f"weight_search({w_max})", True, found, found)
        if lo_ws > lower:
            lower, method = lo_ws, f"weight_search({w_max})"
    if witness is not None:
        bits = _word_bits(witness, code.n)
        if not bits or not contains_word(code, bits):
            raise InvariantViolation("witness is not a nonzero codeword")
        upper = bits.bit_count()
        if upper < lower:
            raise InvariantViolation(f"witness weight {upper} below proven bound {lower}")
        method = "witness+bound"
    if upper is not None and upper == lower:
        return done(lower, method, True, lower, upper)
    return done(lower, method, False, lower, upper)

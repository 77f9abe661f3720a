"""Quantum synchronizable code parameters from nested PG/EG code pairs.

A pair C_inner (generator g_inner) inside C_outer (generator g_outer) of
dual-containing cyclic codes of length n yields a code on n + a_l + a_r
qubits carrying 2*k_inner - n logical qubits, tolerating misalignments with
a_l + a_r < ord(f), where f = g_inner / g_outer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import BitPoly, divides_x_n_minus_1, format_hex, poly_divmod, poly_order
from .codes import is_dual_containing, is_subcode
from .geomcodes import check_mht, code_params, geometry_code, index_set
from .geometry import Family, point_count

MATRIX_CHECK_MAX_N = 1 << 12
F_HEX_MAX_DEGREE = 4096


class PreconditionError(ValueError):
    """A structural requirement of the construction does not hold."""


@dataclass(frozen=True)
class QsyncSpec:
    family: Family
    m: int
    h: int
    t_inner: int
    t_outer: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family.parse(self.family))
        check_mht(self.m, self.h, self.t_inner)
        if not self.t_inner < self.t_outer <= self.m - 1:
            raise PreconditionError(
                f"need t_inner < t_outer <= m-1, got t_inner={self.t_inner}, t_outer={self.t_outer}, m={self.m}"
            )
        if 2 * self.t_inner < self.m + 1:
            raise PreconditionError(
                f"t_inner={self.t_inner} below (m+1)/2 = {(self.m + 1) / 2}: codes are not dual-containing"
            )

    @property
    def n(self) -> int:
        return point_count(self.family, self.m, self.h)


@dataclass(frozen=True)
class QsyncParams:
    spec: QsyncSpec
    n: int
    k1: int
    k2: int
    d1: int
    d2: int
    f: BitPoly
    ord_f: int

    @property
    def logical(self) -> int:
        return 2 * self.k1 - self.n

    @property
    def phase_t(self) -> int:
        return (self.d1 - 1) // 2

    @property
    def bit_t(self) -> int:
        return (self.d2 - 1) // 2

    @property
    def max_total(self) -> int:
        """Largest admissible a_l + a_r."""
        return self.ord_f - 1

    def __post_init__(self) -> None:
        if self.logical <= 0:
            raise PreconditionError(f"no logical qubits: 2*{self.k1} - {self.n} <= 0")
        if self.f.degree != self.k2 - self.k1:
            raise PreconditionError(f"deg f = {self.f.degree} but k2 - k1 = {self.k2 - self.k1}")
        if not 1 <= self.ord_f <= self.n:
            raise PreconditionError(f"ord f = {self.ord_f} outside 1..{self.n}")


def quotient_poly(g_outer: BitPoly, g_inner: BitPoly) -> BitPoly:
    """f with g_inner = f * g_outer."""
    q, r = poly_divmod(g_inner, g_outer)
    if r:
        raise PreconditionError("codes not nested: g_outer does not divide g_inner")
    return q


def build_qsync(spec: QsyncSpec, *, check: bool = True) -> QsyncParams:
    """Construct both codes, check the structural requirements, fill in the parameters.

    Dual-containment is checked with the parity-check Gram matrix for
    n <= 4096 and with polynomial divisibility above.
    """
    fam, m, h = spec.family, spec.m, spec.h
    inner = geometry_code(fam, m, h, spec.t_inner)
    outer = geometry_code(fam, m, h, spec.t_outer)
    n = inner.n
    if check:
        method = "matrix" if n <= MATRIX_CHECK_MAX_N else "poly"
        for name, code in (("inner", inner), ("outer", outer)):
            if not divides_x_n_minus_1(code.g, n):
                raise PreconditionError(f"{name} generator does not divide x^{n} - 1: code is not cyclic")
            if not is_dual_containing(code, method):
                raise PreconditionError(f"{name} code is not dual-containing")
        if not is_subcode(inner, outer):
            raise PreconditionError("codes not nested: inner code is not contained in the outer code")
    f = quotient_poly(outer.g, inner.g)
    p1 = code_params(fam, m, h, spec.t_inner)
    p2 = code_params(fam, m, h, spec.t_outer)
    if (p1.k, p2.k) != (inner.k, outer.k):
        raise PreconditionError(
            f"dimension mismatch: formula ({p1.k}, {p2.k}) vs generators ({inner.k}, {outer.k})"
        )
    ord_f = poly_order(f, divisor_hint=n) if f.degree > 0 else 1
    return QsyncParams(spec, n, inner.k, outer.k, p1.d, p2.d, f, ord_f)


def assert_max_tolerance(params: QsyncParams) -> bool:
    """True iff the misalignment bound is as large as possible (ord f = n)."""
    return params.ord_f == params.n


def witness_exponents(spec: QsyncSpec) -> tuple[int, int]:
    """Two coprime exponents whose minimal polynomials divide f and force ord f = n."""
    m, h, t = spec.m, spec.h, spec.t_inner
    q = 1 << h
    if spec.family is Family.PG:
        j0 = (q ** (m - t) - 1) // (q - 1)
        j1 = (q ** (m - t + 1) - 1) // (q - 1) - 2
    else:
        j0 = q ** (m - t) - 1
        j1 = q ** (m - t) - 2
    return j0, j1


def check_witness_exponents(spec: QsyncSpec) -> bool:
    inner = index_set(spec.family, spec.m, spec.h, spec.t_inner)
    outer = index_set(spec.family, spec.m, spec.h, spec.t_outer)
    j0, j1 = witness_exponents(spec)
    return all(j in inner and j not in outer for j in (j0, j1))


def closed_form_phase(family: Family | str, m: int, h: int, t: int) -> int:
    """Phase-error guarantee written out in terms of m, h, t (t the inner code)."""
    q = 1 << h
    if Family.parse(family) is Family.PG:
        num = (1 << (h * (m - t + 1) - 1)) - (1 << (h - 1))
        if num % (q - 1):
            raise ArithmeticError("closed form is not an integer")
        return num // (q - 1)
    return ((1 << (h - 1)) + 1) * (1 << (h * (m - t - 1))) - 1


def closed_form_bit(family: Family | str, m: int, h: int, t: int) -> int:
    """Bit-error guarantee for the adjacent pair (t, t+1)."""
    return closed_form_phase(family, m, h, t + 1)


def qsync_row(spec: QsyncSpec, params: QsyncParams | None = None) -> dict:
    p = params or build_qsync(spec)
    row = {
        "family": spec.family.value,
        "m": spec.m,
        "h": spec.h,
        "t_inner": spec.t_inner,
        "t_outer": spec.t_outer,
        "n": p.n,
        "logical": p.logical,
        "ord_f": p.ord_f,
        "phase_t": p.phase_t,
        "bit_t": p.bit_t,
    }
    if p.f.degree <= F_HEX_MAX_DEGREE:
        row["f_hex"] = format_hex(p.f)
    return row


def format_row(row: dict) -> str:
    return f"[[{row['n']}+a,{row['logical']}]] a<{row['ord_f']} phase={row['phase_t']} bit={row['bit_t']}"

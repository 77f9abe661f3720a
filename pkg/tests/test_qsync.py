import json

import pytest

from qsyncgeom.algebra import BitPoly, divides_x_n_minus_1
from qsyncgeom.geomcodes import code_params, generator_poly
from qsyncgeom.geometry import Family
from qsyncgeom.qsync import (
    PreconditionError,
    QsyncParams,
    QsyncSpec,
    assert_max_tolerance,
    build_qsync,
    check_witness_exponents,
    closed_form_bit,
    closed_form_phase,
    format_row,
    quotient_poly,
    qsync_row,
    witness_exponents,
)
from qsyncgeom.verify import qsync_specs


def naive_order(f):
    # oracle: smallest e with x^e = 1 mod f, by stepping x^e one power at a time
    d = f.bit_length() - 1
    r, e = 1, 0
    while True:
        r <<= 1
        e += 1
        if (r >> d) & 1:
            r ^= f
        if r == 1:
            return e


def test_quotient_of_equal_generators_is_one():
    g = generator_poly("pg", 4, 1, 2)
    assert quotient_poly(g, g) == BitPoly(1)


@pytest.mark.parametrize("family,m,h,deg", [("pg", 5, 2, 265), ("eg", 5, 2, 240)])
def test_quotient_degree(family, m, h, deg):
    f = quotient_poly(generator_poly(family, m, h, 4), generator_poly(family, m, h, 3))
    assert f.degree == deg
    assert f.bits & 1


def test_quotient_rejects_non_nested_pair():
    with pytest.raises(PreconditionError, match="not nested"):
        quotient_poly(generator_poly("pg", 4, 1, 2), generator_poly("pg", 4, 1, 3))


def test_pg_example():
    p = build_qsync(QsyncSpec("pg", 5, 2, 3, 4))
    assert (p.n, p.logical, p.phase_t, p.bit_t, p.ord_f) == (1365, 763, 10, 2, 1365)
    assert p.max_total == 1364
    assert assert_max_tolerance(p)


def test_eg_examples():
    p = build_qsync(QsyncSpec("eg", 5, 2, 3, 4))
    assert (p.n, p.logical, p.phase_t, p.bit_t, p.ord_f) == (1023, 473, 11, 2, 1023)
    p = build_qsync(QsyncSpec("eg", 6, 2, 4, 5))
    assert p.ord_f == 4095


def test_eg_large_example_uses_polynomial_route():
    p = build_qsync(QsyncSpec("eg", 5, 3, 3, 4))
    assert (p.n, p.logical, p.phase_t, p.bit_t) == (32767, 23317, 39, 4)


def test_binary_eg_pair():
    p = build_qsync(QsyncSpec("eg", 7, 1, 4, 5))
    assert p.n == 127
    assert p.ord_f == 127


@pytest.mark.parametrize(
    "args,match",
    [
        (("pg", 4, 1, 2, 3), "below"),
        (("pg", 5, 2, 4, 4), "t_inner < t_outer"),
        (("eg", 5, 2, 3, 5), "t_outer <= m-1"),
    ],
)
def test_spec_preconditions(args, match):
    with pytest.raises(PreconditionError, match=match):
        QsyncSpec(*args)


def test_params_invariants():
    spec = QsyncSpec("pg", 5, 2, 3, 4)
    with pytest.raises(PreconditionError, match="deg f"):
        QsyncParams(spec, 1365, 1064, 1329, 21, 5, BitPoly(3), 1365)
    with pytest.raises(PreconditionError, match="logical"):
        QsyncParams(spec, 1365, 600, 601, 21, 5, BitPoly(3), 3)


@pytest.mark.parametrize("spec", qsync_specs(255), ids=str)
def test_order_is_maximal_against_naive_walk(spec):
    p = build_qsync(spec)
    assert p.f.degree == p.k2 - p.k1
    assert p.logical + p.n == 2 * p.k1
    assert p.ord_f == naive_order(p.f.bits) == p.n
    assert divides_x_n_minus_1(p.f, p.n)


def test_non_adjacent_pair():
    p = build_qsync(QsyncSpec("pg", 7, 1, 4, 6))
    assert p.ord_f == p.n == 255
    assert p.d2 == code_params("pg", 7, 1, 6).d


@pytest.mark.parametrize("family,m,h", [("pg", 7, 1), ("pg", 5, 2), ("eg", 6, 2), ("eg", 4, 3)])
def test_guarantees_monotone_along_chain(family, m, h):
    specs = [QsyncSpec(family, m, h, t, t + 1) for t in range((m + 2) // 2, m - 1)]
    phases = [build_qsync(s).phase_t for s in specs]
    bits = [build_qsync(s).bit_t for s in specs]
    assert phases == sorted(phases, reverse=True)
    assert bits == sorted(bits, reverse=True)


def test_witness_exponents_examples():
    assert witness_exponents(QsyncSpec("pg", 5, 2, 3, 4)) == (5, 19)
    assert witness_exponents(QsyncSpec("eg", 5, 2, 3, 4)) == (15, 14)
    assert check_witness_exponents(QsyncSpec("pg", 5, 2, 3, 4))
    assert check_witness_exponents(QsyncSpec("eg", 5, 2, 3, 4))


def test_witness_argument_fails_for_binary_eg():
    # j1 = 2^(m-t) - 2 has binary weight m-t-1, so it is already an outer zero
    spec = QsyncSpec("eg", 5, 1, 3, 4)
    assert not check_witness_exponents(spec)
    assert build_qsync(spec).ord_f == 31


@pytest.mark.parametrize("family", list(Family))
def test_closed_forms_match_distance(family):
    for m in range(3, 8):
        for h in (1, 2):
            for t in range(1, m - 1):
                assert closed_form_phase(family, m, h, t) == (code_params(family, m, h, t).d - 1) // 2
                assert closed_form_bit(family, m, h, t) == (code_params(family, m, h, t + 1).d - 1) // 2


def test_row_format_and_json():
    row = qsync_row(QsyncSpec("eg", 5, 2, 3, 4))
    assert format_row(row) == "[[1023+a,473]] a<1023 phase=11 bit=2"
    assert set(row) == {"family", "m", "h", "t_inner", "t_outer", "n", "logical", "ord_f", "phase_t", "bit_t", "f_hex"}
    assert int(row["f_hex"], 16).bit_length() == 241
    assert json.loads(json.dumps(row)) == row
    assert format_row(qsync_row(QsyncSpec("pg", 5, 2, 3, 4))) == "[[1365+a,763]] a<1365 phase=10 bit=2"

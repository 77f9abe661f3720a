import itertools
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsyncgeom.algebra import field
from qsyncgeom.geometry import (
    Family,
    Flat,
    IncidenceVector,
    build_model,
    complement_vector,
    cyclic_shift,
    eg_min_weight_support,
    enumerate_flats,
    flat_count,
    gaussian_binomial,
    hyperoval,
    incidence_vector,
    pg_min_weight_support,
    point_count,
    point_index,
)


def gaussian_by_product(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def collinear(F, p, r, s):
    (x1, y1), (x2, y2), (x3, y3) = p, r, s
    return F.mul(x2 ^ x1, y3 ^ y1) == F.mul(x3 ^ x1, y2 ^ y1)


def test_point_counts():
    assert point_count("pg", 4, 2) == 341
    assert point_count("eg", 5, 2) == 1023
    assert point_count(Family.PG, 8, 2) == 87381


@pytest.mark.parametrize("n,k,q", [(5, 3, 2), (5, 3, 4), (6, 2, 8), (4, 0, 2), (4, 4, 4)])
def test_gaussian_binomial(n, k, q):
    assert gaussian_binomial(n, k, q) == gaussian_by_product(n, k, q)


def test_planes_of_pg_4_2_match_brute_force():
    # oracle: span every independent triple of nonzero vectors of GF(2)^5
    vecs = range(1, 32)
    spans = set()
    for a, b, c in itertools.combinations(vecs, 3):
        span = {a, b, c, a ^ b, a ^ c, b ^ c, a ^ b ^ c}
        if 0 not in span and len(span) == 7:
            spans.add(frozenset(span))
    model = build_model("pg", 4, 1)
    vecs_found = {incidence_vector(f).bits for f in enumerate_flats(model, 2)}
    assert len(spans) == len(vecs_found) == 155


def test_pg_4_4_planes():
    model = build_model("pg", 4, 2)
    vecs = [incidence_vector(f) for f in enumerate_flats(model, 2)]
    assert len(vecs) == 5797 == gaussian_by_product(5, 3, 4)
    assert len({v.bits for v in vecs}) == 5797
    assert {v.weight for v in vecs} == {21}


def test_eg_2_4_lines_not_through_origin():
    # oracle: lines {p + s*d} of AG(2,4) built directly in GF(4) coordinates
    F = field(2)
    pts = [(x, y) for x in range(4) for y in range(4)]
    lines = set()
    for p in pts:
        for d in pts:
            if d == (0, 0):
                continue
            line = frozenset((p[0] ^ F.mul(s, d[0]), p[1] ^ F.mul(s, d[1])) for s in range(4))
            if (0, 0) not in line:
                lines.add(line)
    model = build_model("eg", 2, 2)
    flats = list(enumerate_flats(model, 1))
    assert len(lines) == len(flats) == flat_count(model, 1) == 15
    assert {incidence_vector(f).weight for f in flats} == {4}


def test_pg_lines_cover_each_point_pair_once():
    model = build_model("pg", 3, 1)
    pairs = Counter()
    for f in enumerate_flats(model, 1):
        pairs.update(itertools.combinations(incidence_vector(f).support(), 2))
    assert len(pairs) == 15 * 14 // 2
    assert set(pairs.values()) == {1}


def test_eg_lines_cover_each_pair_at_most_once():
    model = build_model("eg", 3, 1)
    pairs = Counter()
    for f in enumerate_flats(model, 1):
        pairs.update(itertools.combinations(incidence_vector(f).support(), 2))
    assert set(pairs.values()) == {1}


@pytest.mark.parametrize("family,m,h,t", [("pg", 3, 2, 1), ("pg", 4, 1, 2), ("eg", 3, 2, 1), ("eg", 4, 1, 2)])
def test_flat_set_is_shift_invariant(family, m, h, t):
    model = build_model(family, m, h)
    vecs = {incidence_vector(f).bits for f in enumerate_flats(model, t)}
    assert len(vecs) == flat_count(model, t)
    for v in list(vecs)[:50]:
        assert cyclic_shift(IncidenceVector(model, v), 1).bits in vecs


@pytest.mark.parametrize("family,m,h,t", [("pg", 4, 2, 2), ("eg", 3, 2, 1), ("eg", 4, 1, 2), ("eg", 3, 2, 2)])
def test_each_point_in_equally_many_flats(family, m, h, t):
    model = build_model(family, m, h)
    counts = Counter()
    for f in enumerate_flats(model, t):
        counts.update(incidence_vector(f).support())
    assert len(counts) == model.n
    assert len(set(counts.values())) == 1


def test_sample_mode_is_seeded_and_valid():
    model = build_model("eg", 5, 2)
    a = [f.to_json() for f in enumerate_flats(model, 3, "sample", count=5, seed=7)]
    b = [f.to_json() for f in enumerate_flats(model, 3, "sample", count=5, seed=7)]
    assert a == b
    for f in enumerate_flats(model, 3, "sample", count=20, seed=3):
        assert incidence_vector(f).weight == 4**3


def test_flat_json_round_trip():
    model = build_model("pg", 4, 2)
    f = next(iter(enumerate_flats(model, 2)))
    g = Flat.from_json(f.to_json())
    assert incidence_vector(g) == incidence_vector(f)


def test_enumeration_caps_and_ranges():
    with pytest.raises(ValueError, match="sample"):
        enumerate_flats(build_model("pg", 8, 2), 4)
    with pytest.raises(ValueError):
        enumerate_flats(build_model("pg", 4, 1), 4)
    with pytest.raises(ValueError, match="unknown"):
        enumerate_flats(build_model("pg", 4, 1), 2, "random")


def test_model_degree_cap():
    with pytest.raises(ValueError, match="max_degree"):
        build_model("pg", 10, 3)


def test_point_index_wraps_modulo_n():
    model = build_model("pg", 4, 2)
    assert point_index(model, model.ambient.alpha ** 342) == 1
    with pytest.raises(ValueError):
        point_index(model, 0)


@pytest.mark.parametrize("h", [1, 2, 3, 4])
def test_hyperoval_has_no_three_collinear_points(h):
    F = field(h)
    pts = [(x.rep, y.rep) for x, y in hyperoval(h)]
    assert len(set(pts)) == 2**h + 2
    assert (0, 0) in pts
    assert not any(collinear(F, *tri) for tri in itertools.combinations(pts, 3))


@pytest.mark.parametrize("m,h,t,d", [(4, 1, 2, 7), (4, 2, 3, 5), (4, 2, 2, 21), (5, 2, 3, 21)])
def test_pg_witness_weight(m, h, t, d):
    assert pg_min_weight_support(build_model("pg", m, h), t).weight == d


@pytest.mark.parametrize("m,h,t,d", [(5, 2, 3, 23), (5, 2, 4, 5), (5, 3, 4, 9), (4, 3, 2, 79)])
def test_eg_witness_weight(m, h, t, d):
    assert eg_min_weight_support(build_model("eg", m, h), t).weight == d


def test_witness_family_checks():
    with pytest.raises(ValueError):
        pg_min_weight_support(build_model("eg", 4, 1), 2)
    with pytest.raises(ValueError):
        eg_min_weight_support(build_model("pg", 4, 1), 2)


@settings(max_examples=50)
@given(st.integers(0, (1 << 31) - 1), st.integers(-100, 100))
def test_cyclic_shift_composes(bits, s):
    model = build_model("pg", 4, 1)
    v = IncidenceVector(model, bits)
    assert cyclic_shift(cyclic_shift(v, s), -s) == v
    assert cyclic_shift(v, s).weight == v.weight
    assert complement_vector(complement_vector(v)) == v


def test_incidence_vector_hex_round_trip():
    model = build_model("eg", 3, 1)
    v = incidence_vector(next(iter(enumerate_flats(model, 1))))
    assert IncidenceVector.from_hex(model, v.to_hex()) == v
    with pytest.raises(ValueError):
        IncidenceVector.from_hex(model, hex(1 << 10))

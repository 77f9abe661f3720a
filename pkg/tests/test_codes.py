import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qsyncgeom.algebra import BitPoly, InvariantViolation, cyclotomic_coset, field, minimal_polynomial, order_of_two, parse_poly
from qsyncgeom.codes import (
    BitMatrix,
    CyclicCode,
    bch_bound,
    code_from_generator,
    contains_word,
    exhaustive_min_distance,
    is_dual_containing,
    is_subcode,
    min_distance,
    rank_gf2,
    weight_search,
)
from qsyncgeom.geomcodes import geometry_code, index_set
from qsyncgeom.geometry import build_model, enumerate_flats, incidence_vector

LENGTHS = (7, 9, 15, 17, 21, 23)


def cosets(n):
    seen, out = set(), []
    for j in range(n):
        if j not in seen:
            c = cyclotomic_coset(j, n)
            seen.update(c)
            out.append(c)
    return out


def cyclic_code(n, chosen):
    e = order_of_two(n)
    beta = field(e).alpha ** ((2**e - 1) // n)
    g = BitPoly(1)
    roots = []
    for c in chosen:
        g = g * minimal_polynomial(c[0], beta, n)
        roots.extend(c)
    return code_from_generator(n, g, roots)


@st.composite
def small_codes(draw, lengths=LENGTHS):
    n = draw(st.sampled_from(lengths))
    cs = cosets(n)
    mask = draw(st.lists(st.booleans(), min_size=len(cs), max_size=len(cs)))
    return cyclic_code(n, [c for c, keep in zip(cs, mask) if keep])


def clmod(a, g):
    dg = g.bit_length() - 1
    while a and a.bit_length() - 1 >= dg:
        a ^= g << (a.bit_length() - 1 - dg)
    return a


def brute_codewords(code):
    rows = [code.g.bits << i for i in range(code.k)]
    out = []
    for coeffs in itertools.product((0, 1), repeat=code.k):
        w = 0
        for c, r in zip(coeffs, rows):
            if c:
                w ^= r
        out.append(w)
    return out


def brute_dual(code):
    rows = [code.g.bits << i for i in range(code.k)]
    return [v for v in range(1 << code.n) if all((v & r).bit_count() % 2 == 0 for r in rows)]


def plain_rank(rows):
    basis = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in basis:
                basis[top] = r
                break
            r ^= basis[top]
    return len(basis)


# --- construction ----------------------------------------------------------------


def test_hamming_7_4():
    code = code_from_generator(7, parse_poly("x^3+x+1"))
    assert code.k == 4
    assert code.check_poly == parse_poly("x^4+x^2+x+1")
    assert exhaustive_min_distance(code) == 3
    assert len(code.generator_matrix()) == 4
    assert rank_gf2(code.parity_check_matrix()) == 3


def test_generator_must_divide():
    with pytest.raises(ValueError, match="divide"):
        code_from_generator(7, parse_poly("x^2+1"))
    with pytest.raises(ValueError):
        code_from_generator(7, BitPoly(0))


@settings(max_examples=40, deadline=None)
@given(small_codes(), st.integers(0, 2**30))
def test_encoded_words_are_codewords_and_shift_closed(code, msg):
    msg &= (1 << code.k) - 1
    w = code.encode(msg)
    assert contains_word(code, w)
    full = (1 << code.n) - 1
    shifted = ((w << 1) | (w >> (code.n - 1))) & full
    assert contains_word(code, shifted)


def test_contains_word_accepts_several_forms():
    code = code_from_generator(7, parse_poly("x^3+x+1"))
    assert contains_word(code, [1, 1, 0, 1, 0, 0, 0])
    assert contains_word(code, parse_poly("x^3+x+1"))
    assert not contains_word(code, 1)
    with pytest.raises(ValueError):
        contains_word(code, [1, 0])
    with pytest.raises(ValueError):
        contains_word(code, 1 << 7)


def test_flat_incidence_vectors_lie_in_pg_code():
    code = geometry_code("pg", 4, 1, 2)
    model = build_model("pg", 4, 1)
    for f in enumerate_flats(model, 2):
        assert contains_word(code, incidence_vector(f))


# --- dual containment ---------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(small_codes(lengths=(7, 9, 15)))
def test_dual_containing_methods_agree_with_brute_force(code):
    want = all(clmod(v, code.g.bits) == 0 for v in brute_dual(code))
    for method in ("matrix", "poly", "roots", "auto"):
        assert is_dual_containing(code, method) == want, method


def test_dual_containing_known_cases():
    hamming = code_from_generator(7, parse_poly("x^3+x+1"))
    assert is_dual_containing(hamming)
    rep = code_from_generator(7, parse_poly("x^6+x^5+x^4+x^3+x^2+x+1"))
    assert not is_dual_containing(rep)
    assert is_dual_containing(code_from_generator(7, BitPoly(1)))
    assert is_dual_containing(geometry_code("eg", 5, 2, 3), "poly")


def test_dual_containing_matrix_cap_message():
    code = geometry_code("eg", 9, 2, 6)
    with pytest.raises(ValueError, match="matrix cap"):
        is_dual_containing(code, "matrix")
    assert is_dual_containing(code, "roots")
    with pytest.raises(ValueError, match="unknown"):
        is_dual_containing(code_from_generator(7, parse_poly("x+1")), "guess")


def test_is_subcode():
    a = code_from_generator(7, parse_poly("x^4+x^3+x^2+1"))
    b = code_from_generator(7, parse_poly("x^3+x+1"))
    assert is_subcode(a, b)
    assert not is_subcode(b, a)
    with pytest.raises(ValueError):
        is_subcode(a, code_from_generator(15, parse_poly("x^4+x+1")))


@settings(max_examples=30, deadline=None)
@given(small_codes(lengths=(15, 21)), st.data())
def test_subcode_is_a_partial_order_on_root_sets(code, data):
    # dropping a root coset from the zero set always enlarges the code
    if not code.roots:
        return
    keep = data.draw(st.sets(st.sampled_from(sorted(code.roots))))
    chosen = [c for c in cosets(code.n) if c[0] in keep and set(c) <= set(code.roots)]
    bigger = cyclic_code(code.n, chosen)
    assert is_subcode(code, bigger)
    assert is_subcode(code, code)
    if bigger.g != code.g:
        assert not is_subcode(bigger, code)


# --- rank ------------------------------------------------------------------------


def test_rank_basic():
    assert rank_gf2([1, 2, 4, 8], n=4) == 4
    assert rank_gf2([5, 5, 0, 3], n=3) == 2
    assert rank_gf2(BitMatrix(200, [1 << 199, 1 << 199 | 1, 1])) == 2


@settings(max_examples=60)
@given(st.lists(st.integers(0, (1 << 130) - 1), max_size=40))
def test_rank_matches_plain_elimination(rows):
    assert rank_gf2(rows, n=130) == plain_rank(rows)


def test_rank_of_pg_4_1_planes():
    model = build_model("pg", 4, 1)
    rows = [incidence_vector(f).bits for f in enumerate_flats(model, 2)]
    assert rank_gf2(rows, n=31) == 16


def test_bitmatrix_from_array():
    data = np.array([[1, 0, 1], [0, 1, 1]], dtype=np.uint8)
    m = BitMatrix.from_array(3, data)
    assert m.rows() == [0b101, 0b110]
    assert m.shape == (2, 3)


# --- distance ----------------------------------------------------------------------


def test_bch_bound_examples():
    assert bch_bound([], 15) == 1
    assert bch_bound([1, 2, 4, 8], 15) == 3
    assert bch_bound([14, 0, 1], 15) == 4
    assert bch_bound(index_set("eg", 5, 2, 3)) == 23
    with pytest.raises(ValueError):
        bch_bound([1])


@settings(max_examples=40, deadline=None)
@given(small_codes())
def test_exhaustive_matches_brute_force(code):
    assume(0 < code.k <= 14)
    words = brute_codewords(code)
    want = min(w.bit_count() for w in words if w)
    assert exhaustive_min_distance(code) == want
    rep = min_distance(code)
    assert rep.certified and rep.value == want and rep.method == "exhaustive"


@settings(max_examples=40, deadline=None)
@given(small_codes())
def test_bounds_never_exceed_true_distance(code):
    assume(0 < code.k <= 14)
    want = min(w.bit_count() for w in brute_codewords(code) if w)
    rep = min_distance(code, strategy="bounds")
    assert rep.lower <= want
    if rep.certified:
        assert rep.value == want
    lower, found, word = weight_search(code, 4)
    assert lower <= want
    if found is not None:
        assert found == want and word.bit_count() == found and contains_word(code, word)


def test_min_distance_witness_certifies():
    code = geometry_code("eg", 5, 2, 4)
    model = build_model("eg", 5, 2)
    from qsyncgeom.geometry import eg_min_weight_support

    w = eg_min_weight_support(model, 4)
    rep = min_distance(code, witness=w, strategy="bounds")
    assert rep.certified and rep.value == 5
    with pytest.raises(InvariantViolation):
        min_distance(code, witness=1, strategy="bounds")


def test_min_distance_errors_and_json():
    code = code_from_generator(7, parse_poly("x^3+x+1"))
    with pytest.raises(ValueError, match="strategy"):
        min_distance(code, strategy="magic")
    js = min_distance(code).to_json()
    assert js["value"] == 3 and js["certified"]
    with pytest.raises(ValueError):
        exhaustive_min_distance(code_from_generator(7, parse_poly("x^7+1")))


def test_cyclic_code_equality_ignores_roots():
    a = code_from_generator(7, parse_poly("x^3+x+1"), [1, 2, 4])
    b = CyclicCode(7, parse_poly("x^3+x+1"), None)
    assert a == b


@pytest.mark.parametrize("m,h", [(5, 1), (5, 2), (6, 1), (7, 1)])
def test_chain_order_and_inherited_dual_containment(m, h):
    chain = [geometry_code("pg", m, h, t) for t in range((m + 2) // 2, m)]
    for i, a in enumerate(chain):
        assert is_subcode(a, a)
        for b in chain[i + 1:]:
            assert is_subcode(a, b) and not is_subcode(b, a)
            if is_dual_containing(a):
                assert is_dual_containing(b)

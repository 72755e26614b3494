import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import codeword_dimension_prime
from pglab import generators, linalg
from pglab.code import (
    Codeword,
    LineCombination,
    combination,
    decompose,
    dual_multiset,
    incidence_vector,
    line_code,
    supported_subspace,
)
from pglab.field import create_field, prime_power
from pglab.multiset import secant_spectrum
from pglab.plane import build_plane


def plane_of(q):
    return build_plane(create_field(*prime_power(q)))


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_dimension_formula(p):
    code = line_code(plane_of(p))
    assert code.dimension == codeword_dimension_prime(p)
    assert code.dual_dimension == code.n - code.dimension


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_dual_inside_code(p):
    plane = plane_of(p)
    code = line_code(plane)
    assert code.dimension == code.dual_dimension + 1
    for row in code.dual_basis:
        c = Codeword(plane, row)
        assert c.is_dual()
        cert = code.is_codeword(c)
        assert cert is not None and cert.evaluate(plane) == c


def test_line_vector_single_certificate():
    plane = plane_of(3)
    l = plane.index((1, 2, 0))
    v = incidence_vector(plane, l)
    assert v.weight == 4
    cert = line_code(plane).is_codeword(v.scale(2))
    assert cert.terms == {l: 2}


def test_weight_one_not_member():
    plane = plane_of(19)
    c = Codeword.from_sparse(plane, {5: 1})
    assert line_code(plane).is_codeword(c) is None


@pytest.mark.parametrize("p", [2, 3])
def test_full_enumeration_small_weights(p):
    plane = plane_of(p)
    code = line_code(plane)
    words = linalg.span_vectors(code.basis, p)
    w = np.count_nonzero(words, axis=1)
    nonzero = words[w > 0]
    wts = np.count_nonzero(nonzero, axis=1)
    assert wts.min() == p + 1
    multiples = {tuple((incidence_vector(plane, l).values * a % p).tolist()) for l in range(plane.n) for a in range(1, p)}
    assert {tuple(r.tolist()) for r in nonzero[wts == p + 1]} == multiples
    if p == 3:
        assert 5 not in set(wts.tolist())


@settings(max_examples=40, deadline=None)
@given(q=st.sampled_from([3, 4, 5, 7, 9]), seed=st.integers(0, 2**32 - 1))
def test_combinations_have_constant_line_sums(q, seed):
    plane = plane_of(q)
    rng = np.random.default_rng(seed)
    lines = [int(l) for l in rng.choice(plane.n, 4, replace=False)]
    terms = {l: int(rng.integers(0, plane.p)) for l in lines}
    c = combination(plane, terms)
    assert set(c.line_sums().tolist()) == {sum(terms.values()) % plane.p}
    cert = line_code(plane).is_codeword(c)
    assert cert is not None and cert.evaluate(plane) == c


def test_lex_first_certificate_is_stable():
    plane = plane_of(5)
    code = line_code(plane)
    c = combination(plane, {3: 1, 10: 2, 20: 4})
    a, b = code.is_codeword(c), code.is_codeword(c)
    assert a.terms == b.terms


def test_decompose():
    plane = plane_of(7)
    lines = [plane.index((1, 0, 0)), plane.index((0, 1, 0)), plane.index((1, 1, 1))]
    c = combination(plane, {lines[0]: 2, lines[1]: 5, lines[2]: 1})
    assert decompose(c, lines) == {lines[0]: 2, lines[1]: 5, lines[2]: 1}
    assert decompose(c, lines[:2]) is None
    assert decompose(Codeword.zero(plane), []) == {}
    with pytest.raises(ValueError):
        decompose(c, list(range(5)))


def test_supported_subspace():
    plane = plane_of(5)
    code = line_code(plane)
    l1, l2 = plane.index((1, 0, 0)), plane.index((0, 1, 0))
    pts = set(plane.line_points[l1].tolist()) | set(plane.line_points[l2].tolist())
    sub = supported_subspace(code, pts)
    # spanned by the two lines: every codeword on their union is a combination of them
    assert sub.dimension == 2
    for c in sub.codewords(plane):
        assert set(c.support) <= pts and decompose(c, [l1, l2]) is not None


def test_dual_multiset_weight():
    plane = plane_of(5)
    comb = LineCombination({2: 1, 9: 3, 17: 4})
    c = comb.evaluate(plane)
    d = dual_multiset(comb, plane)
    assert secant_spectrum(d, 0).delta == c.weight


def test_codeword_shape_checked():
    with pytest.raises(ValueError):
        Codeword(plane_of(3), np.zeros(5))


def test_random_kmodp_is_codeword_multiset():
    plane = plane_of(7)
    rng = np.random.default_rng(9)
    m = generators.random_kmodp(plane, 4, rng)
    c = Codeword(plane, m.weights)
    assert line_code(plane).contains(c)

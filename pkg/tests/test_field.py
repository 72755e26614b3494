import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import OracleField, smallest_irreducible
from pglab.field import (
    Field,
    FieldError,
    create_field,
    default_modulus,
    format_modulus,
    is_irreducible,
    parse_modulus,
    prime_power,
)

ORDERS = [(2, 1), (3, 1), (7, 1), (2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (7, 2), (3, 4)]


@pytest.mark.parametrize(
    "p,h,expected",
    [(3, 2, (1, 0, 1)), (2, 3, (1, 1, 0, 1)), (3, 3, (1, 2, 0, 1)), (5, 2, (2, 0, 1)), (2, 2, (1, 1, 1))],
)
def test_default_modulus_known(p, h, expected):
    assert default_modulus(p, h) == expected


@pytest.mark.parametrize("p,h", [(2, 4), (3, 4), (7, 2), (2, 5), (5, 3)])
def test_default_modulus_matches_oracle(p, h):
    assert default_modulus(p, h) == smallest_irreducible(p, h)


def test_irreducibility():
    assert is_irreducible((1, 0, 1), 3)
    assert not is_irreducible((1, 0, 1), 2)  # x^2+1 = (x+1)^2
    assert not is_irreducible((2, 0, 1), 3)  # x^2+2 has root 1
    assert not is_irreducible((1, 0, 1, 0, 1), 2)  # (x^2+x+1)^2


@pytest.mark.parametrize("p,h", [(2, 2), (3, 2), (2, 3), (5, 2), (3, 3)])
def test_tables_match_oracle(p, h):
    f = create_field(p, h)
    o = OracleField(p, h)
    for a in range(f.q):
        for b in range(f.q):
            assert f.mul(a, b) == o.mul(a, b)
            assert f.add(a, b) == o.add(a, b)


def test_prime_power():
    assert prime_power(81) == (3, 4)
    assert prime_power(7) == (7, 1)
    with pytest.raises(FieldError):
        prime_power(12)
    with pytest.raises(FieldError):
        Field(4)


def test_bad_modulus_rejected():
    with pytest.raises(FieldError):
        Field(3, 2, (2, 0, 1))
    with pytest.raises(FieldError):
        Field(3, 2, (1, 1))


def test_modulus_text():
    assert parse_modulus("-") is None
    assert parse_modulus("1,0,1") == (1, 0, 1)
    assert format_modulus(create_field(3, 2)) == "1,0,1"
    assert format_modulus(create_field(5)) == "-"


def test_vector_ops_agree_with_scalar():
    f = create_field(3, 3)
    a = np.arange(f.q)
    b = (a * 7 + 3) % f.q
    assert f.vmul(a, b).tolist() == [f.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert f.vadd(a, b).tolist() == [f.add(int(x), int(y)) for x, y in zip(a, b)]
    nz = a[1:]
    assert f.vinv(nz).tolist() == [f.inv(int(x)) for x in nz]


def test_pow_and_inverse_edge_cases():
    f = create_field(5, 2)
    assert f.pow(0, 0) == 1
    assert f.pow(7, f.q - 1) == 1
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


@st.composite
def field_and_elems(draw):
    p, h = draw(st.sampled_from(ORDERS))
    f = create_field(p, h)
    e = st.integers(0, f.q - 1)
    return f, draw(e), draw(e), draw(e)


@settings(max_examples=300, deadline=None)
@given(field_and_elems())
def test_field_axioms(data):
    f, a, b, c = data
    assert f.add(a, b) == f.add(b, a)
    assert f.mul(a, b) == f.mul(b, a)
    assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.add(a, f.neg(a)) == 0
    assert f.add(a, 0) == a and f.mul(a, 1) == a
    if a:
        assert f.mul(a, f.inv(a)) == 1
        assert f.pow(a, f.q - 1) == 1
    # Frobenius is additive
    assert f.pow(f.add(a, b), f.p) == f.add(f.pow(a, f.p), f.pow(b, f.p))

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import PARAMS, elements, nonzero_elements, params_st
from lfwsets.errors import DomainError, ParamsMismatchError, SetFileError
from lfwsets.field import (
    Cyclotomic,
    FieldElement,
    FieldParams,
    GFqElem,
    RootOfUnity,
    chi,
    default_params,
    enumerate_translations,
    parse_element,
    u_inverse,
    u_map,
)

P2 = default_params(2)
P3 = default_params(3)
Q4 = default_params(2, 2)


def E(params, d):
    return FieldElement.from_dict(params, d)


# -- frozen values ---------------------------------------------------------


def test_gf4_multiplication_table():
    # X * X = X + 1 modulo X^2 + X + 1; codes: 1 -> 1, X -> 2, X+1 -> 3
    assert Q4.mul_table[2][2] == 3
    assert Q4.mul_table[3][3] == 2
    assert Q4.mul_table[2][3] == 1
    assert Q4.add_table[2][3] == 1
    assert (GFqElem(Q4, 2) * GFqElem(Q4, 2)).code == 3


def test_u_small_values():
    assert u_map(0, P2) == FieldElement.zero(P2)
    assert u_map(1, P2) == E(P2, {-1: 1})
    assert u_map(2, P2) == E(P2, {-2: 1})
    assert u_map(3, P2) == E(P2, {-2: 1, -1: 1})
    assert u_map(5, P3) == E(P3, {-2: 1, -1: 2})
    assert u_map(6, Q4) == E(Q4, {-2: 1, -1: 2})


def test_character_values():
    assert chi(E(P2, {-1: 1})) == RootOfUnity(1, 2)
    assert chi(E(P2, {0: 1, 3: 1})) == RootOfUnity(0, 2)
    assert chi(E(P3, {-1: 2, -2: 1})) == RootOfUnity(2, 3)
    assert chi(E(Q4, {-1: 2})) == RootOfUnity(0, 2)
    assert chi(E(Q4, {-1: 3})) == RootOfUnity(1, 2)
    assert complex(RootOfUnity(1, 2)) == pytest.approx(-1)


def test_to_expr_examples():
    assert E(P2, {-1: 1, -2: 1}).to_expr() == "(1)@-2 + (1)@-1"
    assert E(Q4, {0: 3}).to_expr() == "(1,1)@0"
    assert FieldElement.zero(P2).to_expr() == "0"


def test_parse_element_errors():
    with pytest.raises(SetFileError, match="digit 2 >= p=2"):
        parse_element("(2)@-1", P2, line=4)
    with pytest.raises(SetFileError, match="malformed monomial"):
        parse_element("1@-1", P2)
    with pytest.raises(SetFileError, match="needs 2 digits"):
        parse_element("(1)@0", Q4)


def test_field_params_validation():
    with pytest.raises(DomainError, match="not prime"):
        FieldParams(4, 1, (0, 1))
    with pytest.raises(DomainError, match="reducible"):
        FieldParams(2, 2, (1, 0, 1))
    with pytest.raises(DomainError, match="monic"):
        FieldParams(3, 1, (0, 2))
    assert FieldParams(2, 2, (1, 1, 1)).q == 4


def test_params_mismatch():
    with pytest.raises(ParamsMismatchError):
        FieldElement.one(P2) + FieldElement.one(P3)


def test_u_inverse_rejects_integral_part():
    with pytest.raises(DomainError):
        u_inverse(E(P2, {0: 1}))
    with pytest.raises(DomainError):
        u_map(-1, P2)


def test_enumerate_translations_is_the_coset_grid():
    xs = enumerate_translations(3, P3)
    assert len(xs) == 27 and len(set(xs)) == 27
    assert all(x.valuation is None or -3 <= x.valuation < 0 for x in xs)


def test_cyclotomic_cancellation():
    # 1 + zeta + zeta^2 = 0 in Q(zeta_3)
    s = Cyclotomic(3)
    for k in range(3):
        s = s + Cyclotomic.term(RootOfUnity(k, 3), 1)
    assert s.is_zero()
    half = Cyclotomic.term(RootOfUnity(1, 2), Fraction(1, 2))
    assert complex(half) == pytest.approx(-0.5)


# -- properties --------------------------------------------------------------


@given(st.data())
def test_ring_axioms(data):
    P = data.draw(params_st)
    x, y, z = (data.draw(elements(P)) for _ in range(3))
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == FieldElement.zero(P)
    assert x * FieldElement.one(P) == x


@given(st.data())
def test_valuation_laws(data):
    P = data.draw(params_st)
    x, y = data.draw(nonzero_elements(P)), data.draw(nonzero_elements(P))
    assert (x * y).valuation == x.valuation + y.valuation
    assert (x * y).abs() == x.abs() * y.abs()
    s = x + y
    if s:
        assert s.abs() <= max(x.abs(), y.abs())
        if x.abs() != y.abs():
            assert s.abs() == max(x.abs(), y.abs())


@given(st.data())
def test_character_is_additive_and_trivial_on_integers(data):
    P = data.draw(params_st)
    x, y = data.draw(elements(P)), data.draw(elements(P))
    assert chi(x + y) == chi(x) * chi(y)
    assert chi(-x) == chi(x).conjugate()
    assert chi(x.tail(0)) == RootOfUnity(0, P.p)


def test_character_nontrivial_on_inverse_prime_ideal(params):
    vals = {chi(FieldElement.monomial(params, a, -1)).exponent for a in range(params.q)}
    assert vals != {0}


@given(st.data())
def test_u_additive_decomposition(data):
    P = data.draw(params_st)
    k = data.draw(st.integers(0, 4))
    r = data.draw(st.integers(0, 500))
    s = data.draw(st.integers(0, P.q ** k - 1))
    assert u_map(r * P.q ** k + s, P) == u_map(r, P).shift(-k) + u_map(s, P)


@given(st.data())
def test_u_absolute_value_and_inverse(data):
    P = data.draw(params_st)
    n = data.draw(st.integers(1, 10 ** 4))
    x = u_map(n, P)
    k = -x.valuation
    assert P.q ** (k - 1) <= n < P.q ** k
    assert u_inverse(x) == n


@given(st.data())
def test_expr_roundtrip(data):
    P = data.draw(params_st)
    x = data.draw(elements(P))
    assert parse_element(x.to_expr(), P) == x


@given(st.data())
def test_shift_truncate_tail(data):
    P = data.draw(params_st)
    x = data.draw(elements(P))
    s = data.draw(st.integers(-5, 5))
    j = data.draw(st.integers(-3, 3))
    assert x.truncate(s) + x.tail(s) == x
    assert x.shift(j) == x * FieldElement.uniformizer_power(P, j)


@pytest.mark.parametrize("P", PARAMS, ids=lambda P: f"q{P.q}")
def test_translations_closed_under_negation(P):
    for k in range(0, 4):
        grid = set(enumerate_translations(k, P))
        assert {-x for x in grid} == grid
        assert {x + y for x in grid for y in list(grid)[:5]} == grid

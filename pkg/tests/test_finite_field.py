import random

import pytest

from src.errors import DegreeMismatch, DivisionByZero, ExponentOutOfRange, NotPrime, Reducible, ZeroPolynomial
from src.finite_field import (
    FPoly,
    count_roots,
    f_add,
    f_inv,
    f_mul,
    field_of_order,
    frobenius,
    make_field,
    parse_field,
    smallest_irreducible,
    subfield_size,
)


def test_prime_field_modulus_is_x():
    spec = make_field(2, 1)
    assert spec.modulus == (0, 1)
    assert spec.n == 2


def test_default_moduli_are_lexicographically_smallest():
    assert make_field(2, 2).modulus == (1, 1, 1)
    assert make_field(2, 3).modulus == (1, 0, 1, 1)
    assert make_field(3, 2).modulus == (1, 0, 1)
    assert smallest_irreducible(2, 4) == (1, 0, 0, 1, 1)


def test_make_field_rejects_bad_input():
    with pytest.raises(NotPrime):
        make_field(4, 1)
    with pytest.raises(Reducible):
        make_field(2, 2, [1, 0, 1])
    with pytest.raises(DegreeMismatch):
        make_field(2, 2, [1, 1, 0, 1])
    with pytest.raises(DegreeMismatch):
        make_field(2, 0)


def test_gf4_arithmetic(gf4):
    for a in gf4.elements():
        assert f_add(gf4, a, a) == 0
    assert f_mul(gf4, 2, 3) == 1
    assert f_inv(gf4, 2) == 3


def test_gf5_inverse():
    assert f_inv(make_field(5), 2) == 3


def test_inverse_of_zero():
    with pytest.raises(DivisionByZero):
        f_inv(make_field(7), 0)
    with pytest.raises(ZeroDivisionError):
        make_field(2, 2).div(1, 0)


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25])
def test_field_axioms_exhaustive(q):
    spec = field_of_order(q)
    elements = list(spec.elements())
    for a in elements:
        assert spec.add(a, spec.neg(a)) == 0
        assert spec.mul(a, 1) == a
        if a:
            assert spec.mul(a, spec.inv(a)) == 1
        for b in elements:
            assert spec.add(a, b) == spec.add(b, a)
            assert spec.mul(a, b) == spec.mul(b, a)
    rng = random.Random(q)
    for _ in range(500):
        a, b, c = (rng.randrange(q) for _ in range(3))
        assert spec.mul(a, spec.add(b, c)) == spec.add(spec.mul(a, b), spec.mul(a, c))
        assert spec.mul(spec.mul(a, b), c) == spec.mul(a, spec.mul(b, c))
        assert spec.add(spec.add(a, b), c) == spec.add(a, spec.add(b, c))


def test_multiplication_matches_polynomial_product():
    spec = make_field(3, 2)
    for a in spec.elements():
        for b in spec.elements():
            assert spec.mul(a, b) == spec._mul_raw(a, b)


def test_frobenius(gf4, gf8):
    assert frobenius(gf4, 2, 1) == 3
    for a in gf8.elements():
        assert frobenius(gf8, a, 0) == a
        assert frobenius(gf8, frobenius(gf8, a, 1), 1) == frobenius(gf8, a, 2)
    with pytest.raises(ExponentOutOfRange):
        frobenius(gf8, 1, 3)


@pytest.mark.parametrize("q", [4, 8, 9, 16, 27])
def test_frobenius_is_an_automorphism(q):
    spec = field_of_order(q)
    for i in range(spec.k):
        images = [spec.frobenius(a, i) for a in spec.elements()]
        assert sorted(images) == list(spec.elements())
        for a in range(q):
            for b in range(0, q, 3):
                assert spec.frobenius(spec.add(a, b), i) == spec.add(images[a], images[b])
                assert spec.frobenius(spec.mul(a, b), i) == spec.mul(images[a], images[b])


def test_count_roots_in_gf4(gf4):
    assert count_roots(gf4, FPoly(gf4, [0, 1, 1])) == 2  # x^2 - x
    assert count_roots(gf4, FPoly.from_terms(gf4, {4: 1, 1: 1})) == 4  # x^4 - x
    assert count_roots(gf4, FPoly(gf4, [1, 1, 1])) == 2
    with pytest.raises(ZeroPolynomial):
        count_roots(gf4, FPoly(gf4, [0, 0]))


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27, 32, 49, 64, 81])
def test_root_count_chain(q):
    spec = field_of_order(q)
    rng = random.Random(q)
    for i in range(1, spec.k):
        t = FPoly.from_terms(spec, {spec.p ** i: 1, 1: spec.neg(1)})
        bound = count_roots(spec, t)
        assert bound == subfield_size(spec, i)
        for _ in range(200 if q <= 27 else 20):
            a, b = rng.randrange(1, q), rng.randrange(q)
            t_a = FPoly.from_terms(spec, {spec.p ** i: 1, 1: a})
            t_ab = FPoly.from_terms(spec, {spec.p ** i: 1, 1: a, 0: b})
            assert count_roots(spec, t_ab) <= count_roots(spec, t_a) <= bound


def test_field_render_round_trip(gf8):
    assert gf8.render() == "GF(2^3)/modulus=1,0,1,1"
    assert parse_field(gf8.render()) == gf8
    with pytest.raises(DegreeMismatch):
        parse_field("GF8")


def test_field_of_order_rejects_non_prime_powers():
    with pytest.raises(NotPrime):
        field_of_order(12)


def test_polynomial_arithmetic(gf4):
    f = FPoly(gf4, [1, 2, 3])
    assert (f - f).is_zero()
    assert (f + FPoly(gf4, [0, 0, 3])).degree == 1
    assert f(0) == 1

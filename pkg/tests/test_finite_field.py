import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from errors import DomainError, NotFoundError, ParameterError
from finite_field import (
    FqField,
    FqPoly,
    discrete_log,
    embed,
    find_root,
    is_normal,
    is_square,
    make_field,
    minimal_polynomial,
    mult_generator,
    multiplicative_order,
    rel_trace,
    roots_in,
    sqrt_ff,
)

F27 = make_field(3, 3)
F81 = make_field(3, 4)

elements27 = st.lists(st.integers(0, 2), min_size=3, max_size=3).map(F27.element)
elements81 = st.lists(st.integers(0, 2), min_size=4, max_size=4).map(F81.element)


def test_make_field_modulus_has_no_roots():
    for p, m in [(2, 3), (3, 3), (5, 2), (7, 3)]:
        field = make_field(p, m)
        assert field.degree == m
        assert field.size == p ** m
        values = [sum(c * a ** i for i, c in enumerate(field.modulus)) % p for a in range(p)]
        assert all(values)


def test_from_modulus_rejects_reducible():
    with pytest.raises(ParameterError):
        FqField.from_modulus(3, [1, 0, 1, 1])  # X^3 + X^2 + 1 vanishes at 1


def test_nonprime_characteristic_rejected():
    with pytest.raises(ParameterError):
        make_field(9, 2)


@given(elements27, elements27, elements27)
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == F27.zero()


@given(elements81)
def test_inverse(x):
    assume(not x.is_zero())
    assert (x * x.inverse()).is_one()
    assert x / x == 1


@given(elements81, st.integers(0, 5))
def test_frobenius_is_pth_power(x, j):
    assert x.frobenius(j) == x ** (3 ** j)


def test_zero_has_no_inverse():
    with pytest.raises(DomainError):
        F27.zero().inverse()


def test_subfield_enumeration(f81):
    sub = f81.subfield(2)
    elements = list(sub.elements())
    assert len(elements) == 9
    assert len({e.key() for e in elements}) == 9
    assert all(sub.contains(e) for e in elements)
    assert not sub.contains(f81.gen())
    with pytest.raises(ParameterError):
        f81.subfield(3)


@given(elements81)
def test_rel_trace_lands_in_subfield(x):
    sub = F81.subfield(2)
    assert sub.contains(rel_trace(x, 9, 2))
    assert F81.prime_subfield().contains(rel_trace(x, 3, 4))


def test_rel_trace_of_one_is_degree():
    assert rel_trace(F81.one(), 3, 4) == 4 % 3


@given(elements81, elements81, st.integers(0, 2))
def test_rel_trace_linear_and_transitive(x, y, c):
    k = F81.from_int(c)
    assert rel_trace(x + k * y, 3, 4) == rel_trace(x, 3, 4) + k * rel_trace(y, 3, 4)
    assert rel_trace(rel_trace(x, 9, 2), 3, 2) == rel_trace(x, 3, 4)


@given(elements81)
def test_sqrt_of_square(a):
    s = sqrt_ff(a * a)
    assert s * s == a * a
    assert s.key() <= (-s).key()


def test_square_count_in_f9():
    f9 = make_field(3, 2)
    squares = [x for x in f9.elements() if is_square(x)]
    assert len(squares) == 5
    non_square = next(x for x in f9.elements() if not is_square(x))
    with pytest.raises(DomainError):
        sqrt_ff(non_square)


def test_mult_generator_order():
    f9 = make_field(3, 2)
    g = mult_generator(f9)
    assert multiplicative_order(g, 8) == 8
    earlier = [x for x in f9.elements() if x.key() < g.key() and not x.is_zero()]
    assert all(multiplicative_order(x, 8) < 8 for x in earlier)


def test_root_of_cubic_is_normal(f27):
    f = FqPoly.from_ints(f27, [1, 0, -1, 1])
    eta = find_root(f, f27)
    assert f(eta).is_zero()
    assert is_normal(eta, f27.prime_subfield(), 3)
    assert minimal_polynomial(eta) == f


def test_roots_in_sorted(f27):
    a, b = f27.gen(), f27.gen() + 1
    f = FqPoly(f27, [a * b, -(a + b), f27.one()])
    assert roots_in(f, f27) == sorted([a, b], key=lambda r: r.key())


def test_find_root_missing():
    f3 = make_field(3, 1)
    with pytest.raises(NotFoundError):
        find_root(FqPoly.from_ints(f3, [1, 0, 1]), f3)


def test_trace_zero_element_not_normal(f27):
    x = f27.gen() - f27.gen().frobenius(1)
    assert rel_trace(x, 3, 3).is_zero()
    assert not is_normal(x, f27.prime_subfield(), 3)


def test_embed_preserves_minimal_polynomial():
    f9, f81 = make_field(3, 2), make_field(3, 4)
    x = f9.gen()
    image = embed(x, f81)
    assert f81.subfield(2).contains(image)
    ints = [int(c.coeffs[0]) for c in minimal_polynomial(x).coeffs]
    assert FqPoly.from_ints(f81, ints)(image).is_zero()
    assert embed(x * x + 1, f81) in {(image * image + 1), (image * image + 1).frobenius(1)}


@given(st.integers(0, 79))
def test_discrete_log(k):
    g = mult_generator(F81)
    assert discrete_log(g ** k, g, 80) == k

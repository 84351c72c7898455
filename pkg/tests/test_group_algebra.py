from functools import lru_cache

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from errors import DomainError, ParameterError
from finite_field import make_field
from group_algebra import (
    AbelianGroup,
    CharData,
    GroupAlgebraElem,
    char_decompose,
    char_recompose,
    group_act,
    hensel_sqrt,
    invert_unit,
    resolvend_gram,
    sqrt_modular_pgroup,
    sqrt_unipotent,
)
from padic import LocalBase, build_extension, local_ring
from sdnb_finite import FiniteExtension

C5 = AbelianGroup([5])
C3 = AbelianGroup([3])
F81 = make_field(3, 4)  # holds the 5th roots of unity over F_3
F3 = make_field(3, 1)
CD5 = CharData(5, F81.prime_subfield())


def f3_elements(group, field):
    return st.lists(st.integers(0, 2), min_size=group.order, max_size=group.order).map(
        lambda cs: GroupAlgebraElem(group, field, [field.from_int(c) for c in cs])
    )


def test_abelian_group_structure():
    g = AbelianGroup([2, 3])
    assert g.order == 6
    assert g.element(0) == (0, 0)
    for i in range(g.order):
        assert g.mul(i, g.inverses[i]) == 0
    assert len(g.subgroup([(1, 1)])) == 6
    assert g.subgroup([(0, 1)]) == [0, 1, 2]
    reps = g.coset_representatives(g.subgroup([(0, 1)]))
    assert reps == [0, 3]


def test_group_rejects_bad_orders():
    with pytest.raises(ParameterError):
        AbelianGroup([0])


@given(f3_elements(C5, F81), f3_elements(C5, F81))
def test_involution_and_augmentation(a, b):
    assert a.involution().involution() == a
    assert (a * b).involution() == a.involution() * b.involution()
    assert (a * b).augmentation() == a.augmentation() * b.augmentation()


@given(f3_elements(C5, F81))
def test_invert_unit_both_routes(a):
    assume(all(not v.is_zero() for v in char_decompose(a, CD5).values()))
    one = GroupAlgebraElem.one(C5, F81)
    assert a * invert_unit(a, CD5) == one
    assert a * invert_unit(a) == one


def test_non_unit_raises():
    a = GroupAlgebraElem(C5, F81, [F81.one()] * 5)  # sum of g kills every nontrivial character
    with pytest.raises(DomainError):
        invert_unit(a, CD5)


@given(f3_elements(C5, F81))
def test_character_transform_recovers_element(a):
    assert char_recompose(char_decompose(a, CD5), CD5) == a


def test_character_orbits():
    assert sorted(CD5.representatives) == [0, 1]
    assert CD5.orbits[1] == [1, 3, 4, 2]
    assert CD5.partner[1] == 1


@given(f3_elements(C3, F3))
def test_sqrt_unipotent(s):
    assume(s.augmentation().is_one())
    w = s * s
    root = sqrt_unipotent(w)
    assert root * root == w


@given(f3_elements(C3, F3))
def test_sqrt_modular_pgroup(s):
    assume(not s.augmentation().is_zero())
    u = s * s
    root = sqrt_modular_pgroup(u, F3.prime_subfield(), s.augmentation())
    assert root * root == u
    assert root.augmentation() == s.augmentation()


def test_sqrt_unipotent_rejects_non_unipotent():
    w = GroupAlgebraElem.one(C3, F3).scale(F3.from_int(2))
    with pytest.raises(DomainError):
        sqrt_unipotent(w)


def test_hensel_sqrt_recovers_root():
    ring = local_ring(5, 1, (0, 1), 20)
    group = AbelianGroup([3])
    s = GroupAlgebraElem(group, ring, [ring.one(), ring.from_int(1), ring.zero()])
    seed = GroupAlgebraElem(group, ring, [ring.one(), ring.from_int(6), ring.from_int(10)])
    w = hensel_sqrt(s * s, seed)
    assert w * w == s * s
    assert w == s


def test_hensel_sqrt_rejects_bad_seed():
    ring = local_ring(5, 1, (0, 1), 20)
    group = AbelianGroup([3])
    u = GroupAlgebraElem.one(group, ring)
    seed = GroupAlgebraElem.one(group, ring).scale(ring.from_int(2))
    with pytest.raises(DomainError):
        hensel_sqrt(u, seed)


def test_sqrt_of_group_element():
    zero, one = F3.zero(), F3.one()
    g = GroupAlgebraElem(C3, F3, [zero, one, zero])
    assert sqrt_unipotent(g) == GroupAlgebraElem(C3, F3, [zero, zero, one])


C6 = AbelianGroup([6])
C15 = AbelianGroup([15])


def power(group, k):
    return GroupAlgebraElem.basis(group, F3, k % group.order)


@pytest.mark.parametrize("group, unit", [
    (C6, lambda g: g(1)),
    (C6, lambda g: g(0) + g(2)),                 # image 2 in F_3[C_2]
    (C6, lambda g: g(0) + g(2) - g(3) + g(5)),   # image 2 in F_3[C_2]
    (C15, lambda g: g(0) + g(5)),                # image 2 in F_3[C_5]
    (C15, lambda g: g(0) + g(3)),                # image 1 + h, h of order 5
])
def test_split_inverse_of_mixed_order_units(group, unit):
    a = unit(lambda k: power(group, k))
    inv = invert_unit(a)
    assert a * inv == GroupAlgebraElem.one(group, F3)
    assert inv * a == GroupAlgebraElem.one(group, F3)


def test_split_inverse_of_group_element():
    assert invert_unit(power(C15, 1)) == power(C15, -1)


@given(f3_elements(C6, F3))
def test_split_inverse_agrees_with_definition(a):
    try:
        inv = invert_unit(a)
    except DomainError:
        return
    assert a * inv == GroupAlgebraElem.one(C6, F3)


def test_split_inverse_rejects_non_units():
    one = power(C6, 0)
    # g^3 has order 2: 1 + g^3 vanishes at the sign character
    with pytest.raises(DomainError):
        invert_unit(one + power(C6, 3))
    # g^2 has order 3: 1 - g^2 has zero augmentation on the 3-part
    with pytest.raises(DomainError):
        invert_unit(one - power(C6, 2))


@lru_cache(maxsize=None)
def law_case(name):
    """Extension, element strategy and coefficient-algebra strategy for one group algebra"""
    if name == "Z3[C5]":
        ext = build_extension(LocalBase(3, 1, prec=16, guard=4), "unramified", 5)
        ring = ext.ring
        digits = st.integers(-(3 ** 10), 3 ** 10)
        xs = st.lists(digits, min_size=5, max_size=5).map(ring.element)
        coeffs = digits.map(ring.from_int)
    else:
        universe, m, n = {"F9[C7]": (make_field(3, 14), 2, 7), "F7[C9]": (make_field(7, 9), 1, 9)}[name]
        base = universe.subfield(m)
        ext = FiniteExtension(base, n)
        ring = universe
        xs = st.lists(st.integers(0, universe.p - 1), min_size=universe.degree,
                      max_size=universe.degree).map(universe.element)
        coeffs = st.lists(st.integers(0, universe.p - 1), min_size=m, max_size=m).map(base.element)
    order = ext.group.order
    us = st.lists(coeffs, min_size=order, max_size=order).map(
        lambda cs: GroupAlgebraElem(ext.group, ring, cs))
    return ext, xs, us


@pytest.mark.parametrize("name", ["F9[C7]", "F7[C9]", "Z3[C5]"])
@settings(max_examples=10)
@given(data=st.data())
def test_resolvend_laws(name, data):
    ext, xs, us = law_case(name)
    x, u = data.draw(xs), data.draw(us)
    r = resolvend_gram(x, ext)
    tr = ext.trace(x)
    assert r.augmentation() == tr * tr
    assert r.involution() == r
    assert resolvend_gram(group_act(u, x, ext), ext) == u * u.involution() * r

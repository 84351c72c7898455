import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from errors import DomainError, ExistenceError, ParameterError, PrecisionError
from finite_field import mult_generator
from padic import (
    LocalBase,
    build_extension,
    congruent,
    different_valuation,
    embed_into,
    hensel_root,
    local_ring,
    norm_t,
    relative_norm,
    subfield_trace,
    teichmuller,
    trace_norm,
    trace_t,
)

Z7 = local_ring(7, 1, (0, 1), 20)
TAME7 = local_ring(7, 1, (7, 0, 0, 1), 20)  # t^3 = -7
W25 = local_ring(5, 2, (0, 1), 16)

integers = st.integers(-(10 ** 30), 10 ** 30)


@given(integers, integers)
def test_integer_arithmetic(a, b):
    assert Z7.from_int(a) * Z7.from_int(b) == Z7.from_int(a * b)
    assert Z7.from_int(a) + Z7.from_int(b) == Z7.from_int(a + b)


@given(integers)
def test_inverse_of_unit_and_nonunit(a):
    assume(a % 7 ** 10 != 0)
    x = TAME7.from_int(a) * (1 + TAME7.gen_t())
    assert x * x.inverse() == 1


@given(st.lists(st.integers(0, 7 ** 20), min_size=3, max_size=3))
def test_ramified_inverse(coeffs):
    x = TAME7.element([coeffs])
    assume(not x.is_zero())
    assert x * x.inverse() == 1


def test_uniformiser_and_valuation():
    t = TAME7.gen_t()
    assert t ** 3 == -7
    assert t.valuation() == 1
    assert TAME7.from_int(7).valuation() == 3
    assert (t ** 2 / 7).valuation() == -1
    with pytest.raises(PrecisionError):
        TAME7.zero().valuation()


def test_eisenstein_check():
    with pytest.raises(ParameterError):
        local_ring(7, 1, (49, 0, 1), 20)
    with pytest.raises(ParameterError):
        local_ring(2, 1, (0, 1), 20)


def test_residue_and_lift():
    y = W25.gen_y()
    r = W25.residue(y)
    assert r == W25.residue_field.gen()
    assert W25.lift(r) == y
    with pytest.raises(DomainError):
        W25.residue(W25.from_int(1) / 5)


def test_hensel_root_square_root_of_two():
    root = hensel_root([-2, 0, 1], Z7.from_int(3))
    assert root * root == 2
    assert Z7.residue(root) == 3


def test_hensel_root_with_ramified_derivative():
    # h = X^3 + 7 has h'(t) = 3t^2 of valuation 2, not a multiple of e = 3
    t = TAME7.gen_t()
    root = hensel_root([7, 0, 0, 1], t + 7)
    assert root == t
    assert root.prec == TAME7.prec


def test_hensel_condition_failure():
    with pytest.raises(DomainError):
        hensel_root([-2, 0, 1], Z7.from_int(1))


def test_teichmuller_lift():
    g = mult_generator(W25.residue_field)
    omega = teichmuller(g, W25)
    assert omega ** 24 == 1
    assert W25.residue(omega) == g


def test_traces_and_norms():
    t = TAME7.gen_t()
    assert trace_t(TAME7.one()) == 3
    assert trace_t(t) == 0
    assert norm_t(t) == TAME7.unramified().from_int(-7)
    trace, norm = trace_norm(1 + t)
    assert trace == 3
    assert norm == 1 - 7
    assert subfield_trace(TAME7.one(), 3) == 1


tame_elements = st.lists(st.integers(0, 7 ** 20), min_size=3, max_size=3).map(lambda cs: TAME7.element([cs]))


@given(tame_elements, tame_elements)
def test_trace_additive_and_norm_multiplicative(a, b):
    assert trace_t(a + b) == trace_t(a) + trace_t(b)
    assert norm_t(a * b) == norm_t(a) * norm_t(b)


def test_unramified_trace_uses_frobenius():
    y = W25.gen_y()
    trace, norm = trace_norm(y)
    # y and sigma(y) are the two roots of the residue modulus lift
    mu = W25.mu
    assert trace == -mu[1]
    assert norm == mu[0]


def test_embed_into_larger_unramified_ring():
    small, big = local_ring(5, 2, (0, 1), 16), local_ring(5, 4, (0, 1), 16)
    y = small.gen_y()
    image = embed_into(y, big)
    value = sum((image ** i * c for i, c in enumerate(small.mu)), big.zero())
    assert value.is_zero()
    assert embed_into(y * y + 3, big) == image * image + 3


def test_embed_into_rejects_mismatch():
    with pytest.raises(ParameterError):
        embed_into(local_ring(5, 2, (0, 1), 16).gen_y(), local_ring(5, 3, (0, 1), 16))


def test_congruent_across_precisions():
    low, high = local_ring(7, 1, (0, 1), 10), local_ring(7, 1, (0, 1), 30)
    assert congruent(low.from_int(8), high.from_int(8 + 7 ** 12), 10)
    assert not congruent(low.from_int(8), high.from_int(9), 5)
    with pytest.raises(PrecisionError):
        congruent(low.from_int(1), high.from_int(1), 20)


def test_different_valuation_matches_tame_formula():
    assert different_valuation(TAME7) == 2
    assert different_valuation(Z7) == 0


def test_local_base_validation():
    with pytest.raises(ParameterError):
        LocalBase(2)
    with pytest.raises(ParameterError):
        LocalBase(7, 1, prec=8, guard=8)
    assert LocalBase(5, 2).q == 25
    assert LocalBase(7, prec=40, guard=8).target_precision == 32


def test_unramified_extension_automorphisms(base7):
    ext = build_extension(base7, "unramified", 3)
    y = ext.ring.gen_y()
    assert ext.conjugate(0, y) == y
    assert ext.conjugate(1, ext.conjugate(2, y)) == y
    assert ext.trace(ext.ring.one()) == 3
    assert ext.inverse_different_root == 0


def test_tame_extension(base7):
    ext = build_extension(base7, "tame", 3)
    t = ext.ring.gen_t()
    assert ext.degree == 3
    assert ext.inverse_different_root == -1
    images = [ext.conjugate(g, t) for g in range(3)]
    assert all(z ** 3 == -7 for z in images)
    assert relative_norm(t, ext.automorphisms) == -7


def test_tame_degree_checks(base7):
    with pytest.raises(ExistenceError):
        build_extension(base7, "tame", 2)
    with pytest.raises(ParameterError):
        build_extension(LocalBase(3, prec=20), "tame", 3)


def test_compositum_group(base7):
    ext = build_extension(base7, "compositum", (3, 3))
    assert ext.degree == 9
    assert ext.group.order == 9
    y, t = ext.ring.gen_y(), ext.ring.gen_t()
    g = ext.group.index((1, 1))
    assert ext.conjugate(g, t) != t
    assert ext.conjugate(g, y) != y
    assert ext.conjugate(ext.group.index((0, 1)), y) == y

import pytest

from errors import ParameterError
from lubin_tate import build_wild_extension, lubin_tate_data, lubin_tate_series
from padic import LocalBase, different_valuation


@pytest.fixture(scope="module")
def ltd3():
    return lubin_tate_data(LocalBase(3, 1, prec=32, guard=8))


def test_division_polynomial(ltd3):
    # (X^3 + 3X)^2 + 3 = X^6 + 6X^4 + 9X^2 + 3
    assert ltd3.g == (3, 0, 9, 0, 6, 0, 1)
    assert ltd3.ring.e == 6
    assert ltd3.degree_bound == 2 * 9 - 9 + 2


def test_different_of_second_division_field(ltd3):
    q = ltd3.q
    assert different_valuation(ltd3.ring) == (q - 2) + (q - 1) * 2 * (q - 1)


def test_series_starts_with_u_and_commutes(ltd3):
    for u in (1, 4, 7, -1):
        coeffs = lubin_tate_series(u, ltd3, 6)
        assert coeffs[0] == 0
        assert coeffs[1] % 3 ** 32 == u % 3 ** 32
        assert ltd3.check_commutes(u, ltd3.degree_bound)


def test_identity_series_is_x(ltd3):
    coeffs = ltd3.series(1)
    assert coeffs[1] == 1
    assert all(c == 0 for c in coeffs[2:])


def test_series_degree_bounds(ltd3):
    with pytest.raises(ParameterError):
        ltd3.series(4, ltd3.degree_bound + 1)


def test_conjugates_are_roots_of_g(ltd3):
    conjugates = ltd3.gamma_conjugates()
    assert len(conjugates) == 3
    assert conjugates[0] == ltd3.alpha
    assert all(ltd3.is_root_of_g(beta) for beta in conjugates)
    assert all(beta.valuation() == 1 for beta in conjugates)


def test_conjugates_known_to_working_precision(ltd3):
    for beta in ltd3.gamma_conjugates():
        assert beta.prec == ltd3.ring.prec
        assert ltd3.evaluate(list(ltd3.g), beta).is_zero()


def test_fixed_field_membership(ltd3):
    q = ltd3.q
    x = ltd3.alpha ** (q - 1) / ltd3.p
    assert ltd3.in_fixed_field(x)
    assert not ltd3.in_fixed_field(ltd3.alpha)


def test_norm_of_uniformiser(ltd3):
    q = ltd3.q
    norm = ltd3.alpha_norm_to_fixed_field()
    assert norm == -(ltd3.alpha ** (q - 1))
    assert norm.valuation() == q - 1


def test_wild_extension_descriptor():
    ext = build_wild_extension(LocalBase(3, 1, prec=32, guard=8))
    assert ext.kind == "wild"
    assert ext.degree == 3
    assert ext.different == 4
    assert ext.inverse_different_root == -2
    assert ext.group.order == 3
    alpha = ext.ring.gen_t()
    assert ext.conjugate(0, alpha) == alpha


def test_only_prime_residue_field():
    with pytest.raises(ParameterError):
        lubin_tate_data(LocalBase(3, 2, prec=32, guard=8))


@pytest.mark.slow
def test_p_five():
    ltd = lubin_tate_data(LocalBase(5, 1, prec=24, guard=6))
    assert all(ltd.is_root_of_g(beta) for beta in ltd.gamma_conjugates())
    assert ltd.in_fixed_field(ltd.alpha ** 4 / 5)

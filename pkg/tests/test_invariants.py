from fractions import Fraction

import pytest

from charfrob.groebner import Ideal, Matrix, minors
from charfrob.invariants import (
    PairSpec, f_pure_module, is_f_injective, is_f_pure, is_f_rational, is_f_regular, level, parameter_test_ideal,
)
from charfrob.invariants import test_ideal as tau
from charfrob.invariants import test_module as tau_omega
from charfrob.polyring import PolyRing


@pytest.fixture
def cusp():
    S = PolyRing(5, ["x", "y"])
    return S, S("y^2 - x^3")


def test_test_ideal_of_polynomial_ring_is_unit():
    S = PolyRing(3, ["x", "y"])
    assert tau(Ideal(S, [])).is_unit()


def test_cusp_test_ideals_jump_at_threshold(cusp):
    S, f = cusp
    m = Ideal(S, ["x", "y"])
    assert tau(Ideal(S, []), PairSpec.single(Fraction(1, 2), f)).is_unit()
    assert tau(Ideal(S, []), PairSpec.single(Fraction(4, 5) - Fraction(1, 100000), f)).is_unit()
    assert tau(Ideal(S, []), PairSpec.single(Fraction(4, 5), f)) == m
    assert tau(Ideal(S, []), PairSpec.single(Fraction(5, 6), f)) == m


def test_test_ideal_at_integer_exponent_is_principal(cusp):
    S, f = cusp
    assert tau(Ideal(S, []), PairSpec.single(Fraction(1), f)) == Ideal(S, [f])


def test_test_module_of_fermat_quartic():
    S = PolyRing(5, ["x", "y", "z"])
    I = Ideal(S, ["x^4 + y^4 + z^4"])
    r = tau_omega(I)
    m = Ideal(S, ["x", "y", "z"])
    assert r.tau == m ** 2 + I
    assert r.omega.is_unit()


def test_parameter_test_ideal_of_determinantal_ring():
    R = PolyRing(2, ["a", "b", "c", "d", "e"])
    I = minors(2, Matrix(R, [["a", "b", "b", "e"], ["d", "d", "c", "a"]]))
    J = parameter_test_ideal(I)
    assert J == Ideal(R, ["c + d", "b", "a"]) + I


def test_f_pure_module_and_hsl_number():
    S = PolyRing(3, ["x", "y", "z"])
    I = Ideal(S, ["x^3 + y^4 + z^5"])
    r = f_pure_module(I)
    assert r.sigma == Ideal(S, ["y*z", "x*z", "y^2", "x*y", "x^2", "z^3"]) + I
    assert r.hsl_number == 1


def test_f_pure_module_rejects_p_in_denominator():
    S = PolyRing(3, ["x", "y"])
    with pytest.raises(ValueError):
        f_pure_module(Ideal(S, []), PairSpec.single(Fraction(1, 3), S("x*y")))


def test_levels_of_curves():
    S = PolyRing(2, ["x", "y", "z"])
    assert level(S("x^3 + y^2*z + y*z^2")) == 2
    T = PolyRing(11, ["x", "y", "z"])
    assert level(T("y^2*z^3 - x^5 - 2*z^5")) == 2


def test_fedder_criterion():
    S = PolyRing(2, ["x", "y", "z"])
    assert not is_f_pure(Ideal(S, ["y^2 - x^3"]))
    assert is_f_pure(Ideal(S, ["z^2 - x*y*z + x*y^2 + x^2*y"]))


def test_global_versus_origin():
    S = PolyRing(7, ["x", "y", "z"])
    I = Ideal(S, ["(x - 1)^3 + (y + 1)^3 + z^3"])
    assert is_f_regular(I) is False
    assert is_f_regular(I, at_origin=True) is True


def test_f_regular_search_without_q_gorenstein_index():
    S = PolyRing(5, ["x", "y", "z"])
    assert is_f_regular(Ideal(S, ["x^2 + y*z"]), q_gorenstein_index=float("inf")) is True
    # without an index, failure of F-purity or F-rationality still decides the question
    assert is_f_regular(Ideal(S, ["x^3 + y^3 + z^3"]), q_gorenstein_index=float("inf")) is False


def test_f_rational_ring_that_is_not_f_pure_is_not_f_regular():
    S = PolyRing(3, ["a", "b", "c", "d", "t"])
    I = minors(2, Matrix(S, [["a^2 + t^4", "b", "d"], ["c", "a^2", "b^3 - d"]]))
    assert is_f_rational(I)
    assert not is_f_pure(I)
    assert is_f_regular(I) is False


def test_f_rational_and_f_injective_for_fermat_cubics():
    S = PolyRing(7, ["x", "y", "z"])
    I = Ideal(S, ["x^3 + y^3 + z^3"])
    assert is_f_injective(I)
    assert not is_f_rational(I)
    T = PolyRing(5, ["x", "y", "z"])
    assert not is_f_injective(Ideal(T, ["x^3 + y^3 + z^3"]))

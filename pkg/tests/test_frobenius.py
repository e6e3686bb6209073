from fractions import Fraction

import pytest

from charfrob.frobenius import (
    RationalExponent, base_p_digits, frobenius_module, frobenius_power, frobenius_power_int, frobenius_root,
    frobenius_root_mult, submodule_root,
)
from charfrob.groebner import Ideal, SubmoduleOfFree
from charfrob.polyring import PolyRing


def test_base_p_digits():
    assert base_p_digits(0, 3) == []
    assert base_p_digits(16, 3) == [1, 2, 1]
    with pytest.raises(ValueError):
        base_p_digits(-1, 3)


def test_rational_exponent_split():
    rx = RationalExponent(Fraction(5, 6), 5)
    assert (rx.a, rx.d, rx.m) == (5, 0, 6)
    assert rx.cyclic_order() == 2
    d, e, a = rx.split()
    assert Fraction(a, 5 ** d * (5 ** e - 1)) == Fraction(5, 6)
    rx = RationalExponent(Fraction(7, 50), 5)
    assert (rx.d, rx.m) == (2, 2)


def test_root_of_a_monomial():
    R = PolyRing(3, ["x", "y"])
    assert frobenius_root(1, R("x^7*y^2")) == Ideal(R, ["x^2"])
    assert frobenius_root(2, R("x^7*y^2")) == Ideal(R, [1])


def test_root_of_trinomial():
    R = PolyRing(5, ["x", "y", "z"])
    I = Ideal(R, ["x^6*y*z + x^2*y^12*z^3 + x*y*z^18"])
    assert frobenius_root(1, I) == Ideal(R, ["x", "y^2", "z^3"])


def test_root_mult_matches_plain_root():
    R = PolyRing(3, ["x", "y"])
    f, g = R("x^2 + y"), R("x*y + 1")
    direct = frobenius_root(2, Ideal(R, [f ** 5 * g ** 4]))
    assert frobenius_root_mult(2, [(5, f), (4, g)]) == direct


def test_integer_power_by_digits():
    R = PolyRing(3, ["x", "y"])
    m = Ideal(R, ["x", "y"])
    assert frobenius_power_int(4, m) == m * m.frobenius(1)
    assert frobenius_power_int(0, m) == Ideal(R, [1])


def test_generalized_powers_of_m5():
    R = PolyRing(3, ["x", "y"])
    I = Ideal(R, ["x", "y"]) ** 5
    assert frobenius_power(Fraction(16, 27), I) == Ideal(R, ["y^2", "x*y", "x^2"])
    assert frobenius_power(Fraction(16, 27) - Fraction(1, 243), I) == Ideal(R, ["x", "y"])


def test_non_p_power_exponent_uses_a_stable_chain():
    R = PolyRing(5, ["x", "y"])
    I = Ideal(R, ["y^2 - x^3"])
    J = frobenius_power(Fraction(5, 6), I)
    assert J.annotation is not None and J.annotation.stabilized
    assert frobenius_power(Fraction(1, 5), I).annotation is None


def test_submodule_root_and_frobenius():
    R = PolyRing(2, ["a", "b"])
    # both coordinates live in the residue class of b, so they stay in one vector
    M = SubmoduleOfFree(R, 2, [["a^2*b", "b^3"]])
    assert submodule_root(1, M) == SubmoduleOfFree(R, 2, [["a", "b"]])
    N = SubmoduleOfFree(R, 2, [["a^2*b + a", "b^3"]])
    assert submodule_root(1, N) == SubmoduleOfFree(R, 2, [["a", "b"], ["1", "0"]])
    F = frobenius_module(1, SubmoduleOfFree(R, 2, [["a", "b"]]))
    assert F == SubmoduleOfFree(R, 2, [["a^2", "b^2"]])

import pytest

from charfrob.polyring import MonomialOrder, PolyRing, PolynomialSyntaxError, expand_variables


def test_variable_ranges_expand():
    assert expand_variables("a..d") == ("a", "b", "c", "d")
    assert expand_variables(["x", "y"]) == ("x", "y")


def test_ring_rejects_composite_characteristic():
    with pytest.raises(ValueError):
        PolyRing(6, "x,y")


def test_coefficients_reduce_mod_p():
    R = PolyRing(5, ["x", "y"])
    f = R("7*x + 10*y")
    assert f == R("2*x")
    assert R("x")*5 == R.zero()


def test_parse_and_print_round_trip():
    R = PolyRing(7, ["x", "y", "z"])
    f = R("x^3*y - 2*z^2 + 1")
    assert R(str(f)) == f
    with pytest.raises(PolynomialSyntaxError):
        R("x^")


def test_grevlex_lead_terms():
    R = PolyRing(5, ["x", "y", "z"])
    assert R("x*z^2 + y^3").lead_exponents() == (0, 3, 0)
    assert R("x^2 + y*z^2").lead_exponents() == (0, 1, 2)


def test_lex_order_lead_terms():
    R = PolyRing(5, ["x", "y", "z"], order="lex")
    assert R("x + y^5*z^5").lead_exponents() == (1, 0, 0)


def test_key_addition_is_monomial_multiplication():
    R = PolyRing(3, ["x", "y", "z"])
    a, b = R.key_of((1, 2, 0)), R.key_of((0, 1, 3))
    assert R.exps_of(a + b) == (1, 3, 3)
    assert R.divides(a, a + b)
    assert not R.divides(a + b, a)


def test_frobenius_power_of_polynomial():
    R = PolyRing(3, ["x", "y"])
    f = R("x + y + 1")
    assert f ** 3 == f.frobenius_power(1)
    assert f ** 9 == R("x^9 + y^9 + 1")


def test_partials_and_substitution():
    R = PolyRing(5, ["x", "y"])
    f = R("x^3*y + y^2")
    assert f.partial("x") == R("3*x^2*y")
    assert f.substitute([R("y"), R("x")]) == R("y^3*x + x^2")


def test_root_decomposition_reassembles():
    R = PolyRing(2, ["x", "y", "z"])
    f = R("x^3 + y^2*z + y*z^2")
    dec = f.root_decompose(1)
    assert dec.reassemble() == f


def test_monomial_order_equality():
    assert MonomialOrder("grevlex") == MonomialOrder("grevlex")
    assert MonomialOrder("lex") != MonomialOrder("grevlex")

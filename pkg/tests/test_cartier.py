from charfrob.cartier import (
    CartierDatum, ascend_ideal, ascend_module, descend_chain, q_gorenstein_generator,
    trace_on_canonical,
)
from charfrob.cartier import test_element as find_test_element
from charfrob.frobenius import frobenius_root
from charfrob.groebner import Ideal, Matrix, SubmoduleOfFree
from charfrob.polyring import PolyRing


def test_ascend_is_smallest_stable_ideal():
    S = PolyRing(5, ["x", "y"])
    u = S("y^2 - x^3") ** 4
    d = CartierDatum(Ideal(S, []), 1, [u])
    J0 = Ideal(S, [S("x") * S("y")])
    J = ascend_ideal(d, J0)
    assert J.contains(J0)
    assert J.contains(frobenius_root(1, Ideal(S, [u * g for g in J.gens])))


def test_descend_chain_stabilizes():
    S = PolyRing(2, ["x", "y", "z"])
    f = S("x^3 + y^2*z + y*z^2")
    d = CartierDatum(Ideal(S, []), 1, [f])
    J, k = descend_chain(d, Ideal(S, [1]))
    assert k >= 1
    assert frobenius_root(1, Ideal(S, [f * g for g in J.gens])) == J


def test_gorenstein_generator_is_f_to_p_minus_one():
    S = PolyRing(5, ["x", "y", "z"])
    f = S("x^3 + y^3 + z^3")
    I = Ideal(S, [f])
    d = q_gorenstein_generator(1, I)
    assert d.principal
    u = d.multipliers[0]
    assert (u - f ** 4) in I.frobenius(1)


def test_trace_on_canonical_is_defined_modulo_brackets():
    S = PolyRing(5, ["x", "y", "z"])
    I = Ideal(S, ["y*z", "x*z", "x*y"])
    Om = Ideal(S, ["y + 2*z", "x - z"]) + I
    d = trace_on_canonical(1, I, Om)
    u = d.multipliers[0]
    assert I.frobenius(1).quotient(I).contains(Ideal(S, [u]))
    assert Om.frobenius(1).quotient(Om).contains(Ideal(S, [u]))


def test_test_element_is_a_nonzerodivisor():
    S = PolyRing(5, ["x", "y", "z"])
    I = Ideal(S, ["x^4 + y^4 + z^4"])
    c = find_test_element(I)
    assert c not in I
    assert I.quotient(Ideal(S, [c])) == I


def test_ascend_module_contains_start():
    R = PolyRing(2, ["a", "b", "c", "d"])
    U = Matrix(R, [["a^4 + a*b*c^2 + a*b*c*d", "a^2*b"], ["a^2*c*d^3", "a^3*c*d + a^3*d^2 + b*c*d^3"]])
    A = SubmoduleOfFree(R, 2, [["0", "c+d"], ["a", "d^2"], ["b*c", "a^2*d"]])
    B = ascend_module(1, A, U)
    assert B.contains(A)
    assert B == SubmoduleOfFree(R, 2, [["0", "c+d"], ["a", "d^2"], ["b*c", "a^2*d"]])

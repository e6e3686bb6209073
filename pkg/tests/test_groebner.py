import pytest

from charfrob.errors import ResourceLimitError
from charfrob.groebner import (
    DEFAULT_BUDGET, Ideal, Matrix, SubmoduleOfFree, kernel_of_ring_map, minors, set_budget,
)
from charfrob.polyring import PolyRing


@pytest.fixture
def R():
    return PolyRing(5, ["x", "y", "z"])


def test_reduced_gb_of_twisted_cubic():
    S = PolyRing(7, ["a", "b", "c", "d"])
    I = minors(2, Matrix(S, [["a", "b", "c"], ["b", "c", "d"]]))
    gb = I.groebner_basis()
    assert len(gb) == 3
    assert all(g.lead_coefficient() == 1 for g in gb)
    assert I.dimension() == 2


def test_membership_and_equality(R):
    I = Ideal(R, ["x*y", "y*z"])
    assert R("x*y*z + y*z^2") in I
    assert R("x*z") not in I
    assert I == Ideal(R, ["y*z", "x*y", "x*y + y*z"])


def test_is_unit_requires_a_constant(R):
    assert Ideal(R, ["x", "x + 1"]).is_unit()
    assert not Ideal(R, ["x + 1", "y"]).is_unit()


def test_intersection_and_colon(R):
    I, J = Ideal(R, ["x"]), Ideal(R, ["y"])
    assert I.intersect(J) == Ideal(R, ["x*y"])
    assert Ideal(R, ["x*y", "x*z"]).quotient(Ideal(R, ["x"])) == Ideal(R, ["y", "z"])


def test_saturation(R):
    I = Ideal(R, ["x^2*y", "x*y^2"])
    assert I.saturate(R("x")) == Ideal(R, ["y"])


def test_elimination_and_kernel():
    T = PolyRing(3, ["s", "t"])
    S = PolyRing(3, ["a", "b", "c"])
    K = kernel_of_ring_map(S, [T("s^2"), T("s*t"), T("t^2")])
    assert K == Ideal(S, ["a*c - b^2"])


def test_frobenius_of_ideal(R):
    I = Ideal(R, ["x + y", "z^2"])
    assert I.frobenius(1) == Ideal(R, ["x^5 + y^5", "z^10"])


def test_dimension_and_codim(R):
    I = Ideal(R, ["x", "y*z"])
    assert I.dimension() == 1
    assert I.codim() == 2
    assert Ideal(R, [1]).dimension() == float("-inf")


def test_module_membership():
    S = PolyRing(2, ["a", "b"])
    M = SubmoduleOfFree(S, 2, [["a", "0"], ["b", "a"]])
    assert M.contains(SubmoduleOfFree(S, 2, [["a*b", "a^2"]]))
    assert not M.contains(SubmoduleOfFree(S, 2, [["0", "1"]]))


def test_budget_raises():
    S = PolyRing(7, ["a", "b", "c", "d"])
    set_budget(5)
    try:
        with pytest.raises(ResourceLimitError):
            Ideal(S, ["a + b + c + d", "a*b + b*c + c*d + d*a", "a*b*c + b*c*d + c*d*a + d*a*b",
                      "a*b*c*d - 1"]).groebner_basis()
    finally:
        set_budget(DEFAULT_BUDGET)

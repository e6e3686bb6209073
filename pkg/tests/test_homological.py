from charfrob.groebner import Ideal, Matrix, minors
from charfrob.homological import (
    canonical_ideal, ext_module, free_resolution, frobenius_ext_map, ideals_isomorphic, is_cohen_macaulay,
)
from charfrob.polyring import PolyRing


def twisted_cubic():
    S = PolyRing(5, ["a", "b", "c", "d"])
    return S, minors(2, Matrix(S, [["a", "b", "c"], ["b", "c", "d"]]))


def test_resolution_of_twisted_cubic_has_length_two():
    S, I = twisted_cubic()
    res = free_resolution(I)
    assert res.length == 2


def test_ext_vanishes_below_codim_for_cm_ring():
    S, I = twisted_cubic()
    assert is_cohen_macaulay(I)
    assert ext_module(1, I).is_zero()
    assert not ext_module(2, I).is_zero()


def test_hypersurface_ext_is_cyclic():
    S = PolyRing(3, ["x", "y"])
    I = Ideal(S, ["x^2 - y^3"])
    E = ext_module(1, I)
    assert E.ngens == 1
    assert E.annihilator() == I


def test_non_cm_ring():
    S = PolyRing(2, ["a", "b", "c", "d"])
    I = Ideal(S, ["a", "b"]).intersect(Ideal(S, ["c", "d"]))
    assert not is_cohen_macaulay(I)


def test_four_planes_over_f2_are_cohen_macaulay():
    # three generators whose syzygy matrix has 2x2 minors equal to I (Hilbert-Burch)
    S = PolyRing(2, ["a", "b", "c", "d"])
    I = Ideal(S, ["a", "b"]).intersect(
        Ideal(S, ["a", "c"]), Ideal(S, ["c", "d"]), Ideal(S, ["c + d", "a^3 + b*d^2"]))
    assert I == Ideal(S, ["a*c + a*d", "b*c^2 + b*c*d", "a^3*d + b*c*d^2"])
    res = free_resolution(I)
    assert res.length == 2 == I.codim()
    assert minors(2, res.maps[1]) == I
    assert is_cohen_macaulay(I)


def test_canonical_ideal_of_gorenstein_ring_is_unit():
    S = PolyRing(5, ["x", "y", "z"])
    I = Ideal(S, ["x^4 + y^4 + z^4"])
    assert canonical_ideal(I).pullback.is_unit()


def test_canonical_ideal_of_coordinate_lines():
    S = PolyRing(5, ["x", "y", "z"])
    I = Ideal(S, ["y*z", "x*z", "x*y"])
    om = canonical_ideal(I).pullback
    assert not om.is_unit()
    assert ideals_isomorphic(om, Ideal(S, ["y + 2*z", "x - z"]) + I, I)
    assert not ideals_isomorphic(om, Ideal(S, [1]), I)


def test_frobenius_ext_map_shapes():
    S = PolyRing(2, ["a", "b", "c", "d"])
    I = Ideal(S, ["a", "b"]).intersect(Ideal(S, ["a", "c"]), Ideal(S, ["c", "d"]), Ideal(S, ["c + d", "a^3 + b*d^2"]))
    m = frobenius_ext_map(2, I)
    assert m.matrix.nrows == m.target.ngens
    assert m.matrix.ncols == m.source.ngens == 2

from charfrob.decompose import (
    certify_irreducible, compatible_ideals, factor_polynomial, factor_univariate, is_compatible, minimal_primes,
    quotient_by,
)
from charfrob.groebner import Ideal
from charfrob.polyring import PolyRing


def product(factors, ring):
    out = ring.one()
    for g, k in factors:
        out = out * g ** k
    return out


def test_univariate_factorization():
    R = PolyRing(7, ["x"])
    f = R("x^7 - x")
    facs = factor_univariate(f)
    assert len(facs) == 7
    assert product(facs, R) == f
    R2 = PolyRing(2, ["x"])
    g = R2("x^6 + x^4 + x^2 + 1")
    assert product(factor_univariate(g), R2) == g


def test_irreducibility_certificates():
    R = PolyRing(3, ["x", "y"])
    assert certify_irreducible(R("x^2 + y^3 + 1"))
    assert not certify_irreducible(R("x^2 - y^2"))


def test_multivariate_factorization():
    R = PolyRing(5, ["x", "y"])
    f = R("(x + y)^2 * (x*y + 1)")
    facs, certified = factor_polynomial(f)
    assert certified
    assert product(facs, R) == f.monic()
    assert sorted(k for _, k in facs) == [1, 2]


def test_minimal_primes_of_line_arrangement():
    S = PolyRing(2, ["a", "b", "c", "d"])
    I = Ideal(S, ["a", "b"]).intersect(Ideal(S, ["a", "c"]), Ideal(S, ["c", "d"]), Ideal(S, ["c + d", "a^3 + b*d^2"]))
    rep = minimal_primes(I)
    assert len(rep.primes) == 4
    assert rep.all_certified


def test_minimal_primes_of_nonreduced_ideal():
    S = PolyRing(5, ["x", "y"])
    rep = minimal_primes(Ideal(S, ["x^2", "x*y"]))
    assert rep.primes == [Ideal(S, ["x"])]


def test_zero_dimensional_split():
    # over F_7, y^2 + 1 stays irreducible above x = -1
    S = PolyRing(7, ["x", "y"])
    rep = minimal_primes(Ideal(S, ["x^2 - 1", "y^2 - x"]))
    assert len(rep.primes) == 3
    assert Ideal(S, ["x - 1", "y - 1"]) in rep.primes
    assert Ideal(S, ["x + 1", "y^2 + 1"]) in rep.primes


def test_compatible_ideals_of_monomial_map():
    S = PolyRing(3, ["u", "v"])
    g = S("u^2*v^2")
    res = compatible_ideals(g)
    assert res.complete and res.certified
    expected = [Ideal(S, ["v"]), Ideal(S, ["u", "v"]), Ideal(S, ["u"])]
    assert len(res.ideals) == 3
    assert all(P in res.ideals for P in expected)
    assert all(is_compatible(g, P) for P in res.ideals)


def test_quotient_by_removes_duplicates():
    S = PolyRing(3, ["u", "v"])
    out = quotient_by([Ideal(S, ["u"]), Ideal(S, ["u", "v"]), Ideal(S, ["u"])], Ideal(S, ["u"]))
    assert out == [Ideal(S, [1])]

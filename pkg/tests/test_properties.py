"""Property suites: identities that must hold for random inputs."""

from fractions import Fraction
from functools import lru_cache

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from charfrob.decompose import compatible_ideals
from charfrob.frobenius import frobenius_power, frobenius_power_int, frobenius_root
from charfrob.groebner import Ideal, Matrix, kernel_of_ring_map, minors
from charfrob.homological import is_cohen_macaulay
from charfrob.invariants import is_f_injective, is_f_pure, is_f_rational, is_f_regular
from charfrob.polyring import PolyRing

CASES = settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
NAMES = ["x", "y", "z"]


@lru_cache(maxsize=None)
def ring(p, n):
    return PolyRing(p, NAMES[:n])


@st.composite
def polynomials(draw, p, n, max_deg=4, max_terms=4, constant=True):
    R = ring(p, n)
    f = R.zero()
    for _ in range(draw(st.integers(1, max_terms))):
        exps = draw(st.lists(st.integers(0, max_deg), min_size=n, max_size=n))
        if sum(exps) > max_deg or (not constant and sum(exps) == 0):
            continue
        f = f + R.monomial(exps, draw(st.integers(1, p - 1)))
    return f


@st.composite
def ideal_pairs(draw, max_deg=4):
    """(p, n, I, J) with small random generators."""
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(1, 3))
    R = ring(p, n)
    I = Ideal(R, draw(st.lists(polynomials(p, n, max_deg), min_size=1, max_size=2)))
    J = Ideal(R, draw(st.lists(polynomials(p, n, max_deg), min_size=1, max_size=2)))
    return p, n, I, J


# ---------------------------------------------------------------------------
# roots and powers


@CASES
@given(ideal_pairs(max_deg=3), st.integers(1, 2))
def test_root_of_frobenius_power_is_identity(data, e):
    p, n, I, _ = data
    assume(p ** e <= 9)
    assert frobenius_root(e, I.frobenius(e)) == I


@CASES
@given(ideal_pairs(max_deg=6))
def test_root_adjunction(data):
    # I^[1/p] is inside J exactly when I is inside J^[p]
    p, n, I, J = data
    assert J.contains(frobenius_root(1, I)) == J.frobenius(1).contains(I)


@CASES
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(1, 2),
       st.lists(st.lists(st.integers(0, 30), min_size=3, max_size=3), min_size=1, max_size=4))
def test_root_of_monomial_ideal_matches_floor_formula(p, n, e, exps):
    R = ring(p, n)
    q = p ** e
    gens = [R.monomial(v[:n]) for v in exps]
    oracle = Ideal(R, [R.monomial([a // q for a in v[:n]]) for v in exps])
    assert frobenius_root(e, Ideal(R, gens)) == oracle


@CASES
@given(ideal_pairs(max_deg=6))
def test_root_is_additive(data):
    p, n, I, J = data
    assert frobenius_root(1, I + J) == frobenius_root(1, I) + frobenius_root(1, J)


@CASES
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.data())
def test_root_is_skew_linear(p, n, data):
    # (f^p g)^[1/p] = f g^[1/p]
    f = data.draw(polynomials(p, n, 2, 3))
    g = data.draw(polynomials(p, n, 6, 4))
    assume(f and g)
    R = ring(p, n)
    lhs = frobenius_root(1, Ideal(R, [f.frobenius_power(1) * g]))
    rhs = Ideal(R, [f * h for h in frobenius_root(1, Ideal(R, [g])).gens])
    assert lhs == rhs


@st.composite
def monomial_ideals(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(1, 2))
    R = ring(p, n)
    gens = [R.monomial(draw(st.lists(st.integers(0, 3), min_size=n, max_size=n)))
            for _ in range(draw(st.integers(1, 3)))]
    return p, Ideal(R, gens)


@CASES
@given(monomial_ideals(), st.fractions(0, 2, max_denominator=12), st.fractions(0, 2, max_denominator=12))
def test_rational_powers_are_monotone(data, s, t):
    p, I = data
    s, t = sorted([Fraction(s), Fraction(t)])
    assert frobenius_power(s, I).contains(frobenius_power(t, I))


@CASES
@given(monomial_ideals(), st.fractions(0, 2, max_denominator=12))
def test_rational_power_matches_deep_upper_approximation(data, t):
    # ceil(t q)/q from above with q far past every generator degree and period
    p, I = data
    t = Fraction(t)
    q = p ** 12
    a = -((-t.numerator * q) // t.denominator)
    assert frobenius_power(t, I) == frobenius_power(Fraction(a, q), I)


@CASES
@given(monomial_ideals(), st.integers(0, 40), st.integers(1, 2))
def test_p_power_rationals_agree_across_methods(data, a, d):
    # digit-wise evaluation versus the plain root of an integer power, at two precisions
    p, I = data
    assume(a * p <= 60)
    t = Fraction(a, p ** d)
    direct = frobenius_root(d, frobenius_power_int(a, I))
    refined = frobenius_root(d + 1, frobenius_power_int(a * p, I))
    assert frobenius_power(t, I) == direct == refined


# ---------------------------------------------------------------------------
# Fedder's criterion


@CASES
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.data())
def test_fedder_criterion_for_hypersurfaces(p, n, data):
    f = data.draw(polynomials(p, n, 4, 4, constant=False))
    assume(f)
    # at the origin: some monomial of f^(p-1) has every exponent below p
    oracle = any(all(a < p for a in exps) for exps, _ in (f ** (p - 1)).items())
    I = Ideal(ring(p, n), [f])
    assert is_f_pure(I, at_origin=True) == oracle
    if is_f_pure(I):
        assert is_f_pure(I, at_origin=True)


# ---------------------------------------------------------------------------
# implications among the predicates on the corpus rings


@lru_cache(maxsize=None)
def corpus_rings():
    out = []

    def hyper(p, names, f):
        S = PolyRing(p, names)
        out.append(Ideal(S, [f]))

    hyper(5, "x,y,z", "x^2 + y*z")
    hyper(7, "x,y,z", "x^3 + y^3 + z^3")
    hyper(5, "x,y,z", "x^3 + y^3 + z^3")
    hyper(7, "x,y,z", "(x - 1)^5 + (y + 1)^5 + z^5")
    hyper(7, "x,y,z", "(x - 1)^3 + (y + 1)^3 + z^3")
    hyper(5, "x,y,z", "x^4 + y^4 + z^4")
    hyper(3, "x,y,z", "x^3 + y^4 + z^5")
    S = PolyRing(5, "x,y,z")
    out.append(Ideal(S, ["y*z", "x*z", "x*y"]))
    S = PolyRing(3, "a,b,c,d,t")
    out.append(minors(2, Matrix(S, [["a^2 + t^4", "b", "d"], ["c", "a^2", "b^3 - d"]])))
    S = PolyRing(2, "a..e")
    out.append(minors(2, Matrix(S, [["a", "b", "b", "e"], ["d", "d", "c", "a"]])))
    for p in (7, 3):
        T, S = PolyRing(p, "x,y"), PolyRing(p, "a,b,c,d")
        out.append(kernel_of_ring_map(S, [T("x^3"), T("x^2*y"), T("x*y^2"), T("y^3")]))
    S = PolyRing(2, "a,b,c,d")
    out.append(Ideal(S, ["a", "b"]).intersect(Ideal(S, ["a", "c"]), Ideal(S, ["c", "d"]),
                                              Ideal(S, ["c + d", "a^3 + b*d^2"])))
    return out


@st.composite
def corpus_ring_images(draw):
    """A corpus ring moved by a random permutation and rescaling of the variables."""
    I = draw(st.sampled_from(corpus_rings()))
    S = I.ring
    perm = draw(st.permutations(range(S.nvars)))
    scale = [draw(st.integers(1, S.p - 1)) for _ in range(S.nvars)]
    images = [S.var(perm[i]).scale(scale[i]) for i in range(S.nvars)]
    return Ideal(S, [g.substitute(images) for g in I.gens])


_VERDICTS = {}


def _verdicts(I):
    key = I.fingerprint()
    if key not in _VERDICTS:
        _VERDICTS[key] = (is_f_regular(I), is_f_rational(I), is_f_pure(I), is_f_injective(I), is_cohen_macaulay(I))
    return _VERDICTS[key]


@CASES
@given(corpus_ring_images())
def test_implication_lattice(I):
    reg, rat, pure, inj, cm = _verdicts(I)
    if reg:
        assert rat and pure
    if rat:
        assert cm and inj
    if pure:
        assert inj


# ---------------------------------------------------------------------------
# compatible ideals


@CASES
@given(st.sampled_from([(2, 1), (2, 2), (3, 1)]), st.integers(2, 3), st.data())
def test_compatible_ideals_are_compatible(pe, n, data):
    p, e = pe
    R = ring(p, n)
    u = R.one()
    for _ in range(data.draw(st.integers(1, 3))):
        lin = data.draw(polynomials(p, n, 1, 3))
        assume(lin)
        u = u * lin ** data.draw(st.integers(1, p))
    assume(not u.is_constant())
    res = compatible_ideals(u, e)
    for P in res.ideals:
        # u P is inside P^[p^e]
        assert P.frobenius(e).contains(Ideal(R, [u * g for g in P.gens]))

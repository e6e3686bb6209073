"""Test modules and test ideals (of rings and pairs), parameter test ideals,
F-pure (HSLG) modules, the level of a polynomial, and the F-singularity
predicates.

Ideals of R = S/I are handled through their pullbacks to S, which contain I."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .cartier import (
    CartierDatum, CartierMap, ONE, ascend_with_map, descend_with_map, q_gorenstein_generator, test_element,
    trace_on_canonical,
)
from .errors import IndexSearchError, ResourceLimitError
from .frobenius import RationalExponent, base_p_digits, frobenius_root, submodule_root
from .groebner import Ideal, SubmoduleOfFree
from .homological import (
    canonical_ideal, ext_data, free_resolution, frobenius_ext_map, is_cohen_macaulay, reflexive_power, reflexive_powers,
)
from .polyring import PolyRing, Polynomial

MAX_CARTIER_INDEX = 10
DEPTH_OF_SEARCH = 2


@dataclass
class PairSpec:
    """f_1^{t_1} ... f_n^{t_n}."""

    factors: list[tuple[Polynomial, Fraction]] = field(default_factory=list)

    def __post_init__(self):
        fixed = []
        for f, t in self.factors:
            t = Fraction(t)
            if not f:
                raise ValueError("pair polynomial must be nonzero")
            if t < 0:
                raise ValueError("pair exponent must be nonnegative")
            fixed.append((f, t))
        self.factors = fixed

    @classmethod
    def single(cls, t, f: Polynomial) -> "PairSpec":
        return cls([(f, Fraction(t))])

    def __bool__(self):
        return any(t for _, t in self.factors)


@dataclass
class TestModuleResult:
    __test__ = False
    tau: Ideal        # pullback of tau(omega) in S
    omega: Ideal      # pullback of omega in S
    trace: CartierDatum


@dataclass
class FPureModuleResult:
    sigma: Ideal
    omega: Ideal
    trace: CartierDatum
    hsl_number: int


def _maximal_ideal(ring: PolyRing) -> Ideal:
    return Ideal(ring, ring.gens())


def _order_mod(p: int, m: int) -> int:
    return RationalExponent(Fraction(1, m), p).cyclic_order()


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _pow(f: Polynomial, n: int) -> Polynomial:
    return f ** n if n else f.ring.one()


def _schedule(p: int, nsteps: int, e0: int, multipliers: Sequence[Polynomial],
              factors: Sequence[tuple[Polynomial, int]]) -> tuple[list[list[dict]], Polynomial | None]:
    """Steps realizing J -> (u^{(p^E-1)/(p^e0-1)} prod f^{n} J)^{[1/p^E]}, E = nsteps.

    u enters at every e0-th step and f^n digit by digit; the part of n beyond
    p^E becomes the tail factor."""
    steps = []
    digits = [(f, base_p_digits(n, p)) for f, n in factors]
    for j in range(nsteps):
        extra = None
        for f, ds in digits:
            d = ds[j] if j < len(ds) else 0
            if d:
                extra = f ** d if extra is None else extra * f ** d
        base = list(multipliers) if j % e0 == 0 else [None]
        step = []
        for u in base:
            if u is None:
                m = extra.terms if extra is not None else ONE
            else:
                m = (u * extra).terms if extra is not None else u.terms
            step.append(m)
        steps.append(step)
    tail = None
    q = p ** nsteps
    for f, n in factors:
        if n // q:
            tail = _pow(f, n // q) if tail is None else tail * _pow(f, n // q)
    return steps, tail


def pair_ascend(I: Ideal, datum: CartierDatum, c: Polynomial, J: Ideal,
                pair: PairSpec | None = None) -> Ideal:
    """tau(M, f^t) for the Cartier structure ``datum`` on M = J/I, seeded by the test element c.

    t = s / p^D with D a multiple of the datum level; s is split by Skoda into
    an integer part and s' = a'' / (p^E - 1).  The fractional part is an
    ascending chain at level E; the integer part and p^D are absorbed by D
    final root steps."""
    ring = I.ring
    p = ring.p
    e0 = datum.e
    us = datum.multipliers
    facs = pair.factors if pair else []
    D = 0
    for _, t in facs:
        D = max(D, RationalExponent(t, p).d)
    D = -(-D // e0) * e0
    E = e0
    for _, t in facs:
        s = t * p ** D
        frac = s - (s.numerator // s.denominator)
        if frac:
            E = _lcm(E, _order_mod(p, frac.denominator))
    whole, frac_exps, ceil_part = [], [], ring.one()
    for f, t in facs:
        s = t * p ** D
        n = s.numerator // s.denominator
        fr = s - n
        whole.append((f, n))
        a2 = fr * (p ** E - 1)
        assert a2.denominator == 1
        frac_exps.append((f, int(a2)))
        if fr:
            ceil_part = ceil_part * f
    J0 = Ideal(ring, [c * ceil_part * g for g in J.gens] + list(I.gens))
    steps, tail = _schedule(p, E, e0, us, frac_exps)
    tau = ascend_with_map(CartierMap(I, steps, tail), J0)
    if not any(n for _, n in whole) and D == 0:
        return tau
    if D == 0:
        w = ring.one()
        for f, n in whole:
            w = w * _pow(f, n)
        return Ideal(ring, [w * g for g in tau.gens] + list(I.gens))
    steps, tail = _schedule(p, D, e0, us, whole)
    phi = CartierMap(I, steps, tail)
    return phi.apply(Ideal(ring, tau.groebner_basis()))


# ---------------------------------------------------------------------------
# test modules and test ideals


def test_module(I: Ideal, pair: PairSpec | None = None, seed: int = 0, assume_domain: bool = False) -> TestModuleResult:
    """tau(omega_R, f^t) as a pullback ideal, with omega and the trace datum."""
    ring = I.ring
    can = canonical_ideal(I, seed=seed)
    Omega = can.pullback
    trace = trace_on_canonical(1, I, Omega) if not I.is_zero() else CartierDatum(I, 1, [ring.one()], check=False)
    c = test_element(I, assume_domain=assume_domain, seed=seed)
    tau = pair_ascend(I, trace, c, Omega, pair)
    return TestModuleResult(tau, Omega, trace)


test_module.__test__ = False


def parameter_test_ideal(I: Ideal, seed: int = 0, assume_domain: bool = False) -> Ideal:
    """(tau(omega) : omega), pulled back to S."""
    res = test_module(I, seed=seed, assume_domain=assume_domain)
    return (res.tau + I).quotient(res.omega)


def find_q_gorenstein_index(I: Ideal, Omega: Ideal, max_index: int = MAX_CARTIER_INDEX) -> tuple[int, Polynomial]:
    """Least n <= max_index with (omega^n)^{**} principal, and its generator."""
    if Omega.is_unit():
        return 1, I.ring.one()
    for n, rep in reflexive_powers(Omega, I, max_index):
        if rep.principal is not None:
            return n, rep.principal
    raise IndexSearchError(f"no principal reflexive power of omega for 1 <= n <= {max_index}")


def test_ideal(I: Ideal, pair: PairSpec | None = None, seed: int = 0, assume_domain: bool = False,
               max_cartier_index: int = MAX_CARTIER_INDEX, q_gorenstein_index: int | None = None) -> Ideal:
    """tau(R, f^t) pulled back to S.

    Q-Gorenstein rings whose index n is prime to p use the trace generator at
    level e = ord_n(p); otherwise the test module of (omega, h^{(n-1)/n}) is
    computed, where (omega^n)^{**} = (h), and tau(R) = tau(omega, h^{(n-1)/n}) : h."""
    ring = I.ring
    p = ring.p
    if I.is_zero():
        datum = CartierDatum(I, 1, [ring.one()], check=False)
        return pair_ascend(I, datum, ring.one(), Ideal(ring, [1]), pair)
    c = test_element(I, assume_domain=assume_domain, seed=seed)
    datum = q_gorenstein_generator(1, I)
    if datum.principal:
        return pair_ascend(I, datum, c, Ideal(ring, [1]), pair)
    can = canonical_ideal(I, seed=seed)
    Omega = can.pullback
    if q_gorenstein_index is not None:
        n = q_gorenstein_index
        rep = reflexive_power(Omega, n, I) if n > 1 else None
        h = rep.principal if rep else ring.one()
        if h is None:
            raise IndexSearchError(f"(omega^{n})** is not principal")
    else:
        n, h = find_q_gorenstein_index(I, Omega, max_cartier_index)
    if n % p:
        e0 = _order_mod(p, n)
        datum = q_gorenstein_generator(e0, I)
        if datum.principal:
            return pair_ascend(I, datum, c, Ideal(ring, [1]), pair)
    trace = trace_on_canonical(1, I, Omega)
    extra = PairSpec([(h, Fraction(n - 1, n))] + (pair.factors if pair else []))
    tau_omega = pair_ascend(I, trace, c, Omega, extra)
    return (tau_omega + I).quotient(Ideal(ring, [h] + list(I.gens)))


test_ideal.__test__ = False


# ---------------------------------------------------------------------------
# F-pure modules and levels


def _descend_level(pair: PairSpec | None, p: int) -> tuple[int, list[tuple[Polynomial, int]]]:
    """(e, [(f, t (p^e - 1))]) with every t (p^e - 1) an integer."""
    if not pair:
        return 1, []
    e = 1
    for _, t in pair.factors:
        rx = RationalExponent(t, p)
        if rx.d:
            raise ValueError("descending chains need exponents without p in the denominator")
        e = _lcm(e, rx.cyclic_order())
    return e, [(f, int(t * (p ** e - 1))) for f, t in pair.factors]


def f_pure_module(I: Ideal, pair: PairSpec | None = None, seed: int = 0) -> FPureModuleResult:
    """Stable image of the trace iterates on omega (and the index where it stabilizes)."""
    ring = I.ring
    p = ring.p
    can = canonical_ideal(I, seed=seed)
    Omega = can.pullback
    trace = trace_on_canonical(1, I, Omega) if not I.is_zero() else CartierDatum(I, 1, [ring.one()], check=False)
    e, facs = _descend_level(pair, p)
    steps, tail = _schedule(p, e, 1, trace.multipliers, facs)
    sigma, k = descend_with_map(CartierMap(I, steps, tail), Omega)
    return FPureModuleResult(sigma, Omega, trace, k)


def level(f: Polynomial) -> int:
    """Stabilization index of (f^{p^i - 1})^{[1/p^i]}, counted from 1."""
    if not f:
        raise ValueError("level of the zero polynomial")
    I = Ideal(f.ring, [])
    return f_pure_module(I, PairSpec.single(1, f)).hsl_number + 1


# ---------------------------------------------------------------------------
# predicates


def is_f_pure(I: Ideal, at_origin: bool = False) -> bool:
    """Fedder: (I^{[p]} : I) not inside m^{[p]}; globally, its root is the unit ideal."""
    ring = I.ring
    if I.is_zero():
        return True
    C = I.frobenius(1).quotient(I)
    if at_origin:
        mp = _maximal_ideal(ring).frobenius(1)
        return not mp.contains(C)
    return frobenius_root(1, C).is_unit()


def _unit_or_at_origin(J: Ideal, at_origin: bool) -> bool:
    if at_origin:
        return (J + _maximal_ideal(J.ring)).is_unit()
    return J.is_unit()


def is_f_regular(I: Ideal, pair: PairSpec | None = None, at_origin: bool = False,
                 depth_of_search: int = DEPTH_OF_SEARCH, q_gorenstein_index=None,
                 max_cartier_index: int = MAX_CARTIER_INDEX, assume_domain: bool = False,
                 seed: int = 0) -> bool | None:
    """True / False, or None when the approximation path cannot decide."""
    ring = I.ring
    if q_gorenstein_index != float("inf"):
        try:
            tau = test_ideal(I, pair, seed=seed, assume_domain=assume_domain, max_cartier_index=max_cartier_index,
                             q_gorenstein_index=q_gorenstein_index)
            return _unit_or_at_origin(tau, at_origin)
        except IndexSearchError:
            pass
    # strong F-regularity implies F-purity and F-rationality, which are decidable
    if not is_f_pure(I, at_origin=at_origin):
        return False
    if not is_f_rational(I, assume_domain=assume_domain, at_origin=at_origin, seed=seed):
        return False
    # non-Q-Gorenstein: roots of c (I^{[q]} : I) can only prove regularity
    c = test_element(I, assume_domain=assume_domain, seed=seed)
    for e in range(1, depth_of_search + 1):
        C = I.frobenius(e).quotient(I) if not I.is_zero() else Ideal(ring, [1])
        gens = [c * g for g in C.gens]
        if pair:
            q = ring.p ** e
            mult = ring.one()
            for f, t in pair.factors:
                n = t * q
                mult = mult * _pow(f, -(-n.numerator // n.denominator))
            gens = [mult * g for g in gens]
        J = frobenius_root(e, Ideal(ring, gens)) + I
        if _unit_or_at_origin(J, at_origin):
            return True
    return None


def is_f_rational(I: Ideal, assume_cm: bool = False, assume_domain: bool = False, at_origin: bool = False,
                  seed: int = 0) -> bool:
    """CM and no proper nonzero trace-stable submodule of omega."""
    if I.is_zero():
        return True
    if not assume_cm and not is_cohen_macaulay(I):
        return False
    res = test_module(I, seed=seed, assume_domain=assume_domain)
    if at_origin:
        return _unit_or_at_origin((res.tau + I).quotient(res.omega), True)
    return (res.tau + I).contains(res.omega)


def _ext_injective(i: int, I: Ideal, res, at_origin: bool) -> bool:
    """Frobenius on the local cohomology dual to Ext^i is injective iff the
    root of the image of the Ext map, plus the relations, fills the free module."""
    ring = I.ring
    data = ext_data(i, res)
    if data.pruned.is_zero():
        return True
    fmap = frobenius_ext_map(i, I, res)
    k = fmap.source.ngens
    A = SubmoduleOfFree(ring, k, [list(v) for v in fmap.source.relations.gens])
    N = submodule_root(1, SubmoduleOfFree(ring, k, fmap.matrix.columns())) + A
    if N.is_full():
        return True
    if not at_origin:
        return False
    ann = _quotient_annihilator(N)
    return not _maximal_ideal(ring).contains(ann)


def _quotient_annihilator(N: SubmoduleOfFree) -> Ideal:
    ring = N.ring
    k = N.rank
    ann = Ideal(ring, [1])
    from .homological import vector_colon

    for j in range(k):
        v = [ring.one() if i == j else ring.zero() for i in range(k)]
        ann = ann.intersect(vector_colon(N, v))
    return ann


def is_f_injective(I: Ideal, assume_cm: bool = False, assume_reduced: bool = True, assume_normal: bool = False,
                   at_origin: bool = False, seed: int = 0) -> bool:
    """Injectivity of Frobenius on every local cohomology module of R = S/I."""
    ring = I.ring
    if I.is_zero():
        return True
    n = ring.nvars
    c = int(I.codim())
    # top cohomology: surjectivity of the trace on omega
    can = canonical_ideal(I, seed=seed)
    Omega = can.pullback
    trace = trace_on_canonical(1, I, Omega)
    image = trace.cartier_map().apply(Omega)
    if at_origin:
        ok = _unit_or_at_origin(image.quotient(Omega), True)
    else:
        ok = image.contains(Omega)
    if not ok:
        return False
    if assume_cm:
        return True
    res = free_resolution(I)
    for i in range(c + 1, min(res.length, n) + 1):
        if assume_reduced and i == n:
            continue
        if assume_normal and i >= n - 1:
            continue
        if not _ext_injective(i, I, res, at_origin):
            return False
    return True


__all__ = [
    "PairSpec", "TestModuleResult", "FPureModuleResult", "pair_ascend", "test_module", "test_ideal",
    "parameter_test_ideal", "find_q_gorenstein_index", "f_pure_module", "level", "is_f_pure", "is_f_regular",
    "is_f_rational", "is_f_injective",
]

"""p^{-e}-linear maps J -> sum_i (u_i J)^{[1/p^e]} on quotients S/I: their
construction (trace generators, test elements) and iteration (ascending and
descending chains)."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ContainmentError, ResourceLimitError, TestElementError
from .frobenius import _compact, base_p_digits, root_generators, submodule_root
from .groebner import GBasis, Ideal, Matrix, SubmoduleOfFree, determinant, get_budget
from .polyring import PolyRing, Polynomial

TRIM_AT = 16


def _mul(p: int, a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    if len(a) > len(b):
        a, b = b, a
    acc: dict[int, int] = {}
    get = acc.get
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            acc[k] = get(k, 0) + ca * cb
    return {k: c % p for k, c in acc.items() if c % p}


ONE = {0: 1}


class CartierMap:
    """A composite of one-level root steps, J -> sum_m (m J)^{[1/p]} per step.

    ``steps[k]`` lists the multipliers of step k; ``tail`` multiplies the final
    result (the quotient part of large exponents).  All results are read
    modulo I, so products are reduced modulo the matching bracket power of I."""

    def __init__(self, I: Ideal, steps: Sequence[Sequence[Polynomial | dict]], tail: Polynomial | None = None):
        self.I = I
        self.ring = I.ring
        self.steps = [[m.terms if isinstance(m, Polynomial) else m for m in step] for step in steps]
        self.tail = tail
        self._bracket: dict[int, GBasis] = {}

    @property
    def level(self) -> int:
        return len(self.steps)

    def bracket_gb(self, r: int) -> GBasis | None:
        if self.I.is_zero():
            return None
        if r not in self._bracket:
            self._bracket[r] = self.I.frobenius(r).gb()
        return self._bracket[r]

    def _trim(self, gens: list[dict[int, int]], r: int) -> list[dict[int, int]]:
        ring = self.ring
        if len(gens) <= TRIM_AT:
            return gens
        extra = [g.terms for g in self.I.frobenius(r).gens] if not self.I.is_zero() else []
        from .groebner import buchberger

        gb = buchberger(ring, gens + extra)
        red = self.bracket_gb(r)
        out = []
        for f in gb.polys:
            if red is not None and red.is_member(f):
                continue
            out.append(f)
        return out

    def apply_terms(self, gens: Sequence[dict[int, int]]) -> list[dict[int, int]]:
        ring = self.ring
        p = ring.p
        cur = [g for g in gens if g]
        e = self.level
        for k, mults in enumerate(self.steps):
            remaining = e - k
            red = self.bracket_gb(remaining)
            out = []
            for g in cur:
                for m in mults:
                    h = g if m == ONE else _mul(p, m, g)
                    if red is not None and h:
                        h = red.reduce(h)
                    if h:
                        out.extend(root_generators(ring, h, 1))
            cur = self._trim(_compact(ring, out), remaining - 1)
            if not cur:
                break
        if self.tail is not None and cur:
            cur = [_mul(p, self.tail.terms, g) for g in cur]
        return cur

    def apply(self, J: Ideal) -> Ideal:
        """phi(J) + I."""
        ring = self.ring
        gens = _generators_mod(J, self.I)
        out = self.apply_terms([g.terms for g in gens])
        return Ideal(ring, [Polynomial(ring, t, _trusted=True) for t in out] + list(self.I.gens))


def _generators_mod(J: Ideal, I: Ideal) -> list[Polynomial]:
    """Generators of J that are not already in I (J is assumed to contain I)."""
    if I.is_zero():
        return list(J.gens)
    return [g for g in J.gens if g not in I]


@dataclass
class CartierDatum:
    """Level e and multipliers u_1..u_n representing J -> sum (u_i J)^{[1/p^e]} on S/I."""

    I: Ideal
    e: int
    multipliers: list[Polynomial]
    principal: bool = True
    check: bool = True

    def __post_init__(self):
        if self.e < 1:
            raise ValueError("Cartier level must be positive")
        if not self.multipliers:
            raise ValueError("a Cartier datum needs at least one multiplier")
        ring = self.I.ring
        self.multipliers = [ring(u) for u in self.multipliers]
        if self.check and not self.I.is_zero():
            Iq = self.I.frobenius(self.e)
            for u in self.multipliers:
                for g in self.I.gens:
                    if u * g not in Iq:
                        raise ContainmentError("multiplier does not carry I into its bracket power")

    @property
    def ring(self) -> PolyRing:
        return self.I.ring

    def cartier_map(self, repeat: int = 1) -> CartierMap:
        steps = []
        for _ in range(repeat):
            steps.append(list(self.multipliers))
            steps.extend([[ONE]] * (self.e - 1))
        return CartierMap(self.I, steps)

    def __str__(self):
        us = ", ".join(str(u) for u in self.multipliers)
        return f"CartierDatum(e={self.e}, u=[{us}])"


# ---------------------------------------------------------------------------
# constructing multipliers


def _principal_or_all(C: Ideal, Iq: Ideal) -> tuple[list[Polynomial], bool]:
    """Reduced generators of C / Iq; a single one when it generates modulo Iq."""
    reduced = []
    for g in C.gens:
        h = Iq.reduce(g) if not Iq.is_zero() else g
        if h:
            reduced.append(h.monic())
    uniq = list({frozenset(h.terms.items()): h for h in reduced}.values())
    if not uniq:
        return [], False
    uniq.sort(key=lambda h: (h.degree(), len(h), -h.lead_key()))
    for g in uniq:
        K = Ideal(Iq.ring, list(Iq.gens) + [g])
        if all(h in K for h in uniq):
            return [g], True
    return uniq, False


def q_gorenstein_generator(e: int, I: Ideal) -> CartierDatum:
    """Generator of (I^{[p^e]} : I) / I^{[p^e]}; ``principal`` is False when none exists."""
    ring = I.ring
    if I.is_zero():
        return CartierDatum(I, e, [ring.one()], True, check=False)
    Iq = I.frobenius(e)
    C = Iq.quotient(I)
    us, principal = _principal_or_all(C, Iq)
    return CartierDatum(I, e, us, principal, check=False)


def trace_on_canonical(e: int, I: Ideal, Omega: Ideal) -> CartierDatum:
    """Multiplier(s) for the trace on omega = Omega / I: generators of
    ((I^{[q]} : I) cap (Omega^{[q]} : Omega)) / I^{[q]}."""
    ring = I.ring
    if Omega.is_unit():
        return q_gorenstein_generator(e, I)
    if I.is_zero():
        raise ValueError("on a polynomial ring omega is the unit ideal")
    Iq = I.frobenius(e)
    C = Iq.quotient(I).intersect(Omega.frobenius(e).quotient(Omega))
    us, principal = _principal_or_all(C, Iq)
    if not us:
        raise ContainmentError("empty trace multiplier set: Omega is inconsistent")
    return CartierDatum(I, e, us, principal, check=False)


@dataclass
class CanonicalData:
    omega: list[Polynomial]
    Omega: Ideal
    trace: CartierDatum


# ---------------------------------------------------------------------------
# test elements


def jacobian_minors(I: Ideal, size: int, limit: int, rng: random.Random) -> list[Polynomial]:
    ring = I.ring
    gens = list(I.trim().gens)
    n = ring.nvars
    jac = [[g.partial(j) for j in range(n)] for g in gens]
    rows = list(itertools.combinations(range(len(gens)), size))
    cols = list(itertools.combinations(range(n), size))
    pairs = [(r, c) for r in rows for c in cols]
    if len(pairs) > limit:
        pairs = rng.sample(pairs, limit)
    out = []
    for r, c in pairs:
        m = determinant([[jac[i][j] for j in c] for i in r], ring)
        if m:
            out.append(m)
    out.sort(key=lambda f: (len(f), f.degree()))
    return out


def test_element(I: Ideal, assume_domain: bool = False, seed: int = 0, tries: int = 100) -> Polynomial:
    """An element of the Jacobian ideal avoiding every minimal prime of I.

    Acceptance: c not in I, and (for non-domains) c a nonzerodivisor modulo I,
    i.e. (I : c) == I, which for reduced I means c avoids all minimal primes."""
    ring = I.ring
    if I.is_zero():
        return ring.one()
    if I.is_unit():
        raise ValueError("the unit ideal has no test element")
    rng = random.Random(seed)
    h = int(I.codim())
    minors = jacobian_minors(I, h, 60, rng)
    minors = [I.reduce(m) for m in minors]
    minors = [m for m in minors if m]
    if not minors:
        raise TestElementError("all Jacobian minors vanish modulo I (is I reduced?)")

    def good(c: Polynomial) -> bool:
        if not c or c in I:
            return False
        if assume_domain:
            return True
        return I.quotient(Ideal(ring, [c])) == I

    count = 0
    for c in minors:
        if count >= tries:
            break
        count += 1
        if good(c):
            return c.monic()
    while count < tries:
        count += 1
        c = ring.zero()
        for m in minors:
            a = rng.randrange(ring.p)
            if a:
                c = c + m.scale(a)
        c = I.reduce(c)
        if good(c):
            return c.monic()
    raise TestElementError(f"no test element found in {tries} tries")


# ---------------------------------------------------------------------------
# chains


def ascend_with_map(phi: CartierMap, J0: Ideal) -> Ideal:
    """Smallest ideal J containing J0 + I with phi(J) inside J (frontier iteration)."""
    I = phi.I
    ring = phi.ring
    J = (J0 + I) if not I.is_zero() else J0
    J = Ideal(ring, J.groebner_basis())
    frontier = [g.terms for g in _generators_mod(J, I)]
    budget = get_budget()
    while frontier:
        budget.spend(1)
        images = phi.apply_terms(frontier)
        gb = J.gb()
        new = [t for t in images if not gb.is_member(t)]
        if not new:
            return J
        J = Ideal(ring, list(J.groebner_basis()) + [Polynomial(ring, t, _trusted=True) for t in new])
        J = Ideal(ring, J.groebner_basis())
        frontier = new
    return J


def ascend_ideal(datum: CartierDatum, J0: Ideal) -> Ideal:
    """Iterate J_{k+1} = J_k + sum_i (u_i J_k)^{[1/p^e]} (modulo I) to its fixed point."""
    return ascend_with_map(datum.cartier_map(), J0)


def descend_with_map(phi: CartierMap, J0: Ideal, max_steps: int = 1000) -> tuple[Ideal, int]:
    I = phi.I
    ring = phi.ring
    J = J0 + I if not I.is_zero() else J0
    for k in range(max_steps):
        nxt = phi.apply(Ideal(ring, J.groebner_basis()))
        if nxt == J:
            return Ideal(ring, J.groebner_basis()), k
        J = nxt
    raise ResourceLimitError("descending chain did not stabilize")


def descend_chain(datum: CartierDatum, J0: Ideal) -> tuple[Ideal, int]:
    """J_{k+1} = sum_i (u_i J_k)^{[1/p^e]} + I; returns the fixed ideal and the first k with J_{k+1} = J_k."""
    return descend_with_map(datum.cartier_map(), J0)


def ascend_module(e: int, A: SubmoduleOfFree, U: Matrix) -> SubmoduleOfFree:
    """Smallest B containing A with (U B)^{[1/p^e]} inside B:
    B_0 = A, B_{k+1} = B_k + (U B_k)^{[1/p^e]}."""
    ring = A.ring
    k = A.rank
    if U.nrows != k or U.ncols != k:
        raise ValueError("U must be a square matrix of the module's rank")
    B = A
    frontier = list(B.gens)
    budget = get_budget()
    while frontier:
        budget.spend(1)
        images = SubmoduleOfFree(ring, k, [U.apply(v) for v in frontier])
        root = submodule_root(e, images)
        new = [v for v in root.gens if v not in B]
        if not new:
            return B.trim()
        B = (B + SubmoduleOfFree(ring, k, new)).trim()
        frontier = new
    return B.trim()


__all__ = [
    "CartierMap", "CartierDatum", "CanonicalData", "q_gorenstein_generator", "trace_on_canonical",
    "test_element", "ascend_ideal", "ascend_with_map", "descend_chain", "descend_with_map", "ascend_module",
    "jacobian_minors",
]

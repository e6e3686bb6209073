"""Bracket powers, generalized (integer and rational) Frobenius powers and
Frobenius roots of ideals and of submodules of free modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ResourceLimitError
from .groebner import GBasis, Ideal, SubmoduleOfFree
from .polyring import PolyRing, Polynomial, root_bucket_terms

# Trim intermediate ideals once they carry more generators than this.
TRIM_THRESHOLD = 24


def base_p_digits(n: int, p: int) -> list[int]:
    """Digits of n in base p, least significant first ([] for n = 0)."""
    if n < 0:
        raise ValueError("negative integer has no base-p expansion")
    out = []
    while n:
        n, d = divmod(n, p)
        out.append(d)
    return out


@dataclass(frozen=True)
class RationalExponent:
    """t = a / (p^d * m) with p not dividing m."""

    t: Fraction
    p: int
    a: int = field(init=False)
    d: int = field(init=False)
    m: int = field(init=False)

    def __post_init__(self):
        t = Fraction(self.t)
        if t < 0:
            raise ValueError("exponent must be nonnegative")
        object.__setattr__(self, "t", t)
        den = t.denominator
        d = 0
        while den % self.p == 0:
            den //= self.p
            d += 1
        object.__setattr__(self, "a", t.numerator)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "m", den)

    @property
    def is_p_power(self) -> bool:
        return self.m == 1

    def cyclic_order(self) -> int:
        """Least e >= 1 with m | p^e - 1 (e = 1 when m = 1)."""
        if self.m == 1:
            return 1
        e, r = 1, self.p % self.m
        while r != 1:
            r = r * self.p % self.m
            e += 1
        return e

    def split(self) -> tuple[int, int, int]:
        """(d, e, a') with t = a' / (p^d (p^e - 1))."""
        e = self.cyclic_order()
        if self.m == 1:
            return self.d, e, self.a * (self.p ** e - 1)
        return self.d, e, self.a * ((self.p ** e - 1) // self.m)


# ---------------------------------------------------------------------------
# roots of polynomials and ideals


def root_generators(ring: PolyRing, terms: dict[int, int], e: int) -> list[dict[int, int]]:
    if not terms:
        return []
    if e == 0:
        return [terms]
    return list(root_bucket_terms(ring, terms, e).values())


def frobenius(e: int, I: Ideal) -> Ideal:
    """I^{[p^e]}."""
    if e < 0:
        raise ValueError("Frobenius level must be nonnegative")
    return I.frobenius(e) if e else I


def _compact(ring: PolyRing, gens: list[dict[int, int]]) -> list[dict[int, int]]:
    """Deduplicate up to scalars, dropping zeros."""
    seen = {}
    p = ring.p
    for g in gens:
        if not g:
            continue
        lead = max(g)
        inv = pow(g[lead], -1, p)
        mg = {k: c * inv % p for k, c in g.items()}
        key = frozenset(mg.items())
        if key not in seen:
            seen[key] = mg
    return list(seen.values())


def frobenius_root(e: int, I: Ideal | Polynomial | Iterable[Polynomial]) -> Ideal:
    """I^{[1/p^e]}: the ideal generated by the root buckets of the generators.

    No Gröbner basis is involved; the cost is linear in the number of terms."""
    if isinstance(I, Polynomial):
        I = Ideal(I.ring, [I])
    elif not isinstance(I, Ideal):
        gens = list(I)
        I = Ideal(gens[0].ring, gens)
    ring = I.ring
    if e < 0:
        raise ValueError("Frobenius level must be nonnegative")
    out: list[dict[int, int]] = []
    for g in I.gens:
        out.extend(root_generators(ring, g.terms, e))
    return Ideal(ring, [Polynomial(ring, t, _trusted=True) for t in _compact(ring, out)])


def trimmed(I: Ideal, threshold: int = TRIM_THRESHOLD) -> Ideal:
    """Replace a long generator list by the reduced GB when that is shorter."""
    if len(I.gens) <= threshold:
        return I
    gb = I.groebner_basis()
    if len(gb) < len(I.gens):
        J = Ideal(I.ring, gb)
        J._gb = I._gb
        return J
    return I


def _times_terms(p: int, a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    if len(a) > len(b):
        a, b = b, a
    acc: dict[int, int] = {}
    get = acc.get
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            acc[k] = get(k, 0) + ca * cb
    return {k: c % p for k, c in acc.items() if c % p}


def root_step(ring: PolyRing, gens: Sequence[dict[int, int]], multipliers: Sequence[dict[int, int]],
              reducer: GBasis | None = None) -> list[dict[int, int]]:
    """Generators of sum_i (m_i * J)^{[1/p]} for J = (gens).

    ``reducer`` (a GB of some I^{[p]}) may be used to shrink products first;
    the caller must then add I to the result."""
    out: list[dict[int, int]] = []
    p = ring.p
    for g in gens:
        for m in multipliers:
            h = _times_terms(p, m, g) if m != {0: 1} else g
            if reducer is not None and h:
                h = reducer.reduce(h)
            out.extend(root_generators(ring, h, 1))
    return _compact(ring, out)


def frobenius_root_mult(e: int, factors: Sequence[tuple[int, Polynomial]], J: Ideal | None = None) -> Ideal:
    """((prod f_i^{n_i}) * J)^{[1/p^e]} without expanding the large powers.

    Processes the base-p digits of every n_i from the low end, using
    (f^{p q + r} J)^{[1/p]} = f^q (f^r J)^{[1/p]} one level at a time."""
    if not factors and J is None:
        raise ValueError("nothing to take the root of")
    ring = factors[0][1].ring if factors else J.ring
    p = ring.p
    if J is None:
        J = Ideal(ring, [1])
    gens = [g.terms for g in J.gens]
    exps = [n for n, _ in factors]
    polys = [f for _, f in factors]
    if any(n < 0 for n in exps):
        raise ValueError("exponents must be nonnegative")
    for _ in range(e):
        mult = {0: 1}
        for i, f in enumerate(polys):
            exps[i], d = divmod(exps[i], p)
            if d:
                mult = _times_terms(p, mult, (f ** d).terms)
        gens = root_step(ring, gens, [mult])
        if len(gens) > TRIM_THRESHOLD:
            gens = [g.terms for g in trimmed(Ideal(ring, [Polynomial(ring, g, _trusted=True) for g in gens]), 0).gens]
    rest = ring.one()
    for n, f in zip(exps, polys):
        if n:
            rest = rest * f ** n
    result = Ideal(ring, [Polynomial(ring, g, _trusted=True) * rest for g in gens])
    return result


# ---------------------------------------------------------------------------
# generalized Frobenius powers


def frobenius_power_int(n: int, I: Ideal) -> Ideal:
    """I^{[n]} = I^{d_0} (I^{d_1})^{[p]} ... for n = sum d_i p^i."""
    if n < 0:
        raise ValueError("exponent must be nonnegative")
    ring = I.ring
    result = Ideal(ring, [1])
    for i, d in enumerate(base_p_digits(n, ring.p)):
        if d:
            result = (result * (I ** d).frobenius(i)).trim()
    return result


def _power_over_p_power(a: int, d: int, I: Ideal, start: Ideal | None = None) -> Ideal:
    """(start * I^{[a]})^{[1/p^d]}, by digits: (A * B^{[p]})^{[1/p]} = A^{[1/p]} B.

    With the default start (the unit ideal) this is I^{[a/p^d]}."""
    ring = I.ring
    p = ring.p
    digits = base_p_digits(a, p)
    J = Ideal(ring, [1]) if start is None else start
    for k in range(d):
        dk = digits[k] if k < len(digits) else 0
        if dk:
            J = (J * (I ** dk)).trim()
        J = trimmed(frobenius_root(1, J), 0)
    high = a // p ** d
    if high:
        J = (J * frobenius_power_int(high, I)).trim()
    return J


class PowerChain:
    """Annotation for a rational Frobenius power computed as the fixed point of a root iteration."""

    def __init__(self, steps: int, stabilized: bool):
        self.steps = steps
        self.stabilized = stabilized

    def __repr__(self):
        return f"fixed point reached after {self.steps} steps"


def frobenius_power(t, I: Ideal, max_steps: int = 50) -> Ideal:
    """Generalized Frobenius power I^{[t]} for a nonnegative rational t.

    For t = a/(p^d m) with m > 1, write t p^d = A + r/(p^e - 1) with 0 < r < p^e - 1.
    Along n = d + k e the upper approximations ceil(t p^n)/p^n give
    I^{[t]} = (X * I^{[A]})^{[1/p^d]}, where X is the limit of
    X_0 = (I^{[r+1]})^{[1/p^e]}, X_{k+1} = (X_k * I^{[r]})^{[1/p^e]}.
    The iteration is deterministic, so the first repeat is its limit.

    The result carries ``annotation`` (None for exact cases, else a PowerChain)."""
    ring = I.ring
    p = ring.p
    t = Fraction(t)
    if t < 0:
        raise ValueError("exponent must be nonnegative")
    if t.denominator == 1:
        J = frobenius_power_int(int(t), I)
        J.annotation = None
        return J
    rx = RationalExponent(t, p)
    if rx.is_p_power:
        J = _power_over_p_power(rx.a, rx.d, I)
        J.annotation = None
        return J
    e = rx.cyclic_order()
    A, r = divmod(rx.a * ((p ** e - 1) // rx.m), p ** e - 1)
    X = _power_over_p_power(r + 1, e, I)
    for step in range(1, max_steps + 1):
        nxt = _power_over_p_power(r, e, I, start=X)
        if nxt == X:
            J = _power_over_p_power(A, rx.d, I, start=X)
            J.annotation = PowerChain(step, True)
            return J
        X = nxt
    raise ResourceLimitError(f"rational Frobenius power did not stabilize within {max_steps} steps")


# ---------------------------------------------------------------------------
# submodules of free modules


def submodule_root(e: int, M: SubmoduleOfFree) -> SubmoduleOfFree:
    """M^{[1/p^e]}: one vector per residue tuple, coordinates taken from the buckets."""
    ring = M.ring
    k = M.rank
    out = []
    for v in M.gens:
        per: dict[tuple[int, ...], list[dict[int, int]]] = {}
        for i, f in enumerate(v):
            for res, t in root_bucket_terms(ring, f.terms, e).items():
                per.setdefault(res, [{} for _ in range(k)])[i] = t
        for res in sorted(per):
            out.append([Polynomial(ring, t, _trusted=True) for t in per[res]])
    return SubmoduleOfFree(ring, k, out)


def frobenius_module(e: int, M: SubmoduleOfFree) -> SubmoduleOfFree:
    """M^{[p^e]}: all coordinates raised to the p^e-th power."""
    return SubmoduleOfFree(M.ring, M.rank, [[c.frobenius_power(e) for c in v] for v in M.gens])


__all__ = [
    "RationalExponent", "base_p_digits", "frobenius", "frobenius_root", "frobenius_root_mult",
    "frobenius_power_int", "frobenius_power", "submodule_root", "frobenius_module", "root_step", "trimmed",
    "PowerChain",
]

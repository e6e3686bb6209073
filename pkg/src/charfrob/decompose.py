"""Desk-scale minimal primes (with univariate factorization over F_p) and the
enumeration of prime ideals compatible with a p^{-e}-linear map J -> (uJ)^{[1/p^e]}."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .cartier import CartierMap, ONE, ascend_with_map, jacobian_minors
from .errors import ResourceLimitError
from .groebner import Ideal
from .polyring import PolyRing, Polynomial

DECOMPOSE_BUDGET = 4000

# ---------------------------------------------------------------------------
# dense univariate arithmetic over F_p (coefficient lists, lowest degree first)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _sub(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _divmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] = (a[i + k] - c * y) % p
        _trim(a)
    return _trim(q), a


def _monic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _gcd(a, b, p):
    while b:
        a, b = b, _divmod(a, b, p)[1]
    return _monic(a, p)


def _powmod(a, n, m, p):
    result = [1]
    a = _divmod(a, m, p)[1]
    while n:
        if n & 1:
            result = _divmod(_mul(result, a, p), m, p)[1]
        a = _divmod(_mul(a, a, p), m, p)[1]
        n >>= 1
    return result


def _deriv(a, p):
    return _trim([i * a[i] % p for i in range(1, len(a))])


def _squarefree(a, p) -> list[tuple[list[int], int]]:
    """Square-free decomposition: [(g_i, i)] with a = prod g_i^i (monic a)."""
    out = []
    if len(a) <= 1:
        return out
    d = _deriv(a, p)
    if not d:
        # a is a p-th power
        root = [a[i] for i in range(0, len(a), p)]
        return [(g, k * p) for g, k in _squarefree(root, p)]
    c = _gcd(a, d, p)
    w = _divmod(a, c, p)[0]
    i = 1
    while len(w) > 1:
        y = _gcd(w, c, p)
        z = _divmod(w, y, p)[0]
        if len(z) > 1:
            out.append((_monic(z, p), i))
        i += 1
        w = y
        c = _divmod(c, y, p)[0]
    if len(c) > 1:
        root = [c[i] for i in range(0, len(c), p)]
        out.extend((g, k * p) for g, k in _squarefree(root, p))
    return out


def _ddf(a, p) -> list[tuple[list[int], int]]:
    """Distinct-degree factorization of a monic square-free a."""
    out = []
    h = [0, 1]
    d = 0
    f = a
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = _powmod(h, p, f, p)
        g = _gcd(f, _sub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, d))
            f = _divmod(f, g, p)[0]
            h = _divmod(h, f, p)[1]
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _edf(a, d, p, rng: random.Random) -> list[list[int]]:
    """Equal-degree splitting (Cantor-Zassenhaus; trace map for p = 2)."""
    n = len(a) - 1
    if n == d:
        return [a]
    while True:
        r = _trim([rng.randrange(p) for _ in range(n)])
        if len(r) < 2:
            continue
        if p == 2:
            t, s = r, r
            for _ in range(d - 1):
                s = _divmod(_mul(s, s, p), a, p)[1]
                t = _trim([(x + y) % 2 for x, y in itertools.zip_longest(t, s, fillvalue=0)])
            g = _gcd(a, t, p)
        else:
            g = _gcd(a, _sub(_powmod(r, (p ** d - 1) // 2, a, p), [1], p), p)
        if 1 < len(g) < len(a):
            return _edf(g, d, p, rng) + _edf(_divmod(a, g, p)[0], d, p, rng)


def factor_coefficients(a: list[int], p: int, seed: int = 0) -> list[tuple[list[int], int]]:
    rng = random.Random(seed)
    a = _monic(_trim(list(a)), p)
    out = []
    for g, k in _squarefree(a, p):
        for h, d in _ddf(g, p):
            for q in _edf(h, d, p, rng):
                out.append((q, k))
    out.sort(key=lambda t: (len(t[0]), t[0]))
    return out


def _to_coeffs(f: Polynomial, var: int) -> list[int]:
    out: list[int] = []
    for e, c in f.items():
        k = e[var]
        while len(out) <= k:
            out.append(0)
        out[k] = c
    return _trim(out)


def _from_coeffs(ring: PolyRing, var: int, a: Sequence[int]) -> Polynomial:
    n = ring.nvars
    terms = {}
    for k, c in enumerate(a):
        if c:
            e = [0] * n
            e[var] = k
            terms[ring.key_of(tuple(e))] = c
    return Polynomial(ring, terms)


def _variables_of(f: Polynomial) -> list[int]:
    used = set()
    for e, _ in f.items():
        used.update(i for i, x in enumerate(e) if x)
    return sorted(used)


def factor_univariate(f: Polynomial, seed: int = 0) -> list[tuple[Polynomial, int]]:
    """Monic irreducible factors with multiplicities of a polynomial in one variable."""
    if not f:
        raise ValueError("cannot factor zero")
    vs = _variables_of(f)
    if len(vs) > 1:
        raise ValueError("factor_univariate needs a polynomial in one variable")
    if not vs:
        return []
    v = vs[0]
    ring = f.ring
    return [(_from_coeffs(ring, v, q), k) for q, k in factor_coefficients(_to_coeffs(f, v), ring.p, seed)]


# ---------------------------------------------------------------------------
# multivariate helpers


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial | None:
    """f / g when g divides f, else None."""
    ring = f.ring
    q = ring.zero()
    r = f
    lk, lc = g.lead_key(), g.lead_coefficient()
    inv = pow(lc, -1, ring.p)
    while r:
        k = r.lead_key()
        if not ring.divides(lk, k):
            return None
        t = Polynomial(ring, {k - lk: r.lead_coefficient() * inv % ring.p})
        q = q + t
        r = r - t * g
    return q


def _monomial_content(f: Polynomial) -> tuple[int, ...]:
    exps = [e for e, _ in f.items()]
    return tuple(min(col) for col in zip(*exps))


def certify_irreducible(f: Polynomial, seed: int = 0, tries: int = 300) -> bool:
    """True when some line x_i = a_i t + b_i keeps the total degree and gives
    an irreducible univariate image (which forces f to be irreducible)."""
    ring = f.ring
    p = ring.p
    D = f.degree()
    if D <= 1:
        return D == 1
    rng = random.Random(seed)
    n = ring.nvars
    exps = [(e, c) for e, c in f.items()]
    for _ in range(tries):
        a = [rng.randrange(p) for _ in range(n)]
        b = [rng.randrange(p) for _ in range(n)]
        img: list[int] = [0]
        lines = [[b[i], a[i]] for i in range(n)]
        powers: dict[tuple[int, int], list[int]] = {}
        for e, c in exps:
            term = [c]
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        acc = [1]
                        for _ in range(k):
                            acc = _mul(acc, _trim(list(lines[i])), p)
                        powers[key] = acc
                    term = _mul(term, powers[key], p)
            img = [((img[j] if j < len(img) else 0) + (term[j] if j < len(term) else 0)) % p
                   for j in range(max(len(img), len(term)))]
        img = _trim(img)
        if len(img) - 1 != D:
            continue
        facs = factor_coefficients(img, p, seed)
        if len(facs) == 1 and facs[0][1] == 1:
            return True
    return False


def _linear_factor(f: Polynomial) -> Polynomial | None:
    """A linear factor of f by trial division (only for small rings)."""
    ring = f.ring
    p = ring.p
    vs = _variables_of(f)
    if p ** (len(vs) + 1) > 4096:
        return None
    for coeffs in itertools.product(range(p), repeat=len(vs) + 1):
        lin = [c for c in coeffs[:-1]]
        if not any(lin):
            continue
        first = next(i for i, c in enumerate(lin) if c)
        if lin[first] != 1:
            continue
        g = ring.constant(coeffs[-1])
        for i, c in zip(vs, lin):
            if c:
                g = g + ring.var(i).scale(c)
        if g.degree() < f.degree() and exact_divide(f, g) is not None:
            return g
    return None


def factor_polynomial(f: Polynomial, seed: int = 0) -> tuple[list[tuple[Polynomial, int]], bool]:
    """Factors with multiplicities and whether every factor is certified irreducible."""
    ring = f.ring
    if f.degree() <= 0:
        return [], True
    out: list[tuple[Polynomial, int]] = []
    cont = _monomial_content(f)
    if any(cont):
        for i, k in enumerate(cont):
            if k:
                out.append((ring.var(i), k))
        f = exact_divide(f, ring.monomial(cont))
    if f.degree() <= 0:
        return out, True
    vs = _variables_of(f)
    if len(vs) == 1:
        return out + factor_univariate(f, seed), True
    pending = [f.monic()]
    certified = True
    while pending:
        g = pending.pop()
        if g.degree() == 1 or certify_irreducible(g, seed):
            out.append((g, 1))
            continue
        h = _linear_factor(g)
        if h is not None:
            pending.extend([h.monic(), exact_divide(g, h).monic()])
            continue
        out.append((g, 1))
        certified = False
    merged: dict[frozenset, list] = {}
    for g, k in out:
        g = g.monic()
        key = frozenset(g.terms.items())
        if key in merged:
            merged[key][1] += k
        else:
            merged[key] = [g, k]
    return [(g, k) for g, k in merged.values()], certified


# ---------------------------------------------------------------------------
# minimal primes


@dataclass
class ComponentReport:
    primes: list[Ideal]
    certified: list[bool]
    complete: bool = True

    @property
    def all_certified(self) -> bool:
        return self.complete and all(self.certified)

    def __iter__(self):
        return iter(zip(self.primes, self.certified))

    def __len__(self):
        return len(self.primes)


def _linear_substitution(gb: list[Polynomial]) -> tuple[Polynomial, int, Polynomial] | None:
    """(g, x, h): g in gb is c*x - c*h with x absent from h."""
    for g in sorted(gb, key=lambda g: (len(g), g.degree())):
        for i in _variables_of(g):
            lin = [(e, c) for e, c in g.items() if e[i]]
            if len(lin) == 1 and lin[0][0][i] == 1 and sum(lin[0][0]) == 1:
                c = lin[0][1]
                rest = g - g.ring.var(i).scale(c)
                h = rest.scale(-pow(c, -1, g.ring.p) % g.ring.p)
                return g, i, h
    return None


def _substitute_var(f: Polynomial, i: int, h: Polynomial) -> Polynomial:
    ring = f.ring
    out = ring.zero()
    powers = {0: ring.one()}
    for e, c in f.items():
        k = e[i]
        if k not in powers:
            powers[k] = h ** k
        e2 = list(e)
        e2[i] = 0
        out = out + ring.monomial(tuple(e2)).scale(c) * powers[k]
    return out


def _standard_monomials(ring: PolyRing, leads: list[tuple[int, ...]], cap: int = 20000) -> list[tuple[int, ...]]:
    n = ring.nvars

    def standard(e):
        return not any(all(a <= b for a, b in zip(l, e)) for l in leads)

    seen = {tuple([0] * n)}
    frontier = [tuple([0] * n)]
    out = []
    while frontier:
        e = frontier.pop()
        if not standard(e):
            continue
        out.append(e)
        if len(out) > cap:
            raise ResourceLimitError("quotient too large for the zero-dimensional path")
        for i in range(n):
            e2 = list(e)
            e2[i] += 1
            e2 = tuple(e2)
            if e2 not in seen:
                seen.add(e2)
                frontier.append(e2)
    return out


def _min_poly(r: Polynomial, K: Ideal, basis_size: int) -> list[int]:
    """Minimal polynomial of r in S/K (zero-dimensional) by linear algebra."""
    ring = K.ring
    p = ring.p
    rows: list[tuple[dict[int, int], list[int]]] = []  # reduced vector, combination
    pivots: dict[int, int] = {}
    cur = ring.one()
    for k in range(basis_size + 1):
        v = dict(K.reduce(cur).terms)
        combo = [0] * (k + 1)
        combo[k] = 1
        for piv, idx in sorted(pivots.items(), reverse=True):
            if piv in v:
                pv, pc = rows[idx]
                f = v[piv]
                for key, c in pv.items():
                    nv = (v.get(key, 0) - f * c) % p
                    if nv:
                        v[key] = nv
                    else:
                        v.pop(key, None)
                for j, c in enumerate(pc):
                    combo[j] = (combo[j] - f * c) % p
        if not v:
            return _monic(_trim(combo), p)
        piv = max(v)
        inv = pow(v[piv], -1, p)
        v = {key: c * inv % p for key, c in v.items()}
        combo = [c * inv % p for c in combo]
        pivots[piv] = len(rows)
        rows.append((v, combo))
        cur = K.reduce(cur * r)
    raise ResourceLimitError("minimal polynomial search overran the basis size")


def _eval_univariate(a: Sequence[int], r: Polynomial) -> Polynomial:
    ring = r.ring
    out = ring.zero()
    for c in reversed(a):
        out = out * r + ring.constant(c)
    return out


class _Decomposer:
    def __init__(self, seed: int, budget: int):
        self.rng = random.Random(seed)
        self.seed = seed
        self.budget = budget
        self.complete = True

    def spend(self) -> bool:
        self.budget -= 1
        if self.budget < 0:
            self.complete = False
            return False
        return True

    def run(self, K: Ideal) -> list[tuple[Ideal, bool]]:
        if K.is_unit():
            return []
        if not self.spend():
            return [(K, False)]
        ring = K.ring
        gb = K.groebner_basis()
        if not gb:
            return [(K, True)]
        lin = _linear_substitution(gb)
        if lin is not None:
            g, i, h = lin
            rest = [_substitute_var(f, i, h) for f in gb if f is not g]
            rest = [f for f in rest if f]
            sub = self.run(Ideal(ring, rest)) if rest else [(Ideal(ring, []), True)]
            return [(Ideal(ring, list(P.gens) + [g]), c) for P, c in sub]
        # split along factors of basis elements
        uncertain = False
        for f in sorted(gb, key=lambda f: (len(f), f.degree())):
            facs, cert = factor_polynomial(f, self.seed)
            uncertain = uncertain or not cert
            if len(facs) > 1 or (facs and facs[0][1] > 1):
                parts = []
                for q, _ in facs:
                    parts.extend(self.run(K + Ideal(ring, [q])))
                return parts
        if len(gb) == 1:
            return [(K, not uncertain)]
        # components inside coordinate hyperplanes
        for i in range(ring.nvars):
            x = ring.var(i)
            if x in K:
                continue
            Ks = K.saturate(x)
            if Ks != K:
                return self.run(K + Ideal(ring, [x])) + self.run(Ks)
        if K.dimension() == 0:
            return self.zero_dimensional(K)
        return [(K, False)]

    def zero_dimensional(self, K: Ideal) -> list[tuple[Ideal, bool]]:
        ring = K.ring
        p = ring.p
        extra = []
        leads = [ring.exps_of(g.lead_key()) for g in K.groebner_basis()]
        size = len(_standard_monomials(ring, leads))
        for i in range(ring.nvars):
            m = _min_poly(ring.var(i), K, size)
            sf = [1]
            for q, _ in factor_coefficients(m, p, self.seed):
                sf = _mul(sf, q, p)
            extra.append(_eval_univariate(sf, ring.var(i)))
        Kr = K + Ideal(ring, extra)
        return self._split_radical_zero_dim(Kr, 0)

    def _split_radical_zero_dim(self, K: Ideal, depth: int) -> list[tuple[Ideal, bool]]:
        ring = K.ring
        p = ring.p
        if K.is_unit():
            return []
        leads = [ring.exps_of(g.lead_key()) for g in K.groebner_basis()]
        basis = _standard_monomials(ring, leads)
        size = len(basis)
        for attempt in range(40):
            if attempt < ring.nvars:
                r = ring.var(attempt)
            else:
                r = ring.zero()
                for e in basis:
                    c = self.rng.randrange(p)
                    if c:
                        r = r + ring.monomial(e).scale(c)
            m = _min_poly(r, K, size)
            facs = factor_coefficients(m, p, self.seed)
            if len(facs) > 1:
                out = []
                for q, _ in facs:
                    out.extend(self._split_radical_zero_dim(K + Ideal(ring, [_eval_univariate(q, r)]), depth + 1))
                return out
            if len(m) - 1 == size:
                return [(K, True)]
        return [(K, False)]


def _minimalize(parts: list[tuple[Ideal, bool]]) -> list[tuple[Ideal, bool]]:
    uniq: list[tuple[Ideal, bool]] = []
    for P, c in parts:
        P = Ideal(P.ring, P.groebner_basis())
        for j, (Q, d) in enumerate(uniq):
            if Q == P:
                uniq[j] = (Q, c and d)
                break
        else:
            uniq.append((P, c))
    out = []
    for i, (P, c) in enumerate(uniq):
        if any(j != i and P.contains(Q) and not Q.contains(P) for j, (Q, _) in enumerate(uniq)):
            continue
        out.append((P, c))
    out.sort(key=lambda t: t[0].fingerprint())
    return out


def minimal_primes(I: Ideal, seed: int = 0, budget: int = DECOMPOSE_BUDGET) -> ComponentReport:
    """Minimal primes of I, each flagged as certified prime or heuristic leaf."""
    if I.is_unit():
        raise ValueError("the unit ideal has no minimal primes")
    dec = _Decomposer(seed, budget)
    parts = _minimalize(dec.run(I))
    return ComponentReport([P for P, _ in parts], [c for _, c in parts], dec.complete)


# ---------------------------------------------------------------------------
# compatible ideals


def is_compatible(u: Polynomial, P: Ideal, e: int = 1) -> bool:
    """u P inside P^{[p^e]}."""
    Pq = P.frobenius(e)
    return all(u * g in Pq for g in P.gens)


@dataclass
class CompatibleIdeals:
    ideals: list[Ideal]
    certified: list[bool]
    complete: bool = True

    def __iter__(self):
        return iter(self.ideals)

    def __len__(self):
        return len(self.ideals)


def _seed_element(u: Polynomial, P: Ideal, e: int, seed: int) -> Polynomial:
    """An element whose ascent over S/P gives the smallest nonzero compatible ideal."""
    ring = P.ring
    if P.is_zero():
        return u
    h = int(P.codim())
    c0 = next((m for m in jacobian_minors(P, h, 80, random.Random(seed)) if m not in P), None)
    if c0 is None:
        raise ResourceLimitError("no Jacobian element outside the prime")
    Pq = P.frobenius(e)
    C2 = (Pq + Ideal(ring, [u])).quotient(Pq.quotient(P))
    cands = sorted((g for g in C2.groebner_basis() if g not in P), key=lambda g: (g.degree(), len(g)))
    if not cands:
        raise ResourceLimitError("the multiplier vanishes on the prime")
    return c0 * cands[0]


def _smallest_compatible(u: Polynomial, P: Ideal, e: int, seed: int) -> Ideal:
    ring = P.ring
    steps = [[u.terms]] + [[ONE]] * (e - 1)
    phi = CartierMap(P, steps)
    c = _seed_element(u, P, e, seed)
    J = ascend_with_map(phi, Ideal(ring, [c] + list(P.gens)))
    # guard against a seed element that is not yet small enough
    for _ in range(3):
        c = c * c
        J2 = ascend_with_map(phi, Ideal(ring, [c] + list(P.gens)))
        if J2 == J:
            break
        J = J2
    return J


def compatible_ideals(u: Polynomial, e: int = 1, seed: int = 0) -> CompatibleIdeals:
    """Prime ideals P with u P inside P^{[p^e]} and u not in P^{[p^e]}, other than (0) and (1)."""
    ring = u.ring
    if not u:
        raise ValueError("u must be nonzero")
    found: list[tuple[Ideal, bool]] = []
    complete = True

    def known(Q):
        return any(Q == R for R, _ in found)

    def admit(Q, cert) -> bool:
        if Q.is_zero() or Q.is_unit() or known(Q):
            return False
        if u in Q.frobenius(e) or not is_compatible(u, Q, e):
            return False
        found.append((Q, cert))
        return True

    queue = [Ideal(ring, [])]
    while queue:
        P = queue.pop(0)
        tau = _smallest_compatible(u, P, e, seed)
        if tau.is_unit():
            continue
        rep = minimal_primes(tau, seed)
        complete = complete and rep.complete
        for Q, cert in rep:
            if admit(Q, cert):
                queue.append(Q)
    # closure under minimal primes of sums
    changed = True
    while changed:
        changed = False
        for (P, _), (Q, _) in itertools.combinations(list(found), 2):
            K = P + Q
            if K.is_unit():
                continue
            rep = minimal_primes(K, seed)
            complete = complete and rep.complete
            for R, cert in rep:
                if admit(R, cert):
                    changed = True
    found.sort(key=lambda t: t[0].fingerprint())
    for Q, _ in found:
        assert is_compatible(u, Q, e)
    return CompatibleIdeals([Q for Q, _ in found], [c for _, c in found], complete)


def quotient_by(ideals: Sequence[Ideal], omega: Ideal) -> list[Ideal]:
    """J : omega for each J, duplicates (as ideals) removed, first occurrence kept."""
    out: list[Ideal] = []
    for J in ideals:
        K = J.quotient(omega)
        if not any(K == L for L in out):
            out.append(K)
    return out


__all__ = [
    "factor_univariate", "factor_polynomial", "certify_irreducible", "exact_divide", "minimal_primes",
    "ComponentReport", "compatible_ideals", "CompatibleIdeals", "is_compatible", "quotient_by",
]

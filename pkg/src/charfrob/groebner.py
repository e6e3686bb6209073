"""Buchberger's algorithm for ideals and submodules of free modules over F_p[x].

Ideals and module elements share one representation: a dict from packed key
to coefficient, where the bits above the monomial fields hold a *position
code*.  Component ``i`` of a vector in ``S^k`` has code ``k - 1 - i``, so the
module order is position-over-term with component 0 the most significant.
An ideal is the rank-one case (code 0).
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .errors import ContainmentError, ResourceLimitError, RingMismatchError
from .polyring import PolyRing, Polynomial, format_terms

DEFAULT_BUDGET = 10**7


class StepCounter:
    """Shared reduction budget; raises once ``limit`` reduction steps are spent."""

    def __init__(self, limit: int = DEFAULT_BUDGET):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1):
        self.used += n
        if self.used > self.limit:
            raise ResourceLimitError(f"reduction budget of {self.limit} steps exhausted")


_budget = StepCounter()


def set_budget(limit: int) -> StepCounter:
    """Install a fresh global reduction budget (used by the CLI ``--budget`` flag)."""
    global _budget
    _budget = StepCounter(limit)
    return _budget


def get_budget() -> StepCounter:
    return _budget


class GBasis:
    """A Gröbner basis under construction or finished, plus its reducer."""

    def __init__(self, ring: PolyRing, is_ideal: bool = True):
        self.ring = ring
        self.p = ring.p
        self.is_ideal = is_ideal
        self.shift = ring.mono_bits
        self.polys: list[dict[int, int]] = []
        self.leads: list[int] = []
        self.lead_e: list[int] = []
        self.sugar: list[int] = []
        self.neg_tails: list[list[tuple[int, int]]] = []
        self.active: list[bool] = []
        self.by_pos: dict[int, list[int]] = {}
        self._hit: dict[int, int] = {}
        self._miss: dict[int, int] = {}

    # -- bookkeeping ------------------------------------------------------
    def add(self, f: dict[int, int], sugar: int) -> int:
        lead = max(f)
        p = self.p
        idx = len(self.polys)
        self.polys.append(f)
        self.leads.append(lead)
        self.lead_e.append(self.ring.ekey(lead))
        self.sugar.append(sugar)
        self.neg_tails.append([(k, p - c) for k, c in f.items() if k != lead])
        self.active.append(True)
        self.by_pos.setdefault(lead >> self.shift, []).append(idx)
        return idx

    def deactivate(self, idx: int):
        self.active[idx] = False

    def find_divisor(self, key: int) -> int:
        """Index of a basis element whose lead divides ``key``, or -1."""
        hit = self._hit.get(key)
        if hit is not None:
            return hit
        cands = self.by_pos.get(key >> self.shift)
        if not cands:
            return -1
        start = self._miss.get(key, 0)
        if start >= len(cands):
            return -1
        e = self.ring.ekey(key)
        g = self.ring.guard
        eg = e | g
        lead_e = self.lead_e
        for t in range(start, len(cands)):
            j = cands[t]
            if (eg - lead_e[j]) & g == g:
                self._hit[key] = j
                return j
        self._miss[key] = len(cands)
        return -1

    # -- reduction --------------------------------------------------------
    def reduce(self, f: dict[int, int], full: bool = True, counter: StepCounter | None = None) -> dict[int, int]:
        """Normal form of ``f`` (new dict).  ``full=False`` stops at the first irreducible lead."""
        import heapq

        counter = counter or _budget
        p = self.p
        r = dict(f)
        heap = [-k for k in r]
        heapq.heapify(heap)
        out: dict[int, int] = {}
        leads, tails = self.leads, self.neg_tails
        pop, push = heapq.heappop, heapq.heappush
        steps = 0
        while heap:
            k = -pop(heap)
            c = r.pop(k, None)
            if c is None:
                continue
            j = self.find_divisor(k)
            if j < 0:
                out[k] = c
                if not full:
                    for kk in r:
                        out[kk] = r[kk]
                    break
                continue
            steps += 1
            m = k - leads[j]
            get = r.get
            for gk, gc in tails[j]:
                kk = gk + m
                v = get(kk)
                if v is None:
                    r[kk] = c * gc % p
                    push(heap, -kk)
                else:
                    v = (v + c * gc) % p
                    if v:
                        r[kk] = v
                    else:
                        del r[kk]
        counter.spend(steps)
        return out

    def is_member(self, f: dict[int, int]) -> bool:
        return not self.reduce(f, full=False)

    def reduced_elements(self) -> list[dict[int, int]]:
        return [self.polys[i] for i in range(len(self.polys)) if self.active[i]]


def _monic(f: dict[int, int], p: int) -> dict[int, int]:
    lead = max(f)
    c = f[lead]
    if c == 1:
        return f
    inv = pow(c, -1, p)
    return {k: v * inv % p for k, v in f.items()}


def _spoly(B: GBasis, i: int, j: int, lcm: int) -> dict[int, int]:
    p = B.p
    fi, fj = B.polys[i], B.polys[j]
    mi = lcm - B.leads[i]
    mj = lcm - B.leads[j]
    out: dict[int, int] = {}
    for k, c in fi.items():
        out[k + mi] = c
    get = out.get
    for k, c in fj.items():
        kk = k + mj
        v = (get(kk, 0) - c) % p
        if v:
            out[kk] = v
        else:
            out.pop(kk, None)
    return out


def _key_degree(ring: PolyRing, key: int) -> int:
    return ring.degree_of(key & ring.mono_mask)


def _poly_degree(ring: PolyRing, f: dict[int, int]) -> int:
    return max(_key_degree(ring, k) for k in f)


def buchberger(ring: PolyRing, gens: Iterable[dict[int, int]], is_ideal: bool = True,
               counter: StepCounter | None = None) -> GBasis:
    """Reduced Gröbner basis of the span of ``gens`` (normal selection with sugar,
    Buchberger's product and chain criteria via the Gebauer–Möller update)."""
    counter = counter or _budget
    p = ring.p
    shift = ring.mono_bits
    mono_mask = ring.mono_mask
    work = GBasis(ring, is_ideal)
    pairs: list[tuple[int, int, int, int]] = []  # (sugar, lcm, i, j)

    def pair_lcm(i, j):
        li, lj = work.leads[i], work.leads[j]
        pos = li >> shift
        e = ring.ekey_lcm(work.lead_e[i], work.lead_e[j])
        return (pos << shift) | ring.key_from_ekey(e)

    def pair_sugar(i, j, lcm):
        dl = _key_degree(ring, lcm)
        return max(work.sugar[i] + dl - _key_degree(ring, work.leads[i]),
                   work.sugar[j] + dl - _key_degree(ring, work.leads[j]))

    def disjoint(i, j):
        return is_ideal and ring.ekey_lcm(work.lead_e[i], work.lead_e[j]) == work.lead_e[i] + work.lead_e[j]

    def update(h):
        nonlocal pairs
        pos = work.leads[h] >> shift
        eh = work.lead_e[h]
        cands = [g for g in work.by_pos.get(pos, []) if g != h and work.active[g]]
        C = [(g, ring.ekey_lcm(eh, work.lead_e[g])) for g in cands]
        D = []
        for idx, (g1, l1) in enumerate(C):
            if disjoint(h, g1):
                D.append((g1, l1))
                continue
            dominated = False
            for idx2, (g2, l2) in enumerate(C):
                if idx2 != idx and l2 != l1 and ring.ekey_divides(l2, l1):
                    dominated = True
                    break
                if idx2 < idx and l2 == l1:
                    dominated = True
                    break
            if not dominated:
                for g2, l2 in D:
                    if ring.ekey_divides(l2, l1):
                        dominated = True
                        break
            if not dominated:
                D.append((g1, l1))
        E = [(g, l) for g, l in D if not disjoint(h, g)]
        kept = []
        for s, lcm, i, j in pairs:
            if (lcm >> shift) == pos:
                el = ring.ekey(lcm)
                if (ring.ekey_divides(eh, el)
                        and ring.ekey_lcm(work.lead_e[i], eh) != el
                        and ring.ekey_lcm(work.lead_e[j], eh) != el):
                    continue
            kept.append((s, lcm, i, j))
        for g, l in E:
            lcm = (pos << shift) | ring.key_from_ekey(l)
            kept.append((pair_sugar(g, h, lcm), lcm, g, h))
        pairs = kept
        for g in cands:
            if ring.ekey_divides(eh, work.lead_e[g]):
                work.deactivate(g)

    def insert(f, sugar):
        f = _monic(f, p)
        h = work.add(f, sugar)
        update(h)

    gens = [dict(g) for g in gens if g]
    gens.sort(key=lambda g: max(g))
    for g in gens:
        s = _poly_degree(ring, g)
        r = work.reduce(g, counter=counter)
        if r:
            insert(r, s)
    while pairs:
        best = min(range(len(pairs)), key=lambda t: (pairs[t][0], pairs[t][1]))
        s, lcm, i, j = pairs[best]
        pairs[best] = pairs[-1]
        pairs.pop()
        sp = _spoly(work, i, j, lcm)
        counter.spend(1)
        if not sp:
            continue
        r = work.reduce(sp, counter=counter)
        if r:
            insert(r, s)
    return _interreduce(ring, work, is_ideal, counter)


def _interreduce(ring: PolyRing, work: GBasis, is_ideal: bool, counter: StepCounter) -> GBasis:
    idxs = [i for i in range(len(work.polys)) if work.active[i]]
    # minimal basis: drop elements whose lead is divisible by another active lead
    minimal = []
    for i in sorted(idxs, key=lambda t: work.leads[t]):
        pos = work.leads[i] >> ring.mono_bits
        if any((work.leads[j] >> ring.mono_bits) == pos and ring.ekey_divides(work.lead_e[j], work.lead_e[i])
               for j in minimal):
            continue
        minimal.append(i)
    final = GBasis(ring, is_ideal)
    for i in minimal:
        others = GBasis(ring, is_ideal)
        for j in minimal:
            if j != i:
                others.add(work.polys[j], work.sugar[j])
        f = work.polys[i]
        lead = work.leads[i]
        tail = {k: c for k, c in f.items() if k != lead}
        red = others.reduce(tail, counter=counter) if tail else {}
        red[lead] = f[lead]
        final.add(_monic(red, ring.p), work.sugar[i])
    return final


# ---------------------------------------------------------------------------
# vector helpers


def vector_from_list(ring: PolyRing, comps: Sequence[Polynomial], rank: int | None = None) -> dict[int, int]:
    k = len(comps) if rank is None else rank
    shift = ring.mono_bits
    out: dict[int, int] = {}
    for i, f in enumerate(comps):
        if isinstance(f, int):
            f = ring.constant(f)
        if f.ring != ring:
            raise RingMismatchError(f"{f.ring} vs {ring}")
        code = (k - 1 - i) << shift
        for key, c in f.terms.items():
            out[code | key] = c
    return out


def vector_to_list(ring: PolyRing, vec: dict[int, int], rank: int) -> list[Polynomial]:
    shift = ring.mono_bits
    mask = ring.mono_mask
    comps: list[dict[int, int]] = [{} for _ in range(rank)]
    for key, c in vec.items():
        code = key >> shift
        comps[rank - 1 - code][key & mask] = c
    return [Polynomial(ring, t, _trusted=True) for t in comps]


def shift_vector(ring: PolyRing, vec: dict[int, int], by: int) -> dict[int, int]:
    if not by:
        return dict(vec)
    off = by << ring.mono_bits
    return {k + off: c for k, c in vec.items()}


def scale_vector(ring: PolyRing, vec: dict[int, int], f: Polynomial) -> dict[int, int]:
    """f * vec for a polynomial f."""
    p = ring.p
    acc: dict[int, int] = {}
    get = acc.get
    for kf, cf in f.terms.items():
        for kv, cv in vec.items():
            k = kv + kf
            acc[k] = get(k, 0) + cf * cv
    return {k: c % p for k, c in acc.items() if c % p}


def add_vectors(p: int, a: dict[int, int], b: dict[int, int], cb: int = 1) -> dict[int, int]:
    out = dict(a)
    for k, c in b.items():
        v = (out.get(k, 0) + cb * c) % p
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _elimination_gb(ring: PolyRing, vectors: list[dict[int, int]], bottom: int,
                    counter: StepCounter | None = None) -> tuple[GBasis, list[dict[int, int]]]:
    """GB of vectors in S^(top+bottom); returns it and the elements living in the bottom block."""
    gb = buchberger(ring, vectors, is_ideal=False, counter=counter)
    shift = ring.mono_bits
    low = [f for f in gb.polys if (max(f) >> shift) < bottom]
    return gb, low


# ---------------------------------------------------------------------------
# ideals


class Ideal:
    """An ideal of a polynomial ring; equality is mathematical (via reduced GBs)."""

    def __init__(self, ring: PolyRing, gens: Iterable[Polynomial | int | str] = ()):
        self.ring = ring
        out = []
        for g in gens:
            g = ring(g)
            if g:
                out.append(g)
        self.gens: tuple[Polynomial, ...] = tuple(out)
        self._gb: GBasis | None = None

    @classmethod
    def from_gb(cls, ring: PolyRing, gb: GBasis) -> "Ideal":
        I = cls(ring, [Polynomial(ring, f, _trusted=True) for f in gb.polys])
        I._gb = gb
        return I

    # -- Gröbner data -----------------------------------------------------
    def gb(self) -> GBasis:
        if self._gb is None:
            self._gb = buchberger(self.ring, [g.terms for g in self.gens])
        return self._gb

    def groebner_basis(self) -> list[Polynomial]:
        """Reduced GB, monic, sorted by increasing leading monomial."""
        gb = self.gb()
        return [Polynomial(self.ring, f, _trusted=True) for f in sorted(gb.polys, key=max)]

    def reduce(self, f: Polynomial) -> Polynomial:
        f = self.ring(f)
        return Polynomial(self.ring, self.gb().reduce(f.terms), _trusted=True)

    normal_form = reduce

    def __contains__(self, f) -> bool:
        f = self.ring(f)
        if not f:
            return True
        return self.gb().is_member(f.terms)

    def contains(self, other: "Ideal") -> bool:
        self._check(other)
        return all(g in self for g in other.gens)

    def issubset(self, other: "Ideal") -> bool:
        return other.contains(self)

    def __le__(self, other):
        return self.issubset(other)

    def __ge__(self, other):
        return self.contains(other)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        if self.ring != other.ring:
            return False
        return self.contains(other) and other.contains(self)

    def __hash__(self):
        return hash((self.ring, tuple(frozenset(f.items()) for f in sorted(self.gb().polys, key=max))))

    def fingerprint(self) -> tuple:
        """Canonical sort key from the reduced GB (deterministic ordering of ideal lists)."""
        gb = sorted(self.gb().polys, key=max)
        return tuple((len(gb),) + tuple(tuple(sorted(f.items(), reverse=True)) for f in gb))

    def is_unit(self) -> bool:
        return any(len(f) == 1 and 0 in f for f in self.gb().polys)

    def is_zero(self) -> bool:
        return not self.gens

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def _check(self, other: "Ideal"):
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (Polynomial, int, str)):
            other = Ideal(self.ring, [other])
        self._check(other)
        return Ideal(self.ring, self.gens + other.gens)

    def __mul__(self, other):
        if isinstance(other, (Polynomial, int, str)):
            f = self.ring(other)
            return Ideal(self.ring, [f * g for g in self.gens])
        self._check(other)
        a = self.trim().gens
        b = other.trim().gens
        return Ideal(self.ring, [f * g for f in a for g in b])

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Ideal(self.ring, [1])
        base = self
        while n:
            if n & 1:
                result = (result * base).trim()
            n >>= 1
            if n:
                base = (base * base).trim()
        return result

    def trim(self) -> "Ideal":
        """A small generating set: minimal generators for homogeneous ideals, else the reduced GB."""
        if not self.gens:
            return self
        if self.is_homogeneous():
            return Ideal.from_gens_keep_gb(self, minimal_generators(self))
        gb = self.groebner_basis()
        J = Ideal(self.ring, gb)
        J._gb = self._gb
        return J

    @staticmethod
    def from_gens_keep_gb(I: "Ideal", gens: list[Polynomial]) -> "Ideal":
        J = Ideal(I.ring, gens)
        J._gb = I._gb
        return J

    def mingens(self) -> list[Polynomial]:
        return list(self.trim().gens)

    # -- derived operations ----------------------------------------------
    def intersect(self, *others: "Ideal") -> "Ideal":
        result = self
        for other in others:
            result = intersect_two(result, other)
        return result

    def quotient(self, other) -> "Ideal":
        """The colon ideal (self : other)."""
        if isinstance(other, (Polynomial, int, str)):
            other = Ideal(self.ring, [other])
        return colon(self, other)

    __truediv__ = quotient

    def saturate(self, f) -> "Ideal":
        return saturate(self, f)

    def eliminate(self, variables) -> "Ideal":
        return eliminate(self, variables)

    def dimension(self) -> int | float:
        return dimension(self)

    def codim(self) -> int | float:
        d = dimension(self)
        return self.ring.nvars - d if d != float("-inf") else float("inf")

    def frobenius(self, e: int = 1) -> "Ideal":
        """Bracket power I^{[p^e]}; the GB is transported (Frobenius is flat)."""
        J = Ideal(self.ring, [g.frobenius_power(e) for g in self.gens])
        if self._gb is not None:
            q = self.ring.p ** e
            gb = GBasis(self.ring)
            for f, s in zip(self._gb.polys, self._gb.sugar):
                gb.add({k * q: c for k, c in f.items()}, s * q)
            J._gb = gb
        return J

    def map_to(self, target: PolyRing, var_map=None) -> "Ideal":
        return Ideal(target, [g.change_ring(target, var_map) for g in self.gens])

    def __repr__(self):
        return f"Ideal({self.ring!r}, {[str(g) for g in self.gens]})"

    def __str__(self):
        return format_ideal(self)


def format_ideal(I: Ideal, reduced: bool = True) -> str:
    gens = I.groebner_basis() if reduced else list(I.gens)
    if not gens:
        return "ideal()"
    if len(gens) == 1:
        g = gens[0]
        return f"ideal({g})"
    return "ideal(" + ", ".join(str(g) for g in gens) + ")"


def minimal_generators(I: Ideal) -> list[Polynomial]:
    """Minimal homogeneous generators (degree by degree, keep what is not already generated)."""
    gens = sorted({g.monic() for g in I.gens if g}, key=lambda g: (g.degree(), g.lead_key()))
    kept: list[Polynomial] = []
    current = GBasis(I.ring)
    current_gb: GBasis | None = None
    for g in gens:
        if current_gb is not None and current_gb.is_member(g.terms):
            continue
        # reduce g against already-kept generators to keep output small
        kept.append(g)
        current_gb = buchberger(I.ring, [k.terms for k in kept])
    del current
    return kept


def intersect_two(I: Ideal, J: Ideal) -> Ideal:
    I._check(J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring, [])
    if I.is_unit():
        return J
    if J.is_unit():
        return I
    vecs = []
    for f in I.trim().gens:
        vecs.append(vector_from_list(ring, [f, f]))
    for g in J.trim().gens:
        vecs.append(vector_from_list(ring, [g, ring.zero()]))
    _, low = _elimination_gb(ring, vecs, 1)
    return Ideal(ring, [Polynomial(ring, f, _trusted=True) for f in low])


def colon(I: Ideal, J: Ideal) -> Ideal:
    """(I : J) via one module elimination in S^(m+1), m = #gens(J)."""
    I._check(J)
    ring = I.ring
    Jg = [g for g in J.trim().gens]
    if not Jg:
        return Ideal(ring, [1])
    if I.is_zero():
        return Ideal(ring, [])
    Ig = I.groebner_basis()
    m = len(Jg)
    K = m + 1
    vecs = [vector_from_list(ring, Jg + [ring.one()], K)]
    zero = ring.zero()
    for j in range(m):
        for f in Ig:
            comps = [zero] * K
            comps[j] = f
            vecs.append(vector_from_list(ring, comps, K))
    _, low = _elimination_gb(ring, vecs, 1)
    return Ideal(ring, [Polynomial(ring, f, _trusted=True) for f in low])


def saturate(I: Ideal, f) -> Ideal:
    """(I : f^infinity), by iterated colons."""
    ring = I.ring
    f = ring(f)
    if not f:
        raise ZeroDivisionError("saturation by zero")
    current = I
    while True:
        nxt = colon(current, Ideal(ring, [f]))
        if nxt.issubset(current):
            return current
        current = nxt


def elimination_ring(ring: PolyRing, drop: Sequence[int]) -> tuple[PolyRing, list[int], list[int]]:
    """Ring with the ``drop`` variables first under a block order; returns it and index maps."""
    keep = [i for i in range(ring.nvars) if i not in set(drop)]
    names = [ring.vars[i] for i in drop] + [ring.vars[i] for i in keep]
    R2 = PolyRing(ring.p, names, order=("block", len(drop)) if keep else "lex")
    fwd = [0] * ring.nvars
    for new, old in enumerate(list(drop) + keep):
        fwd[old] = new
    back = [0] * len(keep)
    return R2, fwd, keep


def eliminate(I: Ideal, variables) -> Ideal:
    ring = I.ring
    drop = []
    for v in ([variables] if isinstance(variables, (str, int)) else variables):
        drop.append(v if isinstance(v, int) else ring.index[v])
    if not drop:
        return I
    R2, fwd, keep = elimination_ring(ring, drop)
    J = I.map_to(R2, fwd)
    nd = len(drop)
    out = []
    for g in J.groebner_basis():
        if all(not any(e[:nd]) for e, _ in g.items()):
            back = [0] * R2.nvars
            for new in range(R2.nvars):
                back[new] = new - nd if new >= nd else 0
            out.append(g.change_ring(ring, [keep[b] if i >= nd else 0 for i, b in enumerate(back)]))
    return Ideal(ring, out)


def kernel_of_ring_map(source: PolyRing, images: Sequence[Polynomial]) -> Ideal:
    """Kernel of source -> target sending the i-th variable to images[i]."""
    if len(images) != source.nvars:
        raise ValueError("need one image per source variable")
    target = images[0].ring
    if source.p != target.p:
        raise RingMismatchError("characteristics differ")
    tn = [f"_t{i}" for i in range(target.nvars)]
    sn = [f"_s{i}" for i in range(source.nvars)]
    big = PolyRing(source.p, tn + sn, order=("block", target.nvars))
    tmap = list(range(target.nvars))
    gens = []
    for i, img in enumerate(images):
        gens.append(big.var(target.nvars + i) - img.change_ring(big, tmap))
    J = Ideal(big, gens)
    nt = target.nvars
    out = []
    smap = [0] * big.nvars
    for i in range(source.nvars):
        smap[nt + i] = i
    for g in J.groebner_basis():
        if all(not any(e[:nt]) for e, _ in g.items()):
            out.append(g.change_ring(source, smap))
    return Ideal(source, out)


def dimension(I: Ideal) -> int | float:
    """Krull dimension of S/I from a maximal independent set of the lead-term ideal."""
    ring = I.ring
    n = ring.nvars
    if I.is_unit():
        return float("-inf")
    supports = []
    for f in I.gb().polys:
        exps = ring.exps_of(max(f))
        supports.append(frozenset(i for i, a in enumerate(exps) if a))
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            s = set(subset)
            if all(not sup <= s for sup in supports):
                return size
    return 0


def member(f: Polynomial, I: Ideal) -> bool:
    return f in I


def equal_ideals(I: Ideal, J: Ideal) -> bool:
    return I == J


# ---------------------------------------------------------------------------
# submodules of free modules


class SubmoduleOfFree:
    """Submodule of S^rank generated by column vectors (lists of polynomials)."""

    def __init__(self, ring: PolyRing, rank: int, gens: Iterable[Sequence[Polynomial | int]] = ()):
        self.ring = ring
        self.rank = rank
        out = []
        for v in gens:
            v = [ring(c) for c in v]
            if len(v) != rank:
                raise ValueError(f"vector of length {len(v)} in a rank-{rank} module")
            if any(c for c in v):
                out.append(tuple(v))
        self.gens: tuple[tuple[Polynomial, ...], ...] = tuple(out)
        self._gb: GBasis | None = None

    @classmethod
    def from_vectors(cls, ring: PolyRing, rank: int, vecs: Iterable[dict[int, int]]) -> "SubmoduleOfFree":
        return cls(ring, rank, [vector_to_list(ring, v, rank) for v in vecs if v])

    @classmethod
    def from_matrix(cls, M: "Matrix") -> "SubmoduleOfFree":
        return cls(M.ring, M.nrows, M.columns())

    def vectors(self) -> list[dict[int, int]]:
        return [vector_from_list(self.ring, v, self.rank) for v in self.gens]

    def gb(self) -> GBasis:
        if self._gb is None:
            self._gb = buchberger(self.ring, self.vectors(), is_ideal=False)
        return self._gb

    def groebner_basis(self) -> list[list[Polynomial]]:
        return [vector_to_list(self.ring, f, self.rank) for f in sorted(self.gb().polys, key=max)]

    def reduce(self, v: Sequence[Polynomial]) -> list[Polynomial]:
        vec = vector_from_list(self.ring, [self.ring(c) for c in v], self.rank)
        return vector_to_list(self.ring, self.gb().reduce(vec), self.rank)

    def __contains__(self, v) -> bool:
        if len(v) != self.rank:
            raise ValueError("rank mismatch")
        vec = vector_from_list(self.ring, [self.ring(c) for c in v], self.rank)
        return not vec or self.gb().is_member(vec)

    def contains(self, other: "SubmoduleOfFree") -> bool:
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        return all(v in self for v in other.gens)

    def __eq__(self, other):
        if not isinstance(other, SubmoduleOfFree):
            return NotImplemented
        return self.ring == other.ring and self.rank == other.rank and self.contains(other) and other.contains(self)

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "SubmoduleOfFree") -> "SubmoduleOfFree":
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        return SubmoduleOfFree(self.ring, self.rank, self.gens + other.gens)

    def is_full(self) -> bool:
        """Whether the submodule is all of S^rank."""
        return all(self.gb().is_member(vector_from_list(self.ring, _unit(self.ring, self.rank, i), self.rank))
                   for i in range(self.rank))

    def trim(self) -> "SubmoduleOfFree":
        return SubmoduleOfFree(self.ring, self.rank, self.groebner_basis())

    def syzygies(self) -> "SubmoduleOfFree":
        return syzygies(self.ring, self.rank, list(self.gens))

    def matrix(self) -> "Matrix":
        return Matrix.from_columns(self.ring, self.rank, list(self.gens))

    def __repr__(self):
        return f"SubmoduleOfFree(rank={self.rank}, gens={[[str(c) for c in v] for v in self.gens]})"

    def __str__(self):
        return "image " + str(self.matrix())


def _unit(ring: PolyRing, rank: int, i: int) -> list[Polynomial]:
    return [ring.one() if j == i else ring.zero() for j in range(rank)]


def syzygies(ring: PolyRing, rank: int, columns: Sequence[Sequence[Polynomial]]) -> SubmoduleOfFree:
    """Generators of the syzygy module of ``columns`` (a submodule of S^len(columns))."""
    m = len(columns)
    if m == 0:
        return SubmoduleOfFree(ring, 0, [])
    vecs = []
    shift = ring.mono_bits
    for j, col in enumerate(columns):
        v = shift_vector(ring, vector_from_list(ring, col, rank), m)
        v[((m - 1 - j) << shift)] = 1
        vecs.append(v)
    _, low = _elimination_gb(ring, vecs, m)
    return SubmoduleOfFree.from_vectors(ring, m, low)


class Lifter:
    """Expresses vectors as combinations of fixed generators (division with cofactors)."""

    def __init__(self, ring: PolyRing, rank: int, columns: Sequence[Sequence[Polynomial]]):
        self.ring = ring
        self.rank = rank
        self.m = m = len(columns)
        shift = ring.mono_bits
        vecs = []
        for j, col in enumerate(columns):
            v = shift_vector(ring, vector_from_list(ring, col, rank), m)
            v[((m - 1 - j) << shift)] = 1
            vecs.append(v)
        self.gb = buchberger(ring, vecs, is_ideal=False) if vecs else GBasis(ring, False)

    def lift(self, v: Sequence[Polynomial]) -> list[Polynomial] | None:
        """Coefficients c with sum c_j col_j == v, or None when v is not in the span."""
        ring, m = self.ring, self.m
        vec = shift_vector(ring, vector_from_list(ring, v, self.rank), m)
        if not vec:
            return [ring.zero()] * m
        r = self.gb.reduce(vec)
        shift = ring.mono_bits
        if any((k >> shift) >= m for k in r):
            return None
        p = ring.p
        neg = {k: p - c for k, c in r.items()}
        return vector_to_list(ring, neg, m) if m else []


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """A dense matrix of polynomials, stored by rows."""

    def __init__(self, ring: PolyRing, rows: Sequence[Sequence[Polynomial | int | str]], ncols: int | None = None):
        self.ring = ring
        self.rows = [[ring(c) for c in row] for row in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def from_columns(cls, ring: PolyRing, nrows: int, cols: Sequence[Sequence[Polynomial]]) -> "Matrix":
        rows = [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]
        return cls(ring, rows, ncols=len(cols))

    def columns(self) -> list[list[Polynomial]]:
        return [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]

    def column(self, j: int) -> list[Polynomial]:
        return [self.rows[i][j] for i in range(self.nrows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, self.columns(), ncols=self.nrows)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            z = self.ring.zero()
            rows = []
            for i in range(self.nrows):
                row = []
                for j in range(other.ncols):
                    acc = z
                    for t in range(self.ncols):
                        a, b = self.rows[i][t], other.rows[t][j]
                        if a and b:
                            acc = acc + a * b
                    row.append(acc)
                rows.append(row)
            return Matrix(self.ring, rows, ncols=other.ncols)
        f = self.ring(other)
        return Matrix(self.ring, [[f * c for c in row] for row in self.rows], ncols=self.ncols)

    def apply(self, v: Sequence[Polynomial]) -> list[Polynomial]:
        z = self.ring.zero()
        out = []
        for row in self.rows:
            acc = z
            for a, b in zip(row, v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def is_zero(self) -> bool:
        return all(not c for row in self.rows for c in row)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.ring == other.ring and self.rows == other.rows

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols})"

    def __str__(self):
        if not self.nrows or not self.ncols:
            return f"0 ({self.nrows}x{self.ncols})"
        cells = [[str(c) for c in row] for row in self.rows]
        widths = [max(len(cells[i][j]) for i in range(self.nrows)) for j in range(self.ncols)]
        return "\n".join("| " + " ".join(c.ljust(w) for c, w in zip(row, widths)) + " |" for row in cells)


def minors(k: int, M: Matrix) -> Ideal:
    """Ideal of k x k minors."""
    ring = M.ring
    out = []
    for rows in itertools.combinations(range(M.nrows), k):
        for cols in itertools.combinations(range(M.ncols), k):
            out.append(determinant([[M.rows[i][j] for j in cols] for i in rows], ring))
    return Ideal(ring, out)


def determinant(rows: Sequence[Sequence[Polynomial]], ring: PolyRing) -> Polynomial:
    n = len(rows)
    if n == 0:
        return ring.one()
    if n == 1:
        return rows[0][0]
    total = ring.zero()
    for j in range(n):
        if not rows[0][j]:
            continue
        sub = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * determinant(sub, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def check_contained(I: Ideal, J: Ideal, what: str = "ideal"):
    if not J.contains(I):
        raise ContainmentError(f"{what} containment violated")


__all__ = [
    "GBasis", "Ideal", "SubmoduleOfFree", "Matrix", "Lifter", "buchberger", "colon", "saturate",
    "intersect_two", "eliminate", "kernel_of_ring_map", "dimension", "syzygies", "minors",
    "determinant", "member", "equal_ideals", "set_budget", "get_budget", "StepCounter",
    "vector_from_list", "vector_to_list", "format_ideal", "format_terms",
]

"""Free resolutions, Ext modules and maps, canonical ideals, Cohen-Macaulay
detection, Frobenius pushforwards and reflexive powers."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ContainmentError, EmbeddingError, ResourceLimitError
from .groebner import Ideal, Lifter, Matrix, SubmoduleOfFree, syzygies
from .polyring import PolyRing, Polynomial, root_bucket_terms

PUSHFORWARD_CAP = 4096
EMBED_BUDGET = 50


# ---------------------------------------------------------------------------
# presented modules


def _unit_of(f: Polynomial) -> int:
    """Nonzero constant value of f, or 0 when f is not a nonzero constant."""
    if len(f.terms) == 1 and 0 in f.terms:
        return f.terms[0]
    return 0


class PresentedModule:
    """coker(A) for a g x r matrix A over S (columns are relations on g generators)."""

    def __init__(self, ring: PolyRing, ngens: int, relations: Sequence[Sequence[Polynomial]]):
        self.ring = ring
        self.ngens = ngens
        self.relations = SubmoduleOfFree(ring, ngens, relations)

    @classmethod
    def cyclic(cls, I: Ideal) -> "PresentedModule":
        return cls(I.ring, 1, [[g] for g in I.gens])

    @classmethod
    def from_matrix(cls, A: Matrix) -> "PresentedModule":
        return cls(A.ring, A.nrows, A.columns())

    def matrix(self) -> Matrix:
        return Matrix.from_columns(self.ring, self.ngens, [list(v) for v in self.relations.gens])

    def is_zero(self) -> bool:
        return self.ngens == 0 or self.relations.is_full()

    def annihilator(self) -> Ideal:
        ring = self.ring
        result = Ideal(ring, [1])
        for j in range(self.ngens):
            result = result.intersect(vector_colon(self.relations, _unit(ring, self.ngens, j)))
        return result

    def prune(self) -> tuple["PresentedModule", "Pruning"]:
        """Eliminate generators killed by relations with a constant entry."""
        ring = self.ring
        p = ring.p
        cols = [list(v) for v in self.relations.gens]
        alive = list(range(self.ngens))
        steps: list[tuple[int, list[Polynomial], int]] = []
        while True:
            hit = None
            for ci, col in enumerate(cols):
                for r in alive:
                    a = _unit_of(col[r])
                    if a:
                        hit = (ci, r, a)
                        break
                if hit:
                    break
            if not hit:
                break
            ci, r, a = hit
            pivot = cols.pop(ci)
            inv = pow(a, -1, p)
            steps.append((r, pivot, inv))
            new_cols = []
            for col in cols:
                cr = col[r]
                if cr:
                    factor = cr * inv
                    col = [col[s] - factor * pivot[s] if s != r else ring.zero() for s in range(self.ngens)]
                else:
                    col = list(col)
                if any(col[s] for s in alive if s != r):
                    new_cols.append(col)
            cols = new_cols
            alive.remove(r)
        pruned = PresentedModule(ring, len(alive), [[col[s] for s in alive] for col in cols])
        return pruned, Pruning(ring, self.ngens, alive, steps)

    def __repr__(self):
        return f"PresentedModule(gens={self.ngens}, relations={len(self.relations.gens)})"

    def __str__(self):
        if not self.relations.gens:
            return f"free module of rank {self.ngens}"
        return "cokernel " + str(self.matrix())


class Pruning:
    """Rewrites vectors on the original generators in terms of the surviving ones."""

    def __init__(self, ring, ngens, alive, steps):
        self.ring = ring
        self.ngens = ngens
        self.alive = alive
        self.steps = steps

    def rewrite(self, v: Sequence[Polynomial]) -> list[Polynomial]:
        v = list(v)
        for r, pivot, inv in self.steps:
            if v[r]:
                factor = v[r] * inv
                v = [v[s] - factor * pivot[s] if s != r else self.ring.zero() for s in range(self.ngens)]
        return [v[s] for s in self.alive]


def _unit(ring: PolyRing, k: int, j: int) -> list[Polynomial]:
    return [ring.one() if i == j else ring.zero() for i in range(k)]


def vector_colon(N: SubmoduleOfFree, v: Sequence[Polynomial]) -> Ideal:
    """{f : f v in N} via syzygies of (v, gens of N)."""
    ring = N.ring
    cols = [list(v)] + [list(g) for g in N.gens]
    syz = syzygies(ring, N.rank, cols)
    return Ideal(ring, [s[0] for s in syz.gens])


# ---------------------------------------------------------------------------
# resolutions


@dataclass
class FreeResolution:
    """maps[i] is the matrix of d_{i+1}: F_{i+1} -> F_i."""

    ring: PolyRing
    maps: list[Matrix]
    minimal: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.maps)

    def ranks(self) -> list[int]:
        if not self.maps:
            return []
        return [self.maps[0].nrows] + [m.ncols for m in self.maps]

    def frobenius(self, e: int = 1) -> "FreeResolution":
        """The resolution of the bracket power (Frobenius is flat on S)."""
        maps = [Matrix(self.ring, [[c.frobenius_power(e) for c in row] for row in m.rows], ncols=m.ncols)
                for m in self.maps]
        return FreeResolution(self.ring, maps, self.minimal, list(self.notes))

    def is_complex(self) -> bool:
        return all((self.maps[i] * self.maps[i + 1]).is_zero() for i in range(len(self.maps) - 1))


def _prune_pair(prev: Matrix | None, cur: Matrix) -> tuple[Matrix | None, Matrix]:
    """Cancel constant entries of ``cur`` (and the matching columns of ``prev``)."""
    ring = cur.ring
    p = ring.p
    rows = [list(r) for r in cur.rows]
    nrows, ncols = cur.nrows, cur.ncols
    prev_cols = prev.columns() if prev is not None else None
    alive_r = list(range(nrows))
    alive_c = list(range(ncols))
    while True:
        hit = None
        for r in alive_r:
            for c in alive_c:
                a = _unit_of(rows[r][c])
                if a:
                    hit = (r, c, a)
                    break
            if hit:
                break
        if not hit:
            break
        r, c, a = hit
        inv = pow(a, -1, p)
        for t in alive_c:
            if t != c and rows[r][t]:
                factor = rows[r][t] * inv
                for s in alive_r:
                    if s != r and rows[s][c]:
                        rows[s][t] = rows[s][t] - factor * rows[s][c]
        alive_r.remove(r)
        alive_c.remove(c)
    new_cur = Matrix(ring, [[rows[r][c] for c in alive_c] for r in alive_r], ncols=len(alive_c))
    new_prev = None
    if prev is not None:
        new_prev = Matrix.from_columns(ring, prev.nrows, [prev_cols[r] for r in alive_r])
    return new_prev, new_cur


def _drop_zero_columns(M: Matrix) -> Matrix:
    cols = [c for c in M.columns() if any(x for x in c)]
    return Matrix.from_columns(M.ring, M.nrows, cols)


def free_resolution(M: PresentedModule | Ideal, cap: int | None = None) -> FreeResolution:
    """Iterated syzygies with constant entries pruned; minimal for graded input."""
    if isinstance(M, Ideal):
        ring = M.ring
        gens = M.trim().gens if M.is_homogeneous() else M.groebner_basis()
        first = Matrix(ring, [list(gens)], ncols=len(gens))
        homogeneous = M.is_homogeneous()
    else:
        ring = M.ring
        first = _drop_zero_columns(M.matrix())
        homogeneous = all(c.is_homogeneous() for row in first.rows for c in row)
    cap = ring.nvars + 1 if cap is None else cap
    maps: list[Matrix] = []
    if first.ncols == 0:
        return FreeResolution(ring, maps)
    _, first = _prune_pair(None, first)
    maps.append(first)
    while len(maps) < cap:
        last = maps[-1]
        syz = syzygies(ring, last.nrows, last.columns())
        if not syz.gens:
            break
        nxt = Matrix.from_columns(ring, last.ncols, [list(v) for v in syz.gens])
        prev, nxt = _prune_pair(last, nxt)
        maps[-1] = prev
        if nxt.ncols == 0:
            break
        maps.append(nxt)
    res = FreeResolution(ring, maps, minimal=homogeneous)
    if not homogeneous:
        res.notes.append("non-graded input: resolution possibly non-minimal")
    return res


# ---------------------------------------------------------------------------
# Ext


@dataclass
class ExtData:
    """Ext^i presented as K / im(d_i^T) with K = ker(d_{i+1}^T) generated by ``kernel``."""

    index: int
    kernel: list[list[Polynomial]]
    image_cols: list[list[Polynomial]]
    module: PresentedModule
    pruned: PresentedModule
    pruning: Pruning


def _transpose_cols(M: Matrix) -> list[list[Polynomial]]:
    """Columns of M^T (= rows of M)."""
    return [list(r) for r in M.rows]


def ext_data(i: int, res: FreeResolution) -> ExtData:
    ring = res.ring
    ranks = res.ranks() if res.maps else [1]
    if i < 0 or i >= len(ranks):
        return ExtData(i, [], [], PresentedModule(ring, 0, []), PresentedModule(ring, 0, []),
                       Pruning(ring, 0, [], []))
    r_i = ranks[i]
    # kernel of d_{i+1}^T : F_i^* -> F_{i+1}^*
    if i < len(res.maps):
        dT = res.maps[i].transpose()  # r_{i+1} x r_i
        kernel = [list(v) for v in syzygies(ring, dT.nrows, dT.columns()).gens]
    else:
        kernel = [_unit(ring, r_i, j) for j in range(r_i)]
    image_cols = _transpose_cols(res.maps[i - 1]) if i >= 1 else []  # columns of d_i^T in F_i^*
    s = len(kernel)
    if s == 0:
        zero = PresentedModule(ring, 0, [])
        return ExtData(i, [], image_cols, zero, zero, Pruning(ring, 0, [], []))
    rel = syzygies(ring, r_i, kernel + image_cols)
    relations = [list(v)[:s] for v in rel.gens]
    module = PresentedModule(ring, s, [v for v in relations if any(c for c in v)])
    pruned, pruning = module.prune()
    return ExtData(i, kernel, image_cols, module, pruned, pruning)


def ext_module(i: int, I: Ideal | PresentedModule, res: FreeResolution | None = None) -> PresentedModule:
    """Ext^i_S(M, S) for M = S/I (or a presented module), as a pruned presentation."""
    res = res or free_resolution(I)
    return ext_data(i, res).pruned


@dataclass
class ExtMap:
    source: PresentedModule
    target: PresentedModule
    matrix: Matrix


def comparison_maps(res_small: FreeResolution, res_big: FreeResolution, upto: int) -> list[Matrix]:
    """Chain maps phi_k: F_k(big) -> F_k(small) lifting S/J -> S/I (J subset of I)."""
    ring = res_small.ring
    phis = [Matrix(ring, [[1]])]
    for k in range(upto):
        if k >= len(res_big.maps):
            break
        big = res_big.maps[k]
        target = phis[-1] * big  # columns lie in the image of res_small.maps[k]
        if k >= len(res_small.maps):
            if not target.is_zero():
                raise ContainmentError("comparison map does not exist")
            phis.append(Matrix(ring, [[0] * big.ncols for _ in range(0)], ncols=big.ncols))
            break
        small = res_small.maps[k]
        lifter = Lifter(ring, small.nrows, small.columns())
        cols = []
        for col in target.columns():
            c = lifter.lift(col)
            if c is None:
                raise ContainmentError("the source ideal is not contained in the target ideal")
            cols.append(c)
        phis.append(Matrix.from_columns(ring, small.ncols, cols))
    return phis


def ext_of_map(i: int, I: Ideal, I2: Ideal, res: FreeResolution | None = None,
               res2: FreeResolution | None = None) -> ExtMap:
    """Ext^i(S/I, S) -> Ext^i(S/I2, S) induced by S/I2 -> S/I (requires I2 inside I)."""
    if not I.contains(I2):
        raise ContainmentError("extOfMap needs I2 contained in I")
    ring = I.ring
    res = res or free_resolution(I)
    res2 = res2 or free_resolution(I2)
    src = ext_data(i, res)
    tgt = ext_data(i, res2)
    if not src.kernel or not tgt.kernel:
        return ExtMap(src.pruned, tgt.pruned, Matrix(ring, [[0] * src.pruned.ngens for _ in range(tgt.pruned.ngens)],
                                                     ncols=src.pruned.ngens))
    phis = comparison_maps(res, res2, i)
    phi = phis[i]  # F_i(res2) -> F_i(res)
    phiT = phi.transpose()
    r2 = len(tgt.kernel[0])
    lifter = Lifter(ring, r2, tgt.kernel + tgt.image_cols)
    s2 = len(tgt.kernel)
    cols = []
    for j in src.pruning.alive:
        v = phiT.apply(src.kernel[j])
        c = lifter.lift(v)
        if c is None:
            raise ContainmentError("induced map does not land in the kernel")
        cols.append(tgt.pruning.rewrite(c[:s2]))
    M = Matrix.from_columns(ring, tgt.pruned.ngens, cols)
    return ExtMap(src.pruned, tgt.pruned, M)


def frobenius_ext_map(i: int, I: Ideal, res: FreeResolution | None = None) -> ExtMap:
    """Ext^i(S/I,S) -> Ext^i(S/I^{[p]},S); the target presentation is the Frobenius of the source one."""
    res = res or free_resolution(I)
    return ext_of_map(i, I, I.frobenius(1), res, res.frobenius(1))


# ---------------------------------------------------------------------------
# Hom into R and ideal embeddings


def hom_to_ring(M: PresentedModule, I: Ideal) -> list[list[Polynomial]]:
    """Generators h (row vectors) of Hom_R(M, R), R = S/I: h * A = 0 mod I."""
    ring = M.ring
    g = M.ngens
    A = M.matrix()
    r = A.ncols
    Igens = list(I.trim().gens) if not I.is_zero() else []
    if r == 0:
        return [_unit(ring, g, j) for j in range(g)]
    cols = [list(A.rows[i]) for i in range(g)]
    for c in range(r):
        for f in Igens:
            v = [ring.zero()] * r
            v[c] = f
            cols.append(v)
    syz = syzygies(ring, r, cols)
    out = []
    for v in syz.gens:
        h = [I.reduce(x) if not I.is_zero() else x for x in v[:g]]
        if any(x for x in h):
            out.append(h)
    return out


@dataclass
class Embedding:
    """An injective map M -> R given by the row vector ``hom``; image ideal ``omega`` (+ I = ``pullback``)."""

    omega: list[Polynomial]
    pullback: Ideal
    hom: list[Polynomial]
    tried: int


def is_nonzerodivisor_ideal(J: Ideal, I: Ideal) -> bool:
    """Whether J contains a nonzerodivisor of S/I in the sense (I : J) == I (exact for reduced I)."""
    if I.is_zero():
        return not J.is_zero()
    return I.quotient(J) == I


def embed_as_ideal(M: PresentedModule, I: Ideal, seed: int = 0, budget: int = EMBED_BUDGET) -> Embedding:
    """Find an injective R-linear map M -> R (M generically rank one, R = S/I reduced)."""
    ring = M.ring
    homs = hom_to_ring(M, I)
    if not homs:
        raise EmbeddingError("Hom(M, R) is zero: no embedding into R")
    homs.sort(key=lambda h: (max((x.degree() for x in h if x), default=0), sum(len(x) for x in h)))
    rng = random.Random(seed)
    tried = 0

    def candidates():
        for h in homs:
            yield h
        while True:
            combo = [ring.zero()] * M.ngens
            for h in homs:
                c = rng.randrange(ring.p)
                if c:
                    combo = [a + b.scale(c) for a, b in zip(combo, h)]
            yield combo

    for h in candidates():
        if tried >= budget:
            break
        tried += 1
        if not any(h):
            continue
        image = Ideal(ring, list(h) + list(I.gens))
        if is_nonzerodivisor_ideal(image, I) and _injective(M, h, I):
            return Embedding([x for x in h if x], image, list(h), tried)
    raise EmbeddingError(f"no injective map into the ring among {tried} candidates")


def _injective(M: PresentedModule, h: Sequence[Polynomial], I: Ideal) -> bool:
    """Kernel of M -> R, v -> h.v, vanishes: kernel vectors lie in the relation module."""
    ring = M.ring
    g = M.ngens
    if g == 1:
        # cyclic: M = S/K, kernel is (K + (I : h)) / K
        K = Ideal(ring, [v[0] for v in M.relations.gens])
        return (I.quotient(Ideal(ring, [h[0]])) + K) == K if h[0] else False
    cols = [[x] for x in h]
    Igens = [[f] for f in I.trim().gens]
    syz = syzygies(ring, 1, cols + Igens)
    rel = M.relations + SubmoduleOfFree(ring, g, [
        [f if j == i else ring.zero() for j in range(g)] for i in range(g) for f in I.trim().gens])
    return all(list(v[:g]) in rel for v in syz.gens)


# ---------------------------------------------------------------------------
# canonical ideals and Cohen-Macaulayness


@dataclass
class CanonicalIdeal:
    omega: list[Polynomial]       # generators of the ideal in R (representatives in S)
    pullback: Ideal               # Omega = omega + I in S
    module: PresentedModule       # Ext^codim(S/I, S)
    embedding: Embedding | None


def canonical_ideal(I: Ideal, seed: int = 0, res: FreeResolution | None = None) -> CanonicalIdeal:
    ring = I.ring
    if I.is_zero():
        one = Ideal(ring, [1])
        return CanonicalIdeal([ring.one()], one, PresentedModule(ring, 1, []), None)
    if I.is_unit():
        raise ValueError("the unit ideal has no canonical module")
    c = I.codim()
    res = res or free_resolution(I)
    E = ext_module(int(c), I, res)
    if E.ngens == 1 and all(v[0] in I for v in E.relations.gens):
        return CanonicalIdeal([ring.one()], Ideal(ring, [1]), E, None)
    emb = embed_as_ideal(E, I, seed=seed)
    return CanonicalIdeal(emb.omega, emb.pullback, E, emb)


def is_cohen_macaulay(I: Ideal, res: FreeResolution | None = None) -> bool:
    """S/I is CM iff Ext^i(S/I, S) vanishes for every i above the codimension."""
    if I.is_zero():
        return True
    if I.is_unit():
        return True
    c = int(I.codim())
    if len(I.trim().gens) == 1:
        return True
    res = res or free_resolution(I)
    if res.length <= c:
        return True
    if res.minimal:
        return False
    for i in range(res.length, c, -1):
        if not ext_data(i, res).pruned.is_zero():
            return False
    return True


# ---------------------------------------------------------------------------
# Frobenius pushforward


@dataclass
class Pushforward:
    module: PresentedModule
    basis: list[tuple[int, ...]]
    unit_index: int  # generator receiving 1 under R -> F^e_* R


def frobenius_pushforward(e: int, I: Ideal, cap: int = PUSHFORWARD_CAP) -> Pushforward:
    """F^e_* (S/I) as an S-module: generators x^{lam/p^e}, relations from buckets of g x^lam."""
    if e < 1:
        raise ValueError("pushforward level must be positive")
    ring = I.ring
    q = ring.p ** e
    n = ring.nvars
    count = q ** n
    if count > cap:
        raise ResourceLimitError(f"pushforward would have {count} generators (cap {cap})")
    import itertools

    basis = list(itertools.product(range(q), repeat=n))
    index = {lam: i for i, lam in enumerate(basis)}
    relations = []
    for g in I.trim().gens if not I.is_zero() else []:
        for lam in basis:
            h = g * ring.monomial(lam)
            vec = [ring.zero()] * count
            for res_, t in root_bucket_terms(ring, h.terms, e).items():
                vec[index[res_]] = Polynomial(ring, t, _trusted=True)
            relations.append(vec)
    return Pushforward(PresentedModule(ring, count, relations), basis, index[tuple([0] * n)])


# ---------------------------------------------------------------------------
# reflexive powers


@dataclass
class FractionalIdealRep:
    """(1/denominator) * numerator, inside the total ring of fractions of S/I."""

    numerator: Ideal
    denominator: Polynomial
    principal: Polynomial | None = None


def principal_generator(J: Ideal, I: Ideal) -> Polynomial | None:
    """A single h with J = (h) + I, tested exactly on the candidate generators."""
    ring = J.ring
    cands = [g for g in J.groebner_basis() if g not in I]
    cands.sort(key=lambda g: (g.degree(), len(g)))
    for h in cands:
        K = Ideal(ring, [h] + list(I.gens))
        if all(g in K for g in cands):
            return h
    return None


def regular_element(J: Ideal, I: Ideal, seed: int = 0, tries: int = 50) -> Polynomial | None:
    """A nonzerodivisor of S/I inside J: a GB element if one works, else a seeded
    combination of GB elements (squares are mixed in so that small fields suffice)."""
    import random

    ring = I.ring

    def regular(g):
        return bool(g) and g not in I and I.quotient(Ideal(ring, [g])) == I

    gens = sorted((g for g in J.groebner_basis() if g not in I), key=lambda f: (f.degree(), len(f)))
    for g in gens:
        if regular(g):
            return g
    rng = random.Random(seed)
    pool = gens + [g * g for g in gens]
    for k in range(tries):
        h = ring.zero()
        for g in gens if k < tries // 2 else pool:
            a = rng.randrange(ring.p)
            if a:
                h = h + g.scale(a)
        if regular(h):
            return h
    return None


def _reflexive_hull(J: Ideal, I: Ideal) -> Ideal:
    """J^{**} = (g) : ((g) : J) in R = S/I, for a nonzerodivisor g in J."""
    ring = I.ring
    g = regular_element(J, I)
    if g is None:
        raise ValueError("no nonzerodivisor found in the ideal")
    gI = Ideal(ring, [g] + list(I.gens))
    return gI.quotient(gI.quotient(J)).trim()


def reflexive_powers(Omega: Ideal, I: Ideal, max_n: int):
    """Yield (n, (omega^n)^{**}) for n = 1..max_n.

    Uses (A B)^{**} = (A^{**} B)^{**}, so each step multiplies the previous hull
    by omega instead of expanding omega^n."""
    D = None
    for n in range(1, max_n + 1):
        J = Omega + I if D is None else (D * Omega + I)
        D = _reflexive_hull(J.trim(), I)
        yield n, FractionalIdealRep(D, I.ring.one(), principal_generator(D, I))


def reflexive_power(Omega: Ideal, n: int, I: Ideal) -> FractionalIdealRep:
    """(omega^n)^{**} in R = S/I, as an ideal of R."""
    if n < 1:
        raise ValueError("power must be positive")
    rep = None
    for _, rep in reflexive_powers(Omega, I, n):
        pass
    return rep


def ideals_isomorphic(A: Ideal, B: Ideal, I: Ideal, seed: int = 0, tries: int = 50) -> bool:
    """Whether the ideals A/I and B/I of R = S/I are isomorphic R-modules.

    Both must contain a nonzerodivisor of R.  With g a nonzerodivisor in B,
    A and B are isomorphic iff h B = g A (mod I) for some h in (g A : B);
    candidates h are generators of that colon and seeded combinations."""
    import random

    ring = I.ring
    if A.is_unit() and B.is_unit():
        return True
    rng = random.Random(seed)
    gB = regular_element(B, I, seed=seed, tries=tries)
    if gB is None:
        return False
    gA = Ideal(ring, [gB * a for a in A.gens] + list(I.gens))
    K = gA.quotient(B)
    cands = [h for h in K.groebner_basis() if h not in I]
    target = gA

    def works(h):
        return Ideal(ring, [h * b for b in B.gens] + list(I.gens)) == target

    for h in cands:
        if works(h):
            return True
    for _ in range(tries):
        h = ring.zero()
        for c in cands:
            a = rng.randrange(ring.p)
            if a:
                h = h + c.scale(a)
        if h and works(h):
            return True
    return False


__all__ = [
    "PresentedModule", "FreeResolution", "FractionalIdealRep", "free_resolution", "ext_module", "ext_of_map",
    "frobenius_ext_map", "hom_to_ring", "embed_as_ideal", "canonical_ideal", "is_cohen_macaulay",
    "frobenius_pushforward", "reflexive_power", "regular_element", "reflexive_powers", "principal_generator", "vector_colon", "Embedding",
    "CanonicalIdeal", "ExtMap", "Pushforward", "ideals_isomorphic",
]

"""Sparse multivariate polynomials over a prime field F_p.

Monomials are packed into Python integers.  For an order given by a
nonnegative weight matrix ``W`` the packed key of an exponent vector ``a``
is the concatenation of the fields of ``W @ a`` (most significant row first),
so that

* integer comparison of keys is the monomial order,
* multiplication of monomials is addition of keys,
* raising to the ``q``-th power is multiplication of the key by ``q``.

A second packing (the "exponent key") stores the raw exponents and is used
for divisibility and lcm tests with word-parallel bit tricks.
"""

from __future__ import annotations

import itertools
import re
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ExponentOverflowError, RingMismatchError

FIELD_BITS = 32
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def pth_root(c: int, p: int) -> int:
    """The p-th root of a prime-field scalar (Frobenius is the identity on F_p)."""
    return c % p


class MonomialOrder:
    """A global monomial order on ``nvars`` variables.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"block"``; the block order compares
    the first ``block`` variables lexicographically and breaks ties with grevlex
    on the remaining ones (an elimination order for the first block).
    """

    KINDS = ("grevlex", "lex", "block")

    def __init__(self, kind: str = "grevlex", block: int = 0):
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "block" and block <= 0:
            raise ValueError("block order needs a positive block size")
        self.kind = kind
        self.block = block if kind == "block" else 0

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.block) == (other.kind, other.block)

    def __hash__(self):
        return hash((self.kind, self.block))

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder('block', block={self.block})"
        return f"MonomialOrder({self.kind!r})"


def _as_order(order) -> MonomialOrder:
    if isinstance(order, MonomialOrder):
        return order
    if isinstance(order, tuple):
        return MonomialOrder(*order)
    return MonomialOrder(order)


_VAR_RANGE = re.compile(r"^([A-Za-z])\.\.([A-Za-z])$")


def expand_variables(names: Iterable[str] | str) -> tuple[str, ...]:
    """Expand Macaulay2-style ranges: ``"a..d,x"`` -> ``('a','b','c','d','x')``."""
    if isinstance(names, str):
        names = [s.strip() for s in names.split(",") if s.strip()]
    out: list[str] = []
    for name in names:
        m = _VAR_RANGE.match(name)
        if m:
            lo, hi = ord(m.group(1)), ord(m.group(2))
            if hi < lo:
                raise ValueError(f"empty variable range {name!r}")
            out.extend(chr(c) for c in range(lo, hi + 1))
        else:
            out.append(name)
    return tuple(out)


class PolyRing:
    """The polynomial ring F_p[vars] with a fixed monomial order."""

    def __init__(self, p: int, variables: Iterable[str] | str, order="grevlex"):
        if not is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p}")
        if p >= 1 << 62:
            raise ValueError("characteristic must fit in a machine word")
        self.p = p
        self.vars = expand_variables(variables)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("variable names must be unique")
        for v in self.vars:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                raise ValueError(f"bad variable name {v!r}")
        self.nvars = n = len(self.vars)
        self.order = _as_order(order)
        if self.order.kind == "block" and self.order.block > n:
            raise ValueError("block larger than the number of variables")
        self.index = {v: i for i, v in enumerate(self.vars)}

        B = FIELD_BITS
        self.field_mask = (1 << B) - 1
        self.mono_bits = B * n
        self.mono_mask = (1 << (B * n)) - 1
        self.guard = sum(1 << (B * j + B - 1) for j in range(n))
        self._unit_key = [0] * n
        kind = self.order.kind
        if kind == "grevlex":
            self._low = n
        elif kind == "lex":
            self._low = 0
        else:
            self._low = n - self.order.block
        self._low_mask = (1 << (B * self._low)) - 1
        self._low_repunit = sum(1 << (B * j) for j in range(self._low))
        # position of each variable inside the exponent key
        self._epos = [0] * n
        for i in range(n):
            if i < n - self._low:
                self._epos[i] = n - 1 - i
            else:
                self._epos[i] = i - (n - self._low)
        for i in range(n):
            e = [0] * n
            e[i] = 1
            self._unit_key[i] = self.key_of(e)

    # -- identity -----------------------------------------------------------
    def _ident(self):
        return (self.p, self.vars, self.order)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        extra = "" if self.order.kind == "grevlex" else f", order={self.order!r}"
        return f"PolyRing({self.p}, {list(self.vars)}{extra})"

    def __str__(self):
        return f"ZZ/{self.p}[{','.join(self.vars)}]"

    # -- monomial encoding ------------------------------------------------
    def key_of(self, exps: Sequence[int]) -> int:
        n, B = self.nvars, FIELD_BITS
        if len(exps) != n:
            raise ValueError("exponent vector has wrong length")
        if any(e < 0 for e in exps):
            raise ValueError("negative exponent")
        if sum(exps) > MAX_EXPONENT:
            raise ExponentOverflowError("monomial degree exceeds the packed range")
        hi = n - self._low
        key = 0
        for i in range(hi):
            key = (key << B) | exps[i]
        # grevlex block: partial sums, largest first
        low_exps = exps[hi:]
        sums = list(itertools.accumulate(low_exps))
        for s in reversed(sums):
            key = (key << B) | s
        return key

    def ekey(self, key: int) -> int:
        """Exponent key (raw exponents, one per field) of a monomial key."""
        key &= self.mono_mask
        if self._low == 0:
            return key
        low = key & self._low_mask
        return (key - low) | (low - ((low << FIELD_BITS) & self._low_mask))

    def key_from_ekey(self, e: int) -> int:
        if self._low == 0:
            return e
        low = e & self._low_mask
        return (e - low) | ((low * self._low_repunit) & self._low_mask)

    def exps_of(self, key: int) -> tuple[int, ...]:
        e = self.ekey(key)
        B, fm = FIELD_BITS, self.field_mask
        return tuple((e >> (B * pos)) & fm for pos in self._epos)

    def divides(self, ka: int, kb: int) -> bool:
        """Whether monomial ``ka`` divides monomial ``kb`` (position bits ignored)."""
        ea, eb = self.ekey(ka), self.ekey(kb)
        g = self.guard
        return ((eb | g) - ea) & g == g

    def ekey_divides(self, ea: int, eb: int) -> bool:
        g = self.guard
        return ((eb | g) - ea) & g == g

    def ekey_lcm(self, ea: int, eb: int) -> int:
        g = self.guard
        ge = ((ea | g) - eb) & g  # guard set where ea >= eb
        sel = (ge >> (FIELD_BITS - 1)) * self.field_mask
        return (ea & sel) | (eb & ~sel & self.mono_mask)

    def lcm(self, ka: int, kb: int) -> int:
        return self.key_from_ekey(self.ekey_lcm(self.ekey(ka), self.ekey(kb)))

    def degree_of(self, key: int) -> int:
        key &= self.mono_mask
        if self.order.kind == "grevlex":
            return key >> (FIELD_BITS * (self.nvars - 1)) if self.nvars else 0
        return sum(self.exps_of(key))

    def var_key(self, i: int) -> int:
        return self._unit_key[i]

    # -- element constructors ---------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, {}, _trusted=True)

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {0: c} if c else {}, _trusted=True)

    def monomial(self, exps: Sequence[int], coef: int = 1) -> "Polynomial":
        c = coef % self.p
        return Polynomial(self, {self.key_of(exps): c} if c else {}, _trusted=True)

    def var(self, name: str | int) -> "Polynomial":
        i = name if isinstance(name, int) else self.index[name]
        return Polynomial(self, {self._unit_key[i]: 1}, _trusted=True)

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def from_dict(self, data: Mapping[Sequence[int], int]) -> "Polynomial":
        terms: dict[int, int] = {}
        p = self.p
        for exps, c in data.items():
            k = self.key_of(tuple(exps))
            terms[k] = (terms.get(k, 0) + c) % p
        return Polynomial(self, {k: c for k, c in terms.items() if c}, _trusted=True)

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring != self:
                return value.change_ring(self)
            return value
        if isinstance(value, int):
            return self.constant(value)
        if isinstance(value, str):
            return parse_polynomial(self, value)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self}")

    def with_order(self, order) -> "PolyRing":
        return PolyRing(self.p, self.vars, order)


class Polynomial:
    """An element of a :class:`PolyRing`; immutable by convention.

    ``terms`` maps packed monomial keys to nonzero residues in ``[1, p)``.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[int, int] | None = None, _trusted: bool = False):
        self.ring = ring
        if terms is None:
            self.terms = {}
        elif _trusted:
            self.terms = terms  # type: ignore[assignment]
        else:
            p = ring.p
            self.terms = {k: c % p for k, c in terms.items() if c % p}

    # -- basic queries ----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_coefficient(self) -> int:
        return self.terms.get(0, 0)

    def lead_key(self) -> int:
        return max(self.terms)

    def lead_coefficient(self) -> int:
        return self.terms[max(self.terms)] if self.terms else 0

    def lead_exponents(self) -> tuple[int, ...]:
        return self.ring.exps_of(self.lead_key())

    def lead_monomial(self) -> "Polynomial":
        return Polynomial(self.ring, {self.lead_key(): 1}, _trusted=True)

    def degree(self) -> int:
        if not self.terms:
            return -1
        r = self.ring
        return max(r.degree_of(k) for k in self.terms)

    def is_homogeneous(self) -> bool:
        r = self.ring
        return len({r.degree_of(k) for k in self.terms}) <= 1

    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """(exponent tuple, coefficient) pairs in descending monomial order."""
        r = self.ring
        for k in sorted(self.terms, reverse=True):
            yield r.exps_of(k), self.terms[k]

    def variables(self) -> set[int]:
        used: set[int] = set()
        for exps, _ in self.items():
            used.update(i for i, e in enumerate(exps) if e)
        return used

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = (out.get(k, 0) + c) % p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Polynomial(self.ring, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {k: p - c for k, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, mul_terms(self.terms, other.terms, self.ring.p), _trusted=True)

    __rmul__ = __mul__

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {k: v * c % p for k, v in self.terms.items()}, _trusted=True)

    def mul_monomial(self, key: int, coef: int = 1) -> "Polynomial":
        p = self.ring.p
        coef %= p
        if not coef:
            return self.ring.zero()
        self._check_degree(self.degree() + self.ring.degree_of(key))
        return Polynomial(self.ring, {k + key: c * coef % p for k, c in self.terms.items()}, _trusted=True)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers need a nonnegative integer exponent")
        r = self.ring
        if n == 0:
            return r.one()
        self._check_degree(max(self.degree(), 0) * n)
        # n = sum d_i p^i  =>  f^n = prod (f^{d_i})^{[p^i]}
        result = r.one()
        q = 0
        while n:
            n, d = divmod(n, r.p)
            if d:
                result = result * self._small_power(d).frobenius_power(q)
            q += 1
        return result

    def _small_power(self, d: int) -> "Polynomial":
        result = self.ring.one()
        base = self
        while d:
            if d & 1:
                result = result * base
            d >>= 1
            if d:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == ({0: other % self.ring.p} if other % self.ring.p else {})
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def _check_degree(self, d: int):
        if d > MAX_EXPONENT:
            raise ExponentOverflowError(f"degree {d} exceeds the packed monomial range")

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.lead_coefficient()
        if lc == 1:
            return self
        return self.scale(pow(lc, -1, self.ring.p))

    # -- Frobenius kernels ------------------------------------------------
    def frobenius_power(self, e: int) -> "Polynomial":
        """f^{p^e}: every exponent vector scaled by p^e, coefficients kept."""
        if e < 0:
            raise ValueError("Frobenius level must be nonnegative")
        if e == 0 or not self.terms:
            return self
        q = self.ring.p ** e
        self._check_degree(self.degree() * q)
        return Polynomial(self.ring, {k * q: c for k, c in self.terms.items()}, _trusted=True)

    def root_buckets(self, e: int) -> dict[tuple[int, ...], "Polynomial"]:
        """Split f = sum_r f_r^{p^e} x^r with 0 <= r_i < p^e; returns {r: f_r}."""
        return {r: Polynomial(self.ring, t, _trusted=True) for r, t in root_bucket_terms(self.ring, self.terms, e).items()}

    def root_decompose(self, e: int) -> "RootDecomposition":
        return RootDecomposition(self.ring, e, self.root_buckets(e))

    def partial(self, var: int | str) -> "Polynomial":
        r = self.ring
        i = var if isinstance(var, int) else r.index[var]
        p = r.p
        step = r.var_key(i)
        out = {}
        for k, c in self.terms.items():
            a = r.exps_of(k)[i]
            if a % p:
                out[k - step] = c * a % p
        return Polynomial(r, out, _trusted=True)

    def partials(self) -> list["Polynomial"]:
        return [self.partial(i) for i in range(self.ring.nvars)]

    # -- ring changes -----------------------------------------------------
    def change_ring(self, target: PolyRing, var_map: Sequence[int] | None = None) -> "Polynomial":
        """Move into ``target``; ``var_map[i]`` is the target index of source variable i."""
        src = self.ring
        if var_map is None:
            var_map = [target.index[v] for v in src.vars]
        p = target.p
        n = target.nvars
        out: dict[int, int] = {}
        for k, c in self.terms.items():
            exps = [0] * n
            for i, a in enumerate(src.exps_of(k)):
                if a:
                    exps[var_map[i]] += a
            kk = target.key_of(exps)
            v = (out.get(kk, 0) + c) % p
            if v:
                out[kk] = v
            else:
                out.pop(kk, None)
        return Polynomial(target, out, _trusted=True)

    def substitute(self, images: Sequence["Polynomial"], target: PolyRing | None = None) -> "Polynomial":
        """Evaluate at ``images`` (one polynomial per variable of this ring)."""
        if len(images) != self.ring.nvars:
            raise ValueError("need one image per variable")
        target = target or (images[0].ring if images else self.ring)
        cache: dict[tuple[int, int], Polynomial] = {}

        def power(i, a):
            if (i, a) not in cache:
                cache[(i, a)] = images[i] ** a
            return cache[(i, a)]

        result = target.zero()
        for exps, c in self.items():
            term = target.constant(c)
            for i, a in enumerate(exps):
                if a:
                    term = term * power(i, a)
            result = result + term
        return result

    # -- display ----------------------------------------------------------
    def __repr__(self):
        return f"Polynomial({self.ring!r}, {str(self)!r})"

    def __str__(self):
        return format_terms(self.ring, self.terms)


def mul_terms(a: Mapping[int, int], b: Mapping[int, int], p: int) -> dict[int, int]:
    if len(a) > len(b):
        a, b = b, a
    acc: dict[int, int] = {}
    get = acc.get
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb
            acc[k] = get(k, 0) + ca * cb
    return {k: c % p for k, c in acc.items() if c % p}


def root_bucket_terms(ring: PolyRing, terms: Mapping[int, int], e: int) -> dict[tuple[int, ...], dict[int, int]]:
    """Terms of each f_r in f = sum_r f_r^{p^e} x^r (linear in the number of terms)."""
    if e < 0:
        raise ValueError("Frobenius level must be nonnegative")
    q = ring.p ** e
    buckets: dict[tuple[int, ...], dict[int, int]] = {}
    exps_of, key_of = ring.exps_of, ring.key_of
    for k, c in terms.items():
        qs = []
        rs = []
        for a in exps_of(k):
            qq, rr = divmod(a, q)
            qs.append(qq)
            rs.append(rr)
        # coefficient root is the identity on the prime field
        buckets.setdefault(tuple(rs), {})[key_of(qs)] = c
    return buckets


class RootDecomposition:
    """f = sum_r f_r^{p^e} x^r, with buckets indexed by residue tuples r."""

    def __init__(self, ring: PolyRing, level: int, buckets: dict[tuple[int, ...], Polynomial]):
        self.ring = ring
        self.level = level
        self.buckets = buckets

    def reassemble(self) -> Polynomial:
        r = self.ring
        total = r.zero()
        for res, f in self.buckets.items():
            total = total + f.frobenius_power(self.level) * r.monomial(res)
        return total

    def __getitem__(self, residue):
        return self.buckets.get(tuple(residue), self.ring.zero())

    def nonzero(self) -> list[Polynomial]:
        return [f for _, f in sorted(self.buckets.items()) if f]


def symmetric_residue(c: int, p: int) -> int:
    c %= p
    return c - p if c > p // 2 else c


def format_monomial(ring: PolyRing, key: int) -> str:
    parts = []
    for name, a in zip(ring.vars, ring.exps_of(key)):
        if a == 1:
            parts.append(name)
        elif a:
            parts.append(f"{name}^{a}")
    return "*".join(parts)


def format_terms(ring: PolyRing, terms: Mapping[int, int]) -> str:
    if not terms:
        return "0"
    out = []
    p = ring.p
    for k in sorted(terms, reverse=True):
        c = symmetric_residue(terms[k], p)
        mono = format_monomial(ring, k)
        neg = c < 0
        c = abs(c)
        body = mono if (mono and c == 1) else (f"{c}*{mono}" if mono else str(c))
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# -- parsing --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()/]))")


class PolynomialSyntaxError(ValueError):
    pass


def _tokenize(text: str):
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        if m.group(1):
            yield ("num", int(m.group(1)))
        elif m.group(2):
            yield ("name", m.group(2))
        else:
            tok = m.group(3)
            yield ("op", "^" if tok == "**" else tok)
    yield ("end", None)


def parse_polynomial(ring: PolyRing, text: str) -> Polynomial:
    """Parse ``text`` like ``"x^2*y - 3*z + 1"`` (juxtaposition ``2z`` is a product)."""
    toks = list(_tokenize(text))
    pos = 0

    def peek():
        return toks[pos]

    def take():
        nonlocal pos
        tok = toks[pos]
        pos += 1
        return tok

    def expr():
        node = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def term():
        node = unary()
        while True:
            tok = peek()
            if tok == ("op", "*"):
                take()
                node = node * unary()
            elif tok == ("op", "/"):
                take()
                den = unary()
                if not den.is_constant() or not den:
                    raise PolynomialSyntaxError("division only by nonzero constants")
                node = node.scale(pow(den.constant_coefficient(), -1, ring.p))
            elif tok[0] in ("num", "name") or tok == ("op", "("):
                node = node * unary()
            else:
                return node

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "num":
                raise PolynomialSyntaxError("exponent must be a nonnegative integer")
            return base ** val
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return ring.constant(val)
        if kind == "name":
            if val not in ring.index:
                raise PolynomialSyntaxError(f"unknown variable {val!r} in {ring}")
            return ring.var(val)
        if (kind, val) == ("op", "("):
            node = expr()
            if take() != ("op", ")"):
                raise PolynomialSyntaxError("missing ')'")
            return node
        raise PolynomialSyntaxError(f"unexpected token {val!r}")

    result = expr()
    if peek()[0] != "end":
        raise PolynomialSyntaxError(f"trailing input near token {peek()[1]!r}")
    return result

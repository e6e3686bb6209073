"""Evaluation of .frob scripts: values, arithmetic and the builtin operations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .. import cartier, decompose, homological, invariants
from ..frobenius import frobenius_module, frobenius_power, frobenius_root, frobenius_root_mult, submodule_root
from ..errors import CharFrobError
from ..groebner import Ideal, Matrix, SubmoduleOfFree, kernel_of_ring_map, minors
from ..polyring import PolyRing, Polynomial
from . import lang


class ScriptError(Exception):
    """Runtime failure, tagged with the statement position and operation."""

    def __init__(self, message: str, line: int = 0, col: int = 0, operation: str | None = None):
        where = f"line {line}, column {col}: " if line else ""
        op = f"in {operation}: " if operation else ""
        super().__init__(where + op + message)
        self.line = line
        self.col = col
        self.operation = operation


# ---------------------------------------------------------------------------
# values


class Inconclusive:
    def __str__(self):
        return "inconclusive"

    def __eq__(self, other):
        return isinstance(other, Inconclusive)

    def __hash__(self):
        return 0


INCONCLUSIVE = Inconclusive()


@dataclass(eq=False)
class RingValue:
    name: str
    ambient: PolyRing
    defining: Ideal

    @property
    def is_quotient(self) -> bool:
        return not self.defining.is_zero()

    def __str__(self):
        base = f"ZZ/{self.ambient.p}[{','.join(self.ambient.vars)}]"
        if self.is_quotient:
            return f"{base}/{_ideal_body(self.defining, None)}"
        return base


@dataclass(eq=False)
class IdealValue:
    """An ideal of ring.ambient / ring.defining, stored as its pullback."""

    pullback: Ideal
    ring: RingValue

    def __eq__(self, other):
        return isinstance(other, IdealValue) and self.pullback.ring is other.pullback.ring and self.pullback == other.pullback

    def __str__(self):
        return _ideal_body(self.pullback, self.ring.defining if self.ring.is_quotient else None)


@dataclass(eq=False)
class ModuleValue:
    module: SubmoduleOfFree

    def __eq__(self, other):
        return isinstance(other, ModuleValue) and self.module == other.module

    def __str__(self):
        return str(self.module)


@dataclass(eq=False)
class MatrixValue:
    matrix: Matrix

    def __eq__(self, other):
        return isinstance(other, MatrixValue) and self.matrix == other.matrix

    def __str__(self):
        return str(self.matrix)


@dataclass(eq=False)
class RingMapValue:
    target: RingValue
    source: RingValue
    images: list


@dataclass(eq=False)
class DatumValue:
    datum: cartier.CartierDatum

    def __str__(self):
        us = self.datum.multipliers
        return str(us[0]) if len(us) == 1 else "{" + ", ".join(str(u) for u in us) + "}"


def ideal_generators(J: Ideal, I: Ideal | None) -> list[Polynomial]:
    """Reduced GB, monic, ascending by lead term; modulo I when given."""
    gens = J.groebner_basis()
    if I is not None and not J.is_unit():
        # I is inside J, so the reduced GB of J is already reduced modulo I
        gens = [g for g in gens if g not in I]
    return sorted(gens, key=lambda g: g.lead_key())


def _ideal_body(J: Ideal, I: Ideal | None) -> str:
    return "ideal(" + ", ".join(str(g) for g in ideal_generators(J, I)) + ")"


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (list, tuple)):
        return "{" + ", ".join(format_value(x) for x in v) + "}"
    if v is None:
        return "null"
    return str(v)


def to_json(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (list, tuple)):
        return [to_json(x) for x in v]
    if isinstance(v, IdealValue):
        gens = ideal_generators(v.pullback, v.ring.defining if v.ring.is_quotient else None)
        return {"type": "ideal", "ring": format_value(v.ring), "generators": [str(g) for g in gens]}
    if isinstance(v, Polynomial):
        return {"type": "polynomial", "value": str(v)}
    if isinstance(v, ModuleValue):
        return {"type": "module", "columns": [[str(c) for c in col] for col in v.module.gens]}
    return {"type": type(v).__name__, "value": format_value(v)}


# ---------------------------------------------------------------------------
# interpreter


@dataclass
class ExpectationResult:
    line: int
    text: str
    passed: bool
    detail: str = ""


@dataclass
class Interpreter:
    seed: int = 0
    env: dict = field(default_factory=dict)
    rings: list = field(default_factory=list)
    current: RingValue | None = None
    output: list = field(default_factory=list)
    results: list = field(default_factory=list)
    echo: Callable[[str], None] | None = None

    # ---- rings and coercions

    def _emit(self, text: str):
        self.output.append(text)
        if self.echo:
            self.echo(text)

    def set_ring(self, rv: RingValue):
        if rv not in self.rings:
            self.rings.append(rv)
        self.current = rv

    def ring_for(self, poly_ring: PolyRing) -> RingValue:
        if self.current is not None and self.current.ambient is poly_ring:
            return self.current
        for rv in reversed(self.rings):
            if rv.ambient is poly_ring and not rv.is_quotient:
                return rv
        for rv in reversed(self.rings):
            if rv.ambient is poly_ring:
                return rv
        rv = RingValue("?", poly_ring, Ideal(poly_ring, []))
        self.rings.append(rv)
        return rv

    def lookup(self, node: lang.Name):
        name = node.ident
        if name in self.env:
            return self.env[name]
        if name == "true":
            return True
        if name == "false":
            return False
        if name == "infinity":
            return float("inf")
        if name == "inconclusive":
            return INCONCLUSIVE
        order = ([self.current] if self.current else []) + list(reversed(self.rings))
        for rv in order:
            if name in rv.ambient.index:
                return rv.ambient.var(name)
        if name in BUILTINS:
            raise ScriptError(f"{name} is a function; call it with parentheses", node.line, node.col)
        raise ScriptError(f"undefined identifier {name!r}", node.line, node.col)

    def to_poly(self, v, ring: PolyRing) -> Polynomial:
        if isinstance(v, Polynomial):
            if v.ring is not ring:
                raise ScriptError("polynomial belongs to a different ring")
            return v
        if isinstance(v, Fraction):
            return ring.constant(_mod(v, ring.p))
        if isinstance(v, bool) or not isinstance(v, int):
            raise ScriptError(f"expected a polynomial, got {format_value(v)}")
        return ring.constant(v % ring.p)

    def ideal_of(self, items, rv: RingValue | None = None) -> IdealValue:
        polys = [x for x in items if isinstance(x, Polynomial)]
        if rv is None:
            if polys:
                rv = self.ring_for(polys[0].ring)
            elif self.current is not None:
                rv = self.current
            else:
                raise ScriptError("no ring is active")
        S = rv.ambient
        gens = [self.to_poly(x, S) for x in items]
        return IdealValue(Ideal(S, gens + list(rv.defining.gens)), rv)

    def as_ideal(self, v) -> IdealValue:
        if isinstance(v, IdealValue):
            return v
        if isinstance(v, Polynomial):
            return self.ideal_of([v])
        if isinstance(v, (list, tuple)):
            return self.ideal_of(list(v))
        if isinstance(v, RingValue):
            return IdealValue(v.defining, RingValue(v.name, v.ambient, Ideal(v.ambient, [])))
        raise ScriptError(f"expected an ideal, got {format_value(v)}")

    def as_ring(self, v) -> RingValue:
        """A ring argument; an ideal J stands for ambient/J."""
        if isinstance(v, RingValue):
            return v
        if isinstance(v, IdealValue):
            return RingValue("?", v.pullback.ring, v.pullback)
        raise ScriptError(f"expected a ring, got {format_value(v)}")

    # ---- evaluation

    def eval(self, node):
        if isinstance(node, lang.Num):
            return node.value
        if isinstance(node, lang.Str):
            return node.value
        if isinstance(node, lang.Name):
            return self.lookup(node)
        if isinstance(node, lang.Neg):
            v = self.eval(node.operand)
            return self.binop("*", Fraction(-1), v, node)
        if isinstance(node, lang.BinOp):
            return self.binop(node.op, self.eval(node.left), self.eval(node.right), node)
        if isinstance(node, lang.ListLit):
            return [self.eval(x) for x in node.items]
        if isinstance(node, lang.Seq):
            return tuple(self.eval(x) for x in node.items)
        if isinstance(node, lang.Index):
            target = self.eval(node.target)
            idx = self.eval(node.index)
            if not isinstance(target, (list, tuple)) or not isinstance(idx, Fraction) or idx.denominator != 1:
                raise ScriptError("# needs a list and an integer index", node.line, node.col)
            k = int(idx)
            if not 0 <= k < len(target):
                raise ScriptError(f"index {k} out of range", node.line, node.col)
            return target[k]
        if isinstance(node, lang.Call):
            fn = BUILTINS.get(node.func)
            if fn is None:
                raise ScriptError(f"unknown function {node.func!r}", node.line, node.col)
            args = [self.eval(a) for a in node.args]
            opts = {}
            for k, v in node.options.items():
                opts[k] = self.eval(v)
            try:
                return fn(self, args, opts)
            except ScriptError as ex:
                if ex.line:
                    raise
                raise ScriptError(str(ex), node.line, node.col, node.func) from ex
            except (CharFrobError, ValueError, ArithmeticError, TypeError) as ex:
                raise ScriptError(f"{type(ex).__name__}: {ex}", node.line, node.col, node.func) from ex
        raise ScriptError(f"cannot evaluate {type(node).__name__}")

    def binop(self, op, a, b, node):
        try:
            return self._binop(op, a, b)
        except ScriptError as ex:
            if ex.line:
                raise
            raise ScriptError(str(ex), node.line, node.col) from ex
        except (CharFrobError, ValueError, ArithmeticError, TypeError) as ex:
            raise ScriptError(f"{type(ex).__name__}: {ex}", node.line, node.col) from ex

    def _binop(self, op, a, b):
        if op == "==":
            return values_equal(a, b)
        if op == "!=":
            return not values_equal(a, b)
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            if op == "+":
                return a + b
            if op == "-":
                return a - b
            if op == "*":
                return a * b
            if op == "/":
                if not b:
                    raise ScriptError("division by zero")
                return a / b
            if op == "^":
                if b.denominator != 1:
                    raise ScriptError("rational exponents of numbers are not supported")
                return a ** int(b)
        if isinstance(a, RingValue) and op == "/":
            J = self.as_ideal(b) if not isinstance(b, (Polynomial, tuple, list)) else self.ideal_of(
                list(b) if isinstance(b, (tuple, list)) else [b], a)
            rv = RingValue("?", a.ambient, Ideal(a.ambient, list(J.pullback.gens)))
            return rv
        if isinstance(a, Polynomial) or isinstance(b, Polynomial):
            if isinstance(a, (IdealValue, list, tuple)) or isinstance(b, (IdealValue, list, tuple)):
                pass
            else:
                ring = a.ring if isinstance(a, Polynomial) else b.ring
                if op == "^":
                    if not isinstance(b, Fraction) or b.denominator != 1 or b < 0:
                        raise ScriptError("polynomial exponents must be nonnegative integers")
                    return self.to_poly(a, ring) ** int(b)
                x, y = self.to_poly(a, ring), self.to_poly(b, ring)
                if op == "+":
                    return x + y
                if op == "-":
                    return x - y
                if op == "*":
                    return x * y
                if op == "/":
                    if not isinstance(b, Fraction) or not _mod(b, ring.p):
                        raise ScriptError("polynomials can only be divided by nonzero scalars")
                    return x * ring.constant(pow(_mod(b, ring.p), -1, ring.p))
        if isinstance(a, IdealValue) or isinstance(b, IdealValue):
            A = self.as_ideal(a) if not isinstance(a, Fraction) else None
            if op == "^" and isinstance(b, Fraction):
                J = A.pullback if not A.ring.is_quotient else A.pullback
                P = J ** int(b)
                return IdealValue((P + A.ring.defining) if A.ring.is_quotient else P, A.ring)
            if isinstance(a, (Fraction, Polynomial)) and op == "*":
                B = self.as_ideal(b)
                f = self.to_poly(a, B.pullback.ring)
                return IdealValue(Ideal(B.pullback.ring, [f * g for g in B.pullback.gens] + list(B.ring.defining.gens)), B.ring)
            B = self.as_ideal(b)
            if A.pullback.ring is not B.pullback.ring:
                raise ScriptError("ideals live in different rings")
            rv = A.ring if A.ring.is_quotient or not B.ring.is_quotient else B.ring
            I = rv.defining
            if op == "+":
                return IdealValue(A.pullback + B.pullback, rv)
            if op == "*":
                P = A.pullback * B.pullback
                return IdealValue(P + I if not I.is_zero() else P, rv)
            if op == ":":
                return IdealValue(A.pullback.quotient(B.pullback), rv)
        if isinstance(a, ModuleValue) and isinstance(b, ModuleValue) and op == "+":
            return ModuleValue(a.module + b.module)
        if isinstance(a, MatrixValue) and isinstance(b, MatrixValue) and op == "*":
            return MatrixValue(a.matrix * b.matrix)
        raise ScriptError(f"unsupported operation {format_value(a)} {op} {format_value(b)}")

    # ---- statements

    def execute(self, st):
        if isinstance(st, lang.RingDecl):
            self._ring_decl(st)
        elif isinstance(st, lang.Assign):
            v = self.eval(st.expr)
            if isinstance(v, RingValue):
                v = RingValue(st.name, v.ambient, v.defining)
                self.set_ring(v)
            self.env[st.name] = v
        elif isinstance(st, lang.Use):
            v = self.env.get(st.name)
            if not isinstance(v, RingValue):
                raise ScriptError(f"{st.name} is not a ring", st.line, st.col)
            self.set_ring(v)
        elif isinstance(st, lang.Print):
            self._emit(format_value(self.eval(st.expr)))
        elif isinstance(st, lang.ExprStmt):
            v = self.eval(st.expr)
            return v
        elif isinstance(st, lang.Expect):
            self._expect(st)
        return None

    def _ring_decl(self, st: lang.RingDecl):
        if st.base is not None:
            base = self.env.get(st.base)
            if not isinstance(base, RingValue):
                raise ScriptError(f"{st.base} is not a ring", st.line, st.col)
            S = base.ambient
            self.current = base
            extra = base.defining.gens
        else:
            try:
                S = PolyRing(st.p, st.variables)
            except ValueError as ex:
                raise ScriptError(str(ex), st.line, st.col) from ex
            rv0 = RingValue(st.name, S, Ideal(S, []))
            self.set_ring(rv0)
            extra = ()
        if st.quotient is not None:
            q = self.eval(st.quotient)
            if isinstance(q, IdealValue):
                gens = list(q.pullback.gens)
            elif isinstance(q, (tuple, list)):
                gens = [self.to_poly(x, S) for x in q]
            else:
                gens = [self.to_poly(q, S)]
            rv = RingValue(st.name, S, Ideal(S, list(extra) + gens))
        else:
            rv = RingValue(st.name, S, Ideal(S, list(extra)))
        self.env[st.name] = rv
        self.set_ring(rv)

    def _expect(self, st: lang.Expect):
        e = st.expr
        detail = ""
        try:
            if isinstance(e, lang.BinOp) and e.op in ("==", "!="):
                a, b = self.eval(e.left), self.eval(e.right)
                eq = values_equal(a, b)
                passed = eq if e.op == "==" else not eq
                if not passed:
                    detail = f"left:  {format_value(a)}\nright: {format_value(b)}"
            else:
                v = self.eval(e)
                passed = v is True
                if not passed:
                    detail = f"value: {format_value(v)}"
        except ScriptError:
            raise
        self.results.append(ExpectationResult(st.line, st.text, passed, detail))


def _mod(x: Fraction, p: int) -> int:
    if x.denominator % p == 0:
        raise ScriptError(f"{x} has no value modulo {p}")
    return x.numerator * pow(x.denominator, -1, p) % p


def values_equal(a, b) -> bool:
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b
    if isinstance(a, (list, tuple)) and isinstance(b, (list, tuple)):
        if all(isinstance(x, (IdealValue, ModuleValue)) for x in list(a) + list(b)) and (a or b):
            return all(any(values_equal(x, y) for y in b) for x in a) and all(
                any(values_equal(x, y) for y in a) for x in b)
        return len(a) == len(b) and all(values_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, Polynomial) and isinstance(b, Fraction):
        return a == a.ring.constant(_mod(b, a.ring.p))
    if isinstance(b, Polynomial) and isinstance(a, Fraction):
        return values_equal(b, a)
    if isinstance(a, IdealValue) and isinstance(b, IdealValue):
        return a.pullback.ring is b.pullback.ring and a.pullback == b.pullback
    if isinstance(a, float) or isinstance(b, float):
        return a == b
    return a == b


# ---------------------------------------------------------------------------
# builtins


BUILTINS: dict[str, Callable] = {}


def builtin(*names):
    def deco(fn):
        for n in names:
            BUILTINS[n] = fn
        return fn
    return deco


def _int(v, what="argument") -> int:
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    raise ScriptError(f"{what} must be an integer")


def _bool_opt(opts, key, default=False) -> bool:
    v = opts.get(key, default)
    if not isinstance(v, bool):
        raise ScriptError(f"option {key} must be true or false")
    return v


def _check_opts(opts, allowed):
    for k in opts:
        if k not in allowed:
            raise ScriptError(f"unknown option {k}")


def _flatten(args):
    out = []
    for a in args:
        if isinstance(a, (list, tuple)):
            out.extend(_flatten(a))
        else:
            out.append(a)
    return out


@builtin("ideal", "monomialIdeal")
def _ideal(ctx: Interpreter, args, opts):
    items = _flatten(args)
    if len(items) == 1 and isinstance(items[0], IdealValue):
        return items[0]
    if len(items) == 1 and isinstance(items[0], MatrixValue):
        return ctx.ideal_of([c for row in items[0].matrix.rows for c in row])
    return ctx.ideal_of(items)


@builtin("matrix")
def _matrix(ctx, args, opts):
    if len(args) != 1 or not isinstance(args[0], list) or not all(isinstance(r, list) for r in args[0]):
        raise ScriptError("matrix expects a list of rows, like matrix{{a, b}, {c, d}}")
    rows = args[0]
    polys = [x for r in rows for x in r if isinstance(x, Polynomial)]
    S = polys[0].ring if polys else (ctx.current.ambient if ctx.current else None)
    if S is None:
        raise ScriptError("no ring is active")
    return MatrixValue(Matrix(S, [[ctx.to_poly(x, S) for x in r] for r in rows]))


@builtin("minors")
def _minors(ctx, args, opts):
    k, M = _int(args[0]), args[1]
    if not isinstance(M, MatrixValue):
        raise ScriptError("minors(k, M) needs a matrix")
    J = minors(k, M.matrix)
    return ctx.ideal_of(list(J.gens), ctx.ring_for(M.matrix.ring))


@builtin("transpose")
def _transpose(ctx, args, opts):
    return MatrixValue(args[0].matrix.transpose())


@builtin("image")
def _image(ctx, args, opts):
    M = args[0]
    if not isinstance(M, MatrixValue):
        raise ScriptError("image expects a matrix")
    return ModuleValue(SubmoduleOfFree(M.matrix.ring, M.matrix.nrows, M.matrix.columns()))


@builtin("map")
def _map(ctx, args, opts):
    T, S, imgs = ctx.as_ring(args[0]), ctx.as_ring(args[1]), args[2]
    if len(imgs) != S.ambient.nvars:
        raise ScriptError("map needs one image per source variable")
    return RingMapValue(T, S, [ctx.to_poly(x, T.ambient) for x in imgs])


@builtin("ker")
def _ker(ctx, args, opts):
    f = args[0]
    if not isinstance(f, RingMapValue):
        raise ScriptError("ker expects a ring map")
    if f.target.is_quotient:
        raise ScriptError("kernels are supported for maps into polynomial rings")
    J = kernel_of_ring_map(f.source.ambient, f.images)
    return IdealValue(J, f.source)


@builtin("intersect")
def _intersect(ctx, args, opts):
    ids = [ctx.as_ideal(a) for a in _flatten(args)]
    J = ids[0].pullback.intersect(*[x.pullback for x in ids[1:]]) if len(ids) > 1 else ids[0].pullback
    return IdealValue(J, ids[0].ring)


@builtin("quotient")
def _quotient(ctx, args, opts):
    A, B = ctx.as_ideal(args[0]), ctx.as_ideal(args[1])
    return IdealValue(A.pullback.quotient(B.pullback), A.ring)


@builtin("saturate")
def _saturate(ctx, args, opts):
    A = ctx.as_ideal(args[0])
    f = args[1]
    return IdealValue(A.pullback.saturate(f), A.ring)


@builtin("trim")
def _trim(ctx, args, opts):
    A = ctx.as_ideal(args[0])
    return A


@builtin("mingens", "gens")
def _mingens(ctx, args, opts):
    A = ctx.as_ideal(args[0])
    I = A.ring.defining
    gens = A.pullback.trim().gens if A.pullback.is_homogeneous() else A.pullback.groebner_basis()
    return [g for g in gens if I.is_zero() or g not in I]


@builtin("substitute", "sub", "lift")
def _substitute(ctx, args, opts):
    A = ctx.as_ideal(args[0])
    rv = ctx.as_ring(args[1]) if len(args) > 1 else RingValue("?", A.pullback.ring, Ideal(A.pullback.ring, []))
    if rv.ambient is not A.pullback.ring:
        raise ScriptError("substitute only moves ideals between a ring and its ambient polynomial ring")
    J = A.pullback + rv.defining if rv.is_quotient else A.pullback
    return IdealValue(J, rv)


@builtin("dim")
def _dim(ctx, args, opts):
    v = args[0]
    J = v.defining if isinstance(v, RingValue) else ctx.as_ideal(v).pullback
    d = J.dimension()
    return Fraction(d) if d != float("-inf") else Fraction(-1)


@builtin("codim")
def _codim(ctx, args, opts):
    v = args[0]
    J = v.defining if isinstance(v, RingValue) else ctx.as_ideal(v).pullback
    c = J.codim()
    return Fraction(int(c)) if c != float("inf") else float("inf")


@builtin("isSubset")
def _is_subset(ctx, args, opts):
    A, B = ctx.as_ideal(args[0]), ctx.as_ideal(args[1])
    return B.pullback.contains(A.pullback)


@builtin("length", "#")
def _length(ctx, args, opts):
    return Fraction(len(args[0]))


@builtin("first")
def _first(ctx, args, opts):
    return args[0][0]


@builtin("toString")
def _to_string(ctx, args, opts):
    return format_value(args[0])


@builtin("numberOfTerms")
def _nterms(ctx, args, opts):
    return Fraction(len(args[0]))


@builtin("degree")
def _degree(ctx, args, opts):
    return Fraction(args[0].degree())


# ---- Frobenius


@builtin("frobenius")
def _frobenius(ctx, args, opts):
    e, x = (1, args[0]) if len(args) == 1 else (_int(args[0]), args[1])
    if isinstance(x, Polynomial):
        return x.frobenius_power(e)
    if isinstance(x, ModuleValue):
        return ModuleValue(frobenius_module(e, x.module))
    A = ctx.as_ideal(x)
    J = A.pullback.frobenius(e)
    return IdealValue(J + A.ring.defining if A.ring.is_quotient else J, A.ring)


@builtin("frobeniusPower")
def _frobenius_power(ctx, args, opts):
    t, A = args[0], ctx.as_ideal(args[1])
    if not isinstance(t, Fraction):
        raise ScriptError("frobeniusPower(t, I) needs a rational t")
    J = frobenius_power(t, A.pullback)
    return IdealValue(J, A.ring)


@builtin("frobeniusRoot")
def _frobenius_root(ctx, args, opts):
    e = _int(args[0], "level")
    if len(args) == 3:
        exps, polys = args[1], args[2]
        facs = [(_int(n, "exponent"), f) for n, f in zip(exps, polys)]
        J = frobenius_root_mult(e, facs)
        return ctx.ideal_of(list(J.gens), ctx.ring_for(J.ring))
    x = args[1]
    if isinstance(x, ModuleValue):
        return ModuleValue(submodule_root(e, x.module))
    if isinstance(x, MatrixValue):
        M = x.matrix
        return ModuleValue(submodule_root(e, SubmoduleOfFree(M.ring, M.nrows, M.columns())))
    A = ctx.as_ideal(x)
    J = frobenius_root(e, A.pullback)
    rv = ctx.ring_for(J.ring) if not A.ring.is_quotient else RingValue("?", J.ring, Ideal(J.ring, []))
    return IdealValue(J, rv)


# ---- Cartier data and chains


def _datum(ctx, e, us, ring: RingValue) -> cartier.CartierDatum:
    us = us if isinstance(us, (list, tuple)) else [us]
    return cartier.CartierDatum(ring.defining, e, [ctx.to_poly(u, ring.ambient) for u in us])


@builtin("ascendIdeal")
def _ascend_ideal(ctx, args, opts):
    e = _int(args[0], "level")
    J = ctx.as_ideal(args[2])
    d = _datum(ctx, e, args[1], J.ring)
    return IdealValue(cartier.ascend_ideal(d, J.pullback), J.ring)


@builtin("descendChain")
def _descend_chain(ctx, args, opts):
    e = _int(args[0], "level")
    J = ctx.as_ideal(args[2])
    d = _datum(ctx, e, args[1], J.ring)
    K, k = cartier.descend_chain(d, J.pullback)
    return [IdealValue(K, J.ring), Fraction(k)]


@builtin("ascendModule")
def _ascend_module(ctx, args, opts):
    e = _int(args[0], "level")
    A, U = args[1], args[2]
    if isinstance(A, MatrixValue):
        A = ModuleValue(SubmoduleOfFree(A.matrix.ring, A.matrix.nrows, A.matrix.columns()))
    if not isinstance(A, ModuleValue) or not isinstance(U, MatrixValue):
        raise ScriptError("ascendModule(e, A, U) needs a module (or matrix) A and a matrix U")
    return ModuleValue(cartier.ascend_module(e, A.module, U.matrix))


@builtin("testElement")
def _test_element(ctx, args, opts):
    _check_opts(opts, {"AssumeDomain"})
    rv = ctx.as_ring(args[0])
    return cartier.test_element(rv.defining, _bool_opt(opts, "AssumeDomain"), seed=ctx.seed)


@builtin("QGorensteinGenerator")
def _qgor(ctx, args, opts):
    e, rv = (_int(args[0]), ctx.as_ring(args[1])) if len(args) == 2 else (1, ctx.as_ring(args[0]))
    d = cartier.q_gorenstein_generator(e, rv.defining)
    if not d.principal:
        raise ScriptError("the colon module is not principal at this level")
    return d.multipliers[0]


@builtin("canonicalIdeal")
def _canonical(ctx, args, opts):
    rv = ctx.as_ring(args[0])
    can = homological.canonical_ideal(rv.defining, seed=ctx.seed)
    return IdealValue(can.pullback, rv)


@builtin("traceOnCanonical")
def _trace(ctx, args, opts):
    e, rv = _int(args[0]), ctx.as_ring(args[1])
    if len(args) > 2:
        Omega = ctx.as_ideal(args[2]).pullback
    else:
        Omega = homological.canonical_ideal(rv.defining, seed=ctx.seed).pullback
    d = cartier.trace_on_canonical(e, rv.defining, Omega)
    return d.multipliers[0] if d.principal else list(d.multipliers)


@builtin("isCohenMacaulay")
def _is_cm(ctx, args, opts):
    return homological.is_cohen_macaulay(ctx.as_ring(args[0]).defining)


@builtin("isIsomorphic")
def _is_iso(ctx, args, opts):
    A, B = ctx.as_ideal(args[0]), ctx.as_ideal(args[1])
    rv = A.ring if A.ring.is_quotient else B.ring
    return homological.ideals_isomorphic(A.pullback + rv.defining, B.pullback + rv.defining, rv.defining,
                                         seed=ctx.seed)


@builtin("Ext")
def _ext(ctx, args, opts):
    i, rv = _int(args[0]), ctx.as_ring(args[1])
    M = homological.ext_module(i, rv.defining)
    return MatrixValue(M.matrix()) if M.ngens else Fraction(0)


@builtin("frobeniusExtMap")
def _ext_map(ctx, args, opts):
    """{U, A}: the matrix of Ext^i(S/I, S) -> Ext^i(S/I^[p], S) and the relations of its source."""
    i, rv = _int(args[0]), ctx.as_ring(args[1])
    m = homological.frobenius_ext_map(i, rv.defining)
    S = rv.ambient
    A = SubmoduleOfFree(S, m.source.ngens, [list(v) for v in m.source.relations.gens])
    return [MatrixValue(m.matrix), ModuleValue(A)]


# ---- invariants


def _pair_args(ctx, args) -> tuple[RingValue, invariants.PairSpec | None]:
    """(R) or (t, f) or ({t1..}, {f1..}), optionally followed by a ring."""
    if len(args) == 1:
        return ctx.as_ring(args[0]), None
    if len(args) in (2, 3):
        ts, fs = args[0], args[1]
        if not isinstance(ts, list):
            ts, fs = [ts], [fs]
        polys = [f for f in fs if isinstance(f, Polynomial)]
        if not polys:
            raise ScriptError("pair needs polynomials")
        rv = ctx.as_ring(args[2]) if len(args) == 3 else ctx.ring_for(polys[0].ring)
        for t in ts:
            if not isinstance(t, Fraction):
                raise ScriptError("pair exponents must be rational numbers")
        return rv, invariants.PairSpec([(ctx.to_poly(f, rv.ambient), t) for t, f in zip(ts, fs)])
    raise ScriptError("expected (R) or (t, f)")


@builtin("testModule")
def _test_module(ctx, args, opts):
    _check_opts(opts, {"AssumeDomain"})
    rv, pair = _pair_args(ctx, args)
    r = invariants.test_module(rv.defining, pair, seed=ctx.seed, assume_domain=_bool_opt(opts, "AssumeDomain"))
    return [IdealValue(r.tau, rv), IdealValue(r.omega, rv), DatumValue(r.trace)]


@builtin("testIdeal")
def _test_ideal(ctx, args, opts):
    _check_opts(opts, {"AssumeDomain", "MaxCartierIndex", "QGorensteinIndex"})
    rv, pair = _pair_args(ctx, args)
    qi = opts.get("QGorensteinIndex")
    tau = invariants.test_ideal(rv.defining, pair, seed=ctx.seed, assume_domain=_bool_opt(opts, "AssumeDomain"),
                                max_cartier_index=_int(opts.get("MaxCartierIndex", Fraction(10))),
                                q_gorenstein_index=_int(qi) if isinstance(qi, Fraction) else None)
    return IdealValue(tau, rv)


@builtin("parameterTestIdeal")
def _ptest(ctx, args, opts):
    _check_opts(opts, {"AssumeDomain"})
    rv = ctx.as_ring(args[0])
    J = invariants.parameter_test_ideal(rv.defining, seed=ctx.seed, assume_domain=_bool_opt(opts, "AssumeDomain"))
    return IdealValue(J, rv)


@builtin("FPureModule")
def _fpure_module(ctx, args, opts):
    rv, pair = _pair_args(ctx, args)
    r = invariants.f_pure_module(rv.defining, pair, seed=ctx.seed)
    return [IdealValue(r.sigma, rv), IdealValue(r.omega, rv), DatumValue(r.trace), Fraction(r.hsl_number)]


@builtin("level")
def _level(ctx, args, opts):
    f = args[0]
    if not isinstance(f, Polynomial):
        raise ScriptError("level expects a polynomial")
    return Fraction(invariants.level(f))


@builtin("isFPure")
def _is_f_pure(ctx, args, opts):
    _check_opts(opts, {"AtOrigin"})
    rv = ctx.as_ring(args[0])
    return invariants.is_f_pure(rv.defining, at_origin=_bool_opt(opts, "AtOrigin"))


@builtin("isFRegular")
def _is_f_regular(ctx, args, opts):
    _check_opts(opts, {"AtOrigin", "DepthOfSearch", "QGorensteinIndex", "MaxCartierIndex", "AssumeDomain"})
    rv, pair = _pair_args(ctx, args)
    qi = opts.get("QGorensteinIndex")
    if isinstance(qi, Fraction):
        qi = _int(qi)
    r = invariants.is_f_regular(
        rv.defining, pair, at_origin=_bool_opt(opts, "AtOrigin"),
        depth_of_search=_int(opts.get("DepthOfSearch", Fraction(invariants.DEPTH_OF_SEARCH))),
        q_gorenstein_index=qi, max_cartier_index=_int(opts.get("MaxCartierIndex", Fraction(10))),
        assume_domain=_bool_opt(opts, "AssumeDomain"), seed=ctx.seed)
    return INCONCLUSIVE if r is None else r


@builtin("isFRational")
def _is_f_rational(ctx, args, opts):
    _check_opts(opts, {"AssumeCM", "AssumeDomain", "AtOrigin"})
    rv = ctx.as_ring(args[0])
    return invariants.is_f_rational(rv.defining, assume_cm=_bool_opt(opts, "AssumeCM"),
                                    assume_domain=_bool_opt(opts, "AssumeDomain"),
                                    at_origin=_bool_opt(opts, "AtOrigin"), seed=ctx.seed)


@builtin("isFInjective")
def _is_f_injective(ctx, args, opts):
    _check_opts(opts, {"AssumeCM", "AssumeReduced", "AssumeNormal", "AtOrigin", "CanonicalStrategy"})
    strategy = opts.get("CanonicalStrategy", "Katzman")
    if strategy not in ("Katzman", None):
        raise ScriptError("only CanonicalStrategy => \"Katzman\" is supported")
    rv = ctx.as_ring(args[0])
    return invariants.is_f_injective(rv.defining, assume_cm=_bool_opt(opts, "AssumeCM"),
                                     assume_reduced=_bool_opt(opts, "AssumeReduced", True),
                                     assume_normal=_bool_opt(opts, "AssumeNormal"),
                                     at_origin=_bool_opt(opts, "AtOrigin"), seed=ctx.seed)


# ---- decompositions


@builtin("compatibleIdeals")
def _compatible(ctx, args, opts):
    u = args[0]
    e = _int(args[1]) if len(args) > 1 else 1
    if not isinstance(u, Polynomial):
        raise ScriptError("compatibleIdeals expects a polynomial")
    res = decompose.compatible_ideals(u, e, seed=ctx.seed)
    rv = ctx.ring_for(u.ring)
    return [IdealValue(P, rv) for P in res.ideals]


@builtin("quotientBy")
def _quotient_by(ctx, args, opts):
    L, om = args[0], ctx.as_ideal(args[1])
    ids = [ctx.as_ideal(x).pullback for x in L]
    return [IdealValue(J, om.ring) for J in decompose.quotient_by(ids, om.pullback)]


@builtin("minimalPrimes")
def _min_primes(ctx, args, opts):
    A = ctx.as_ideal(args[0])
    rep = decompose.minimal_primes(A.pullback, seed=ctx.seed)
    rv = RingValue("?", A.pullback.ring, Ideal(A.pullback.ring, [])) if A.ring.is_quotient else A.ring
    return [IdealValue(P, rv) for P in rep.primes]


@builtin("factor")
def _factor(ctx, args, opts):
    f = args[0]
    facs, _ = decompose.factor_polynomial(f, seed=ctx.seed)
    return [[g, Fraction(k)] for g, k in facs]


@builtin("isPrime")
def _is_prime(ctx, args, opts):
    A = ctx.as_ideal(args[0])
    rep = decompose.minimal_primes(A.pullback, seed=ctx.seed)
    return len(rep.primes) == 1 and rep.primes[0] == A.pullback and rep.all_certified


BUILTIN_NAMES = set(BUILTINS)

"""Sparse multivariate polynomials over QQ or GF(p).

A :class:`Polynomial` maps dense exponent tuples to nonzero coefficients.
Instances are treated as immutable; every operation returns a new object.

Text format (whitespace-insensitive)::

    expr   := ['-'] term (('+'|'-') term)*
    term   := coeff ['*' factor ('*' factor)*] | factor ('*' factor)*
    factor := var ['^' uint]
    coeff  := int ['/' uint]

Serialization lists terms in descending degrevlex order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .arith import GF, QQ
from .errors import ContextMismatch, ParseError

Exponent = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class VarContext:
    names: tuple = dc_field()

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be unique")
        for name in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ValueError(f"bad variable name {name!r}")

    @classmethod
    def numbered(cls, n: int, prefix: str = "x", start: int = 1) -> "VarContext":
        return cls(tuple(f"{prefix}{i}" for i in range(start, start + n)))

    @cached_property
    def index(self) -> dict:
        return {name: i for i, name in enumerate(self.names)}

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)


def degrevlex_key(e: Exponent):
    """Sort key; larger key means larger monomial in degrevlex."""
    return (sum(e), tuple(-a for a in reversed(e)))


def monomials_of_degree(n: int, d: int) -> list:
    """All exponent tuples of total degree ``d`` in ``n`` variables, descending degrevlex."""
    if d < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=degrevlex_key, reverse=True)
    return out


def _coerce_field(field):
    if field is None:
        return QQ
    if isinstance(field, int):
        return GF(field)
    return field


class Polynomial:
    __slots__ = ("ctx", "field", "terms", "__weakref__")

    def __init__(self, ctx: VarContext, terms: Mapping | None = None, field=QQ):
        field = _coerce_field(field)
        self.ctx = ctx
        self.field = field
        clean = {}
        n = len(ctx)
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ContextMismatch(f"exponent {e} has wrong length for {n} variables")
            c = field.convert(c)
            if c:
                clean[e] = field.add(clean[e], c) if e in clean else c
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    @classmethod
    def _raw(cls, ctx, terms, field):
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.field = field
        obj.terms = terms
        return obj

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, ctx, field=QQ):
        return cls._raw(ctx, {}, _coerce_field(field))

    @classmethod
    def constant(cls, ctx, c, field=QQ):
        return cls(ctx, {(0,) * len(ctx): c}, field)

    @classmethod
    def var(cls, ctx, name, field=QQ):
        i = ctx.index[name] if isinstance(name, str) else int(name)
        e = [0] * len(ctx)
        e[i] = 1
        return cls(ctx, {tuple(e): 1}, field)

    @classmethod
    def gens(cls, ctx, field=QQ):
        return [cls.var(ctx, i, field) for i in range(len(ctx))]

    # -- basic queries --------------------------------------------------
    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def nvars(self) -> int:
        return len(self.ctx)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def variables(self) -> set:
        used = set()
        for e in self.terms:
            used.update(self.ctx.names[i] for i, a in enumerate(e) if a)
        return used

    def coefficient(self, e) -> object:
        return self.terms.get(tuple(e), self.field.convert(0))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: degrevlex_key(t[0]), reverse=True)

    def leading_term(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms.items(), key=lambda t: degrevlex_key(t[0]))

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "Polynomial"):
        if other.ctx != self.ctx:
            raise ContextMismatch("polynomials live in different variable contexts")
        if other.field != self.field:
            raise ContextMismatch(f"coefficient fields differ: {self.field} vs {other.field}")

    def _lift(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.ctx, other, self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        f = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = f.add(out[e], c) if e in out else c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.ctx, out, f)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return Polynomial._raw(self.ctx, {e: f.neg(c) for e, c in self.terms.items()}, f)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        f = self.field
        c = f.convert(c)
        if not c:
            return Polynomial.zero(self.ctx, f)
        return Polynomial._raw(self.ctx, {e: f.mul(a, c) for e, a in self.terms.items()}, f)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        f = self.field
        out: dict = {}
        if isinstance(f, GF):
            p = f.p
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = (out.get(e, 0) + c1 * c2) % p
        else:
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw(self.ctx, {e: c for e, c in out.items() if c}, f)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = Polynomial.constant(self.ctx, 1, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.ctx, other, self.field)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ctx == other.ctx and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, self.field, frozenset(self.terms.items())))

    # -- calculus, evaluation, substitution -------------------------------
    def differentiate(self, v) -> "Polynomial":
        i = self.ctx.index[v] if isinstance(v, str) else int(v)
        f = self.field
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                d = f.mul(c, f.convert(e[i]))
                if d:
                    out[e[:i] + (e[i] - 1,) + e[i + 1:]] = d
        return Polynomial._raw(self.ctx, out, f)

    def evaluate(self, point: Sequence, p: int | None = None):
        """Value at ``point``: a residue mod ``p``, or an exact rational when ``p`` is None."""
        if len(point) != self.nvars:
            raise ContextMismatch(f"point has {len(point)} coordinates, expected {self.nvars}")
        if p is None and isinstance(self.field, GF):
            p = self.field.p
        if p is None:
            total = Fraction(0)
            for e, c in self.terms.items():
                t = c
                for x, a in zip(point, e):
                    if a:
                        t *= Fraction(x) ** a
                total += t
            return total
        gf = self.field if isinstance(self.field, GF) and self.field.p == p else GF(p)
        pt = [gf.convert(x) for x in point]
        total = 0
        for e, c in self.terms.items():
            t = gf.convert(c)
            for x, a in zip(pt, e):
                if a:
                    t = t * pow(x, a, p) % p
            total += t
        return total % p

    def substitute(self, images: Mapping, ctx: VarContext | None = None) -> "Polynomial":
        """Replace variables by polynomials living in ``ctx``.

        ``images`` maps variable names to polynomials; unmapped variables must
        exist by name in ``ctx``.
        """
        ctx = ctx or self.ctx
        f = self.field
        imgs = []
        for name in self.ctx.names:
            if name in images:
                img = images[name]
                if img.ctx != ctx or img.field != f:
                    raise ContextMismatch(f"image of {name} lives elsewhere")
                imgs.append(img)
            elif name in ctx.index:
                imgs.append(Polynomial.var(ctx, name, f))
            else:
                imgs.append(None)
        powers: dict = {}

        def power(i, a):
            key = (i, a)
            if key not in powers:
                powers[key] = imgs[i] ** a
            return powers[key]

        out = Polynomial.zero(ctx, f)
        for e, c in self.terms.items():
            t = Polynomial.constant(ctx, c, f)
            for i, a in enumerate(e):
                if a:
                    if imgs[i] is None:
                        raise ContextMismatch(f"no image for variable {self.ctx.names[i]}")
                    t = t * power(i, a)
            out = out + t
        return out

    def to_field(self, field) -> "Polynomial":
        field = _coerce_field(field)
        if field == self.field:
            return self
        if isinstance(self.field, GF) and field == QQ:
            return Polynomial(self.ctx, {e: self.field.symmetric(c) for e, c in self.terms.items()}, QQ)
        return Polynomial(self.ctx, self.terms, field)

    def coefficient_vector(self, monomials: Sequence) -> list:
        zero = self.field.convert(0)
        return [self.terms.get(m, zero) for m in monomials]

    # -- text -------------------------------------------------------------
    def _monomial_str(self, e) -> str:
        parts = []
        for name, a in zip(self.ctx.names, e):
            if a == 1:
                parts.append(name)
            elif a > 1:
                parts.append(f"{name}^{a}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for k, (e, c) in enumerate(self.sorted_terms()):
            c = Fraction(self.field.symmetric(c)) if isinstance(self.field, GF) else Fraction(c)
            neg = c < 0
            c = -c if neg else c
            mono = self._monomial_str(e)
            if not mono:
                body = str(c)
            elif c == 1:
                body = mono
            else:
                body = f"{c}*{mono}"
            if k == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, field={self.field!r})"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while text[pos:].strip():
        m = _TOKEN.match(text, pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("id", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ctx: VarContext):
        self.toks = _tokenize(text)
        self.i = 0
        self.ctx = ctx

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind}, found {what}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        if self.peek()[0] == "end":
            raise ParseError("empty input", 0)
        terms = []
        sign = 1
        if self.peek()[0] == "-":
            self.take()
            sign = -1
        terms.append(self.term(sign))
        while self.peek()[0] in "+-":
            sign = 1 if self.take()[0] == "+" else -1
            terms.append(self.term(sign))
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return terms

    def term(self, sign):
        n = len(self.ctx)
        coeff = Fraction(sign)
        e = [0] * n
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            num = tok[1]
            if self.peek()[0] == "/":
                self.take()
                den = self.take("int")
                if den[1] == 0:
                    raise ParseError("zero denominator", den[2])
                coeff *= Fraction(num, den[1])
            else:
                coeff *= num
            if self.peek()[0] != "*":
                return tuple(e), coeff
            self.take("*")
        self.factor(e)
        while self.peek()[0] == "*":
            self.take()
            self.factor(e)
        return tuple(e), coeff

    def factor(self, e):
        tok = self.peek()
        if tok[0] != "id":
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected variable, found {what}", tok[2])
        self.take()
        if tok[1] not in self.ctx.index:
            raise ParseError(f"unknown variable {tok[1]!r}", tok[2])
        k = 1
        if self.peek()[0] == "^":
            self.take()
            nxt = self.peek()
            if nxt[0] != "int":
                raise ParseError("malformed exponent", nxt[2])
            k = self.take()[1]
        e[self.ctx.index[tok[1]]] += k


def parse_poly(text: str, ctx: VarContext, field=QQ) -> Polynomial:
    field = _coerce_field(field)
    terms: dict = {}
    for e, c in _Parser(text, ctx).expr():
        terms[e] = terms.get(e, 0) + c
    return Polynomial(ctx, {e: c for e, c in terms.items() if c}, field)


def linear_form(ctx: VarContext, coeffs: Iterable, field=QQ) -> Polynomial:
    n = len(ctx)
    terms = {}
    for i, c in enumerate(coeffs):
        e = [0] * n
        e[i] = 1
        terms[tuple(e)] = c
    return Polynomial(ctx, terms, field)


def random_form(ctx: VarContext, degree: int, field: GF, rng) -> Polynomial:
    """Homogeneous form with uniform GF(p) coefficients drawn from ``rng``."""
    mons = monomials_of_degree(len(ctx), degree)
    return Polynomial(ctx, {m: rng.randrange(field.p) for m in mons}, field)

"""Buchberger's algorithm over GF(p) with smoothness certificates.

Internally a monomial is packed into one Python int::

    code = (order_key << n*W) | exponents

``order_key`` is a linear function of the exponents whose integer order is
the monomial order (prefix sums for degrevlex, the exponents themselves for
lex), so comparing codes compares monomials and multiplying monomials adds
codes. The low half carries the raw exponents with a guard bit per field
for branch-free divisibility tests.
"""
from __future__ import annotations

import enum
import hashlib
import heapq
import json
import logging
import os
import tempfile
from dataclasses import dataclass, field as dc_field
from itertools import product
from pathlib import Path

from .arith import GF
from .errors import BadPrime, ContextMismatch, NotHomogeneous
from .poly import Polynomial, VarContext, parse_poly

log = logging.getLogger(__name__)

_W = 16
_MAX_EXP = (1 << (_W - 1)) - 1


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "degrevlex"

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")


class _Codec:
    def __init__(self, n: int, order: MonomialOrder):
        self.n = n
        self.order = order
        self.shift = n * _W
        self.lowmask = (1 << self.shift) - 1
        self.guard = sum(1 << (_W * i + _W - 1) for i in range(n))
        self.fmask = (1 << _W) - 1

    def encode(self, e) -> int:
        n = self.n
        if max(e, default=0) > _MAX_EXP or sum(e) > _MAX_EXP:
            raise OverflowError("exponent too large for the packed representation")
        low = 0
        for i, a in enumerate(e):
            low |= a << (_W * i)
        key = 0
        if self.order.kind == "degrevlex":
            s = 0
            for i, a in enumerate(e):
                s += a
                key |= s << (_W * i)
        else:
            for i, a in enumerate(e):
                key |= a << (_W * (n - 1 - i))
        return (key << self.shift) | low

    def decode(self, code: int) -> tuple:
        low = code & self.lowmask
        f = self.fmask
        return tuple((low >> (_W * i)) & f for i in range(self.n))

    def degree(self, code: int) -> int:
        if self.order.kind == "degrevlex":
            return (code >> (self.shift + _W * (self.n - 1))) & self.fmask
        return sum(self.decode(code))

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return (((b & self.lowmask) | g) - (a & self.lowmask)) & g == g

    def lcm(self, a: int, b: int) -> int:
        return self.encode(tuple(max(x, y) for x, y in zip(self.decode(a), self.decode(b))))

    def coprime(self, a: int, b: int) -> bool:
        return all(not (x and y) for x, y in zip(self.decode(a), self.decode(b)))


class _Elem:
    __slots__ = ("lm", "low", "tail", "sugar")

    def __init__(self, lm, tail, sugar, codec):
        self.lm = lm
        self.low = lm & codec.lowmask
        self.tail = tail  # list of (code, coeff), descending
        self.sugar = sugar


def _to_dict(f: Polynomial, codec: _Codec) -> dict:
    return {codec.encode(e): c for e, c in f.terms.items()}


def _from_dict(d: dict, codec: _Codec, ctx: VarContext, field: GF) -> Polynomial:
    return Polynomial._raw(ctx, {codec.decode(m): c for m, c in d.items()}, field)


def _normal_form(f: dict, basis: list, codec: _Codec, p: int) -> dict:
    """Full reduction of ``f`` (consumed) modulo ``basis`` (monic elements)."""
    guard, lowmask = codec.guard, codec.lowmask
    heap = [-m for m in f]
    heapq.heapify(heap)
    rem = {}
    reducers = [(b.low, b) for b in basis]
    while heap:
        m = -heapq.heappop(heap)
        c = f.pop(m, 0)
        if not c:
            continue
        mlow = (m & lowmask) | guard
        red = None
        for low, b in reducers:
            if (mlow - low) & guard == guard:
                red = b
                break
        if red is None:
            rem[m] = c
            continue
        shift = m - red.lm
        for gm, gc in red.tail:
            nm = gm + shift
            old = f.get(nm)
            if old is None:
                v = -c * gc % p
                if v:
                    f[nm] = v
                    heapq.heappush(heap, -nm)
            else:
                v = (old - c * gc) % p
                if v:
                    f[nm] = v
                else:
                    del f[nm]
    return rem


def _make_elem(d: dict, sugar: int, codec: _Codec, p: int) -> _Elem:
    items = sorted(d.items(), reverse=True)
    lm, lc = items[0]
    inv = pow(lc, -1, p)
    tail = [(m, c * inv % p) for m, c in items[1:]]
    return _Elem(lm, tail, sugar, codec)


def _spoly(a: _Elem, b: _Elem, lcm: int, p: int) -> dict:
    sa, sb = lcm - a.lm, lcm - b.lm
    d = {m + sa: c for m, c in a.tail}
    for m, c in b.tail:
        k = m + sb
        v = (d.get(k, 0) - c) % p
        if v:
            d[k] = v
        else:
            d.pop(k, None)
    return d


@dataclass
class _Stats:
    pairs: int = 0
    zero_reductions: int = 0
    skipped_by_cap: int = 0


def _buchberger(polys: list, codec: _Codec, p: int, degree_cap: int | None):
    G: list = []
    active: list = []
    B: list = []  # heap of (sugar, lcm, i, j)
    stats = _Stats()
    complete = True

    def update(h_idx: int):
        nonlocal B, active
        h = G[h_idx]
        C = [(g, codec.lcm(G[g].lm, h.lm)) for g in active]
        D = []
        while C:
            g1, l1 = C.pop()
            if codec.coprime(G[g1].lm, h.lm):
                D.append((g1, l1, True))
                continue
            if any(codec.divides(l2, l1) for _, l2 in C) or any(codec.divides(l2, l1) for _, l2, _c in D):
                continue
            D.append((g1, l1, False))
        hlm = h.lm
        kept = []
        for s, l, i, j in B:
            if (codec.divides(hlm, l) and codec.lcm(G[i].lm, hlm) != l
                    and codec.lcm(G[j].lm, hlm) != l):
                continue
            kept.append((s, l, i, j))
        hdeg = codec.degree(hlm)
        for g1, l1, cop in D:
            if cop:
                continue
            ldeg = codec.degree(l1)
            sug = max(G[g1].sugar + ldeg - codec.degree(G[g1].lm), h.sugar + ldeg - hdeg)
            kept.append((sug, l1, g1, h_idx))
        heapq.heapify(kept)
        B = kept
        active = [g for g in active if not codec.divides(hlm, G[g].lm)] + [h_idx]

    def add(d: dict, sugar: int):
        G.append(_make_elem(d, sugar, codec, p))
        update(len(G) - 1)

    for d in sorted(polys, key=lambda d: max(d)):
        sugar = max(codec.degree(m) for m in d)
        r = _normal_form(dict(d), [G[i] for i in active], codec, p)
        if r:
            add(r, sugar)

    while B:
        sugar, l, i, j = heapq.heappop(B)
        if degree_cap is not None and codec.degree(l) > degree_cap:
            stats.skipped_by_cap += 1
            complete = False
            continue
        stats.pairs += 1
        s = _spoly(G[i], G[j], l, p)
        if not s:
            stats.zero_reductions += 1
            continue
        r = _normal_form(s, [G[k] for k in active], codec, p)
        if not r:
            stats.zero_reductions += 1
            continue
        add(r, sugar)

    # interreduce the minimal basis into the reduced one
    basis = [G[i] for i in active]
    reduced = []
    for b in basis:
        others = [o for o in basis if o is not b]
        tail = _normal_form(dict(b.tail), others, codec, p)
        reduced.append(_Elem(b.lm, sorted(tail.items(), reverse=True), b.sugar, codec))
    reduced.sort(key=lambda e: e.lm)
    return reduced, complete, stats


@dataclass
class GroebnerBasis:
    generators: list
    order: MonomialOrder
    p: int
    reduced: bool = True
    complete: bool = True
    stats: dict = dc_field(default_factory=dict)

    @property
    def ctx(self) -> VarContext:
        return self.generators[0].ctx if self.generators else None

    def leading_monomials(self) -> list:
        codec = _Codec(len(self.ctx), self.order)
        return [codec.decode(max(codec.encode(e) for e in g.terms)) for g in self.generators]

    def leading_term(self, g: Polynomial):
        codec = _Codec(len(g.ctx), self.order)
        code = max(codec.encode(e) for e in g.terms)
        e = codec.decode(code)
        return e, g.terms[e]

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def _prepare(gens: list, p: int | None):
    gens = [g for g in gens]
    if not gens:
        raise ValueError("empty generator list")
    ctx = gens[0].ctx
    fields = {g.field for g in gens}
    gf_fields = [f for f in fields if isinstance(f, GF)]
    if len(gf_fields) > 1 or (gf_fields and p is not None and gf_fields[0].p != p):
        raise ContextMismatch("generators live over different coefficient fields")
    if p is None:
        if not gf_fields:
            raise ValueError("a prime is required for rational generators")
        p = gf_fields[0].p
    gf = GF(p)
    out = []
    for g in gens:
        if g.ctx != ctx:
            raise ContextMismatch("generators live in different variable contexts")
        out.append(g.to_field(gf))
    return out, ctx, gf


def _cache_key(gens, order, p, degree_cap) -> str:
    blob = json.dumps({"vars": list(gens[0].ctx.names), "gens": [str(g) for g in gens],
                       "order": order.kind, "p": p, "cap": degree_cap}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _cache_load(cache_dir, key, ctx, gf, order):
    path = Path(cache_dir) / f"{key}.json"
    if not path.exists():
        return None
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None
    gens = [parse_poly(s, ctx, gf) for s in doc["basis"]]
    return GroebnerBasis(gens, order, gf.p, True, doc["complete"], doc.get("stats", {}))


def _cache_store(cache_dir, key, gb: GroebnerBasis):
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    doc = {"basis": [str(g) for g in gb.generators], "complete": gb.complete,
           "order": gb.order.kind, "p": gb.p, "stats": gb.stats}
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(doc, fh)
    os.replace(tmp, cache_dir / f"{key}.json")


def buchberger(gens: list, order: MonomialOrder = DEGREVLEX, p: int | None = None,
               degree_cap: int | None = None, cache_dir=None) -> GroebnerBasis:
    """Reduced Groebner basis over GF(p).

    Pairs are selected by sugar degree and pruned with the Gebauer-Moeller
    criteria. With ``degree_cap`` set, S-pairs above the cap are skipped and
    the result is flagged ``complete=False``.
    """
    gens, ctx, gf = _prepare(gens, p)
    key = None
    if cache_dir is not None:
        key = _cache_key(gens, order, gf.p, degree_cap)
        hit = _cache_load(cache_dir, key, ctx, gf, order)
        if hit is not None:
            log.debug("groebner cache hit %s", key[:12])
            return hit
    codec = _Codec(len(ctx), order)
    dicts = [_to_dict(g, codec) for g in gens if not g.is_zero()]
    if dicts:
        basis, complete, stats = _buchberger(dicts, codec, gf.p, degree_cap)
    else:
        basis, complete, stats = [], True, _Stats()
    polys = [_from_dict({b.lm: 1, **dict(b.tail)}, codec, ctx, gf) for b in basis]
    gb = GroebnerBasis(polys, order, gf.p, True, complete,
                       {"pairs": stats.pairs, "zero_reductions": stats.zero_reductions,
                        "skipped_by_cap": stats.skipped_by_cap})
    if cache_dir is not None:
        _cache_store(cache_dir, key, gb)
    return gb


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    gf = GF(gb.p)
    if isinstance(f.field, GF) and f.field.p != gb.p:
        raise ContextMismatch("polynomial and basis live over different fields")
    f = f.to_field(gf)
    if not gb.generators:
        return f
    if f.ctx != gb.ctx:
        raise ContextMismatch("polynomial and basis live in different contexts")
    codec = _Codec(len(f.ctx), gb.order)
    elems = [_make_elem(_to_dict(g, codec), 0, codec, gb.p) for g in gb.generators]
    return _from_dict(_normal_form(_to_dict(f, codec), elems, codec, gb.p), codec, f.ctx, gf)


def s_polynomials_reduce_to_zero(gb: GroebnerBasis) -> bool:
    """Independent re-check of Buchberger's criterion on every pair of ``gb``."""
    if not gb.generators:
        return True
    ctx = gb.ctx
    codec = _Codec(len(ctx), gb.order)
    elems = [_make_elem(_to_dict(g, codec), 0, codec, gb.p) for g in gb.generators]
    for a in range(len(elems)):
        for b in range(a + 1, len(elems)):
            l = codec.lcm(elems[a].lm, elems[b].lm)
            s = _spoly(elems[a], elems[b], l, gb.p)
            if s and _normal_form(s, elems, codec, gb.p):
                return False
    return True


def _check_homogeneous(gens):
    if any(not g.is_homogeneous() for g in gens):
        raise NotHomogeneous("expected homogeneous generators")


def is_empty_projective(gens: list, p: int | None = None, cache_dir=None, gb: GroebnerBasis | None = None) -> bool:
    """True iff the projective zero set of ``gens`` over the algebraic closure is empty."""
    _check_homogeneous(gens)
    if gb is None:
        gb = buchberger(gens, DEGREVLEX, p, cache_dir=cache_dir)
    if not gb.complete:
        raise ValueError("emptiness needs a complete basis")
    if not gb.generators:
        return False
    n = len(gb.ctx)
    pure = set()
    for e in gb.leading_monomials():
        support = [i for i, a in enumerate(e) if a]
        if len(support) == 1:
            pure.add(support[0])
        elif not support:
            return True  # unit ideal
    return len(pure) == n


class Verdict(str, enum.Enum):
    SMOOTH = "SMOOTH"
    SINGULAR = "SINGULAR"
    INDETERMINATE = "INDETERMINATE"


@dataclass
class SmoothnessResult:
    verdict: Verdict
    p: int
    basis_size: int
    witness: tuple | None = None
    witness_over_q: bool = False
    note: str = ""

    def as_dict(self):
        return {"verdict": self.verdict.value, "p": self.p, "basis_size": self.basis_size,
                "witness": list(self.witness) if self.witness else None,
                "witness_over_q": self.witness_over_q, "note": self.note}


_SMOOTH_NOTE = ("the singular locus is cut out by the partials (Euler relation, p does not divide "
                "the degree); its reduction mod p is empty, and since the singular subscheme is "
                "projective over Z an empty fiber at p forces an empty generic fiber, so the "
                "characteristic-0 hypersurface with these integer coefficients is smooth")


def _witness_search(F: Polynomial, partials: list, p: int, box: int):
    """Small integer points where every partial vanishes (exactly over QQ when possible)."""
    n = F.nvars
    over_q = not isinstance(F.field, GF)
    for pt in product(range(-box, box + 1), repeat=n):
        if not any(pt):
            continue
        lead = next(x for x in pt if x)
        if lead < 0:
            continue
        if over_q:
            if all(d.evaluate(pt) == 0 for d in partials):
                return pt, True
        elif all(d.evaluate(pt, p) == 0 for d in partials):
            return pt, False
    return None, False


def smoothness_certificate(F: Polynomial, p: int, cache_dir=None, witness_box: int = 2) -> SmoothnessResult:
    """SMOOTH / SINGULAR / INDETERMINATE verdict for the hypersurface ``{F = 0}``.

    SMOOTH means the partial derivatives have no common projective zero over
    the closure of GF(p). SINGULAR needs an exact rational witness point.
    """
    if not F.is_homogeneous() or F.is_zero():
        raise NotHomogeneous("expected a nonzero homogeneous form")
    d = F.degree()
    if p == 2 or d % p == 0:
        raise BadPrime(f"p={p} is even or divides the degree {d}")
    if isinstance(F.field, GF) and F.field.p != p:
        raise ContextMismatch(f"F is defined over GF({F.field.p}), not GF({p})")
    gf = GF(p)
    partials_p = [F.to_field(gf).differentiate(i) for i in range(F.nvars)]
    nonzero = [g for g in partials_p if not g.is_zero()]
    if not nonzero:
        gb = None
        empty = False
    else:
        gb = buchberger(nonzero, DEGREVLEX, p, cache_dir=cache_dir)
        empty = is_empty_projective(nonzero, gb=gb)
    size = len(gb) if gb else 0
    if empty:
        return SmoothnessResult(Verdict.SMOOTH, p, size, note=_SMOOTH_NOTE)
    partials = [F.differentiate(i) for i in range(F.nvars)]
    pt, over_q = _witness_search(F, partials, p, witness_box)
    if pt is not None and over_q:
        return SmoothnessResult(Verdict.SINGULAR, p, size, pt, True,
                                "all partials vanish at an integer point (checked exactly over QQ)")
    note = "singular over GF(p) but no characteristic-0 witness found"
    return SmoothnessResult(Verdict.INDETERMINATE, p, size, pt, False, note)

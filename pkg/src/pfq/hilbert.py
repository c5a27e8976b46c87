"""Hilbert functions and polynomials of homogeneous ideals over GF(p).

Everything is read off the leading-term ideal of a degrevlex Groebner basis.
The Hilbert series numerator of that monomial ideal comes from the pivot
recursion ``N(I) = N(I + (m)) + t^deg(m) N(I : m)``.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .arith import GF
from ._io import load_json_source
from .errors import DegenerateSlicing, Inconclusive, NotACurve, NotHomogeneous
from .groebner import DEGREVLEX, buchberger
from .linalg import ExactMatrix, rref
from .pfaffian import SkewPolyMatrix, four_by_four_pfaffians, odd_pfaffian_family
from .poly import Polynomial, VarContext, parse_poly, random_form

log = logging.getLogger(__name__)


class UniPoly:
    """Polynomial in one variable ``t`` with Fraction coefficients (ascending)."""

    def __init__(self, coeffs):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    def __call__(self, t):
        v = Fraction(0)
        for c in reversed(self.coeffs):
            v = v * t + c
        return v

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (list, tuple)):
            return self.coeffs == UniPoly(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"UniPoly({str(self)!r})"


# ---------------------------------------------------------------------------
# monomial ideals


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def minimalize(monos) -> tuple:
    """Minimal generators of the monomial ideal spanned by ``monos``."""
    ms = sorted(set(monos), key=sum)
    out = []
    for m in ms:
        if not any(_divides(g, m) for g in out):
            out.append(m)
    return tuple(sorted(out))


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _padd(a, b):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return out


def hilbert_numerator(monos, n: int) -> tuple:
    """Numerator ``N`` with ``HS(R/I) = N(t) / (1 - t)^n`` for a monomial ideal ``I``."""
    memo: dict = {}

    def rec(gens: tuple) -> list:
        if not gens:
            return [1]
        if gens in memo:
            return memo[gens]
        supports = [frozenset(i for i, a in enumerate(g) if a) for g in gens]
        if sum(map(len, supports)) == len(frozenset().union(*supports)):
            out = [1]
            for g in gens:
                d = sum(g)
                out = _pmul(out, [1] + [0] * (d - 1) + [-1])
            memo[gens] = out
            return out
        mixed = [g for g, s in zip(gens, supports) if len(s) >= 2]
        counts = [sum(1 for g in mixed if g[i]) for i in range(n)]
        j = max(range(n), key=lambda i: counts[i])
        exps = sorted(g[j] for g in mixed if g[j])
        e = exps[len(exps) // 2]
        pivot = tuple(e if i == j else 0 for i in range(n))
        plus = minimalize(gens + (pivot,))
        colon = minimalize(tuple(tuple(max(0, a - b) for a, b in zip(g, pivot)) for g in gens))
        out = _padd(rec(plus), [0] * e + rec(colon))
        memo[gens] = out
        return out

    num = rec(minimalize(monos))
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return tuple(num)


def hf_from_numerator(num, n: int, t: int) -> int:
    if t < 0:
        return 0
    return sum(c * comb(t - i + n - 1, n - 1) for i, c in enumerate(num) if t - i >= 0)


def _binomial_poly(shift: int, k: int) -> list:
    """Coefficients of ``C(t + shift, k)`` as a polynomial in ``t``."""
    poly = [Fraction(1)]
    for r in range(k):
        poly = [Fraction(0)] + poly  # times t
        c = shift - r
        for i in range(len(poly) - 1):
            poly[i] += c * poly[i + 1]
    return [c / factorial(k) for c in poly]


def hp_from_numerator(num, n: int):
    """Hilbert polynomial, Krull dimension and the reduced numerator."""
    q = list(num)
    k = 0
    while k < n and len(q) > 1 and sum(q) == 0:
        # divide by (1 - t)
        out = []
        acc = 0
        for c in q[:-1]:
            acc += c
            out.append(acc)
        q = out
        k += 1
    d = n - k
    if d == 0 or not any(q):
        return UniPoly([]), d if any(q) else 0, q
    total = [Fraction(0)] * d
    for i, c in enumerate(q):
        if c:
            for deg, b in enumerate(_binomial_poly(d - 1 - i, d - 1)):
                total[deg] += c * b
    return UniPoly(total), d, q


# ---------------------------------------------------------------------------
# ideals


@dataclass
class HilbertData:
    hf_table: list
    hp: UniPoly
    stabilization_degree: int
    numerator: tuple
    krull_dim: int

    @property
    def projective_dim(self) -> int:
        return self.krull_dim - 1

    def as_dict(self):
        return {"hf_table": self.hf_table, "hilbert_polynomial": str(self.hp),
                "stabilization_degree": self.stabilization_degree,
                "numerator": list(self.numerator), "krull_dim": self.krull_dim}


def _check(gens):
    if any(not g.is_homogeneous() for g in gens):
        raise NotHomogeneous("Hilbert functions need homogeneous generators")


def leading_ideal(gens, p=None, cache_dir=None, degree_cap=None):
    _check(gens)
    gb = buchberger(gens, DEGREVLEX, p, degree_cap=degree_cap, cache_dir=cache_dir)
    if not gb.complete:
        raise Inconclusive("Groebner basis truncated by the degree cap; Hilbert data not certified")
    return gb.leading_monomials(), len(gens[0].ctx)


def hilbert_function(gens, t: int, p: int | None = None, cache_dir=None) -> int:
    """``dim_k (R/I)_t`` via Macaulay's theorem."""
    monos, n = leading_ideal(gens, p, cache_dir)
    return hf_from_numerator(hilbert_numerator(monos, n), n, t)


def hilbert_data(gens, p: int | None = None, T: int = 10, cache_dir=None, degree_cap=None) -> HilbertData:
    monos, n = leading_ideal(gens, p, cache_dir, degree_cap)
    num = hilbert_numerator(monos, n)
    hp, d, q = hp_from_numerator(num, n)
    # HF agrees with HP from degree len(q) - d on
    certain = max(0, len(q) - d)
    end = max(T, certain)
    table = [hf_from_numerator(num, n, t) for t in range(end + 1)]
    stab = end
    while stab > 0 and table[stab - 1] == hp(stab - 1):
        stab -= 1
    if stab == end and table[end] != hp(end):
        raise Inconclusive("Hilbert function did not stabilize inside the computed window")
    return HilbertData(table[:T + 1], hp, stab, num, d)


def hilbert_polynomial(gens, p: int | None = None, T: int = 10, cache_dir=None) -> UniPoly:
    return hilbert_data(gens, p, T, cache_dir).hp


@dataclass(frozen=True)
class CurveInvariants:
    dim: int
    degree: int
    arithmetic_genus: int

    def as_tuple(self):
        return (self.dim, self.degree, self.arithmetic_genus)


def invariants_from_hp(hp: UniPoly) -> CurveInvariants:
    if hp.degree >= 2:
        raise NotACurve(f"Hilbert polynomial {hp} has degree {hp.degree}")
    dim = hp.degree
    if dim < 0:
        return CurveInvariants(-1, 0, 0)
    lead = hp.coeffs[-1] * factorial(dim)
    const = hp.coeffs[0]
    return CurveInvariants(dim, int(lead), int(1 - const))


def curve_invariants(gens, p: int | None = None, cache_dir=None) -> CurveInvariants:
    """(dimension, degree, arithmetic genus) of a scheme of dimension at most 1."""
    return invariants_from_hp(hilbert_data(gens, p, 0, cache_dir).hp)


# ---------------------------------------------------------------------------
# slicing


@dataclass
class SliceReport:
    degree: int
    attempts: list  # (seed, outcome) pairs
    sliced_vars: int


def _random_slice(gens, dim: int, gf: GF, rng):
    ctx = gens[0].ctx
    n = len(ctx)
    if dim == 0:
        return gens, ctx
    A = ExactMatrix([[rng.randrange(gf.p) for _ in range(n)] for _ in range(dim)], gf)
    R, pivots = rref(A)
    if len(pivots) < dim:
        return None, None
    free = [c for c in range(n) if c not in pivots]
    new_ctx = VarContext([ctx.names[c] for c in free])
    images = {}
    for r, pc in enumerate(pivots):
        terms = {}
        for k, fc in enumerate(free):
            if R[r][fc]:
                terms[tuple(int(i == k) for i in range(len(free)))] = -R[r][fc] % gf.p
        images[ctx.names[pc]] = Polynomial(new_ctx, terms, gf)
    return [g.to_field(gf).substitute(images, new_ctx) for g in gens], new_ctx


def slice_degree_report(gens, dim: int, p: int, seed: int, max_retries: int = 10, cache_dir=None) -> SliceReport:
    """Degree of a projective scheme of dimension ``dim`` via ``dim`` random hyperplanes."""
    _check(gens)
    gf = GF(p)
    attempts = []
    for k in range(max_retries):
        sub_seed = seed * 1_000_003 + k
        rng = random.Random(sub_seed)
        sliced, ctx = _random_slice(gens, dim, gf, rng)
        if sliced is None:
            attempts.append((sub_seed, "dependent linear forms"))
            log.info("slice seed %d: dependent linear forms", sub_seed)
            continue
        sliced = [g for g in sliced if not g.is_zero()]
        if not sliced:
            attempts.append((sub_seed, "slice killed every generator"))
            continue
        hp = hilbert_data(sliced, p, 0, cache_dir).hp
        if hp.degree == 0 and hp.coeffs[0] > 0:
            attempts.append((sub_seed, f"degree {hp.coeffs[0]}"))
            log.info("slice seed %d: degree %s", sub_seed, hp.coeffs[0])
            return SliceReport(int(hp.coeffs[0]), attempts, len(ctx))
        attempts.append((sub_seed, f"not zero-dimensional (HP = {hp})"))
        log.info("slice seed %d: degenerate, HP = %s", sub_seed, hp)
    raise DegenerateSlicing(f"no zero-dimensional slice after {max_retries} draws: {attempts}")


def slice_degree(gens, dim: int, p: int, seed: int, max_retries: int = 10, cache_dir=None) -> int:
    return slice_degree_report(gens, dim, p, seed, max_retries, cache_dir).degree


# ---------------------------------------------------------------------------
# ideal inputs

BUILTIN_IDEALS = ("pfaffian7", "pfaffian7-symbolic", "grass27", "ci-quadrics", "twisted-cubic")

# projective dimension of the scheme each builtin defines
BUILTIN_DIMS = {"pfaffian7": 1, "pfaffian7-symbolic": 17, "grass27": 10, "ci-quadrics": 1, "twisted-cubic": 1}


def pfaffian_curve_ideal(p: int, seed: int) -> list:
    """7 cubic Pfaffians of a random 7x7 skew matrix of linear forms in 5 variables."""
    gf = GF(p)
    M = SkewPolyMatrix.random_linear(7, VarContext.numbered(5), gf, random.Random(seed))
    return odd_pfaffian_family(M)


def ci_quadrics(p: int, seed: int) -> list:
    gf = GF(p)
    rng = random.Random(seed)
    ctx = VarContext.numbered(5)
    return [random_form(ctx, 2, gf, rng) for _ in range(3)]


def builtin_ideal(name: str, p: int, seed: int = 0) -> list:
    gf = GF(p)
    if name == "pfaffian7":
        return pfaffian_curve_ideal(p, seed)
    if name == "pfaffian7-symbolic":
        return [g.to_field(gf) for g in odd_pfaffian_family(SkewPolyMatrix.generic(7))]
    if name == "grass27":
        return [g.to_field(gf) for g in four_by_four_pfaffians(SkewPolyMatrix.generic(7))]
    if name == "ci-quadrics":
        return ci_quadrics(p, seed)
    if name == "twisted-cubic":
        ctx = VarContext.numbered(4)
        return [parse_poly(s, ctx, gf) for s in ("x1*x3 - x2^2", "x1*x4 - x2*x3", "x2*x4 - x3^2")]
    raise KeyError(f"unknown builtin ideal {name!r}; choose from {', '.join(BUILTIN_IDEALS)}")


def load_ideal(source, field=None) -> list:
    """Read ``{"vars": [...], "gens": ["poly", ...]}`` from a path, JSON text or dict."""
    source = load_json_source(source)
    ctx = VarContext(source["vars"])
    return [parse_poly(s, ctx, field) for s in source["gens"]]

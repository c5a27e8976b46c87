"""Pfaffians of skew-symmetric polynomial matrices and the M0 certificates.

Sign convention: first-row expansion

    Pf(A) = sum_{j>0} (-1)^(j+1) a[0][j] Pf(A without rows/cols 0, j)

so the block sum of ``[[0, 1], [-1, 0]]`` has Pfaffian ``+1``.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources
from itertools import combinations, product

import numpy as np

from .arith import GF, QQ
from ._io import load_json_source
from .errors import SamplingError, ShapeError, NotHomogeneous
from .linalg import ExactMatrix, kernel_basis, rank
from .poly import Polynomial, VarContext, monomials_of_degree, parse_poly


class SkewPolyMatrix:
    """Skew-symmetric ``n x n`` matrix stored by its strict upper triangle."""

    def __init__(self, n: int, ctx: VarContext, upper: dict | None = None, field=QQ):
        if isinstance(field, int):
            field = GF(field)
        self.n = n
        self.ctx = ctx
        self.field = field
        self.upper = {}
        for (i, j), poly in (upper or {}).items():
            if not 0 <= i < n or not 0 <= j < n or i == j:
                raise ShapeError(f"bad entry index ({i}, {j}) for size {n}")
            if poly.ctx != ctx or poly.field != field:
                raise ShapeError(f"entry ({i}, {j}) lives in another ring")
            if i > j:
                i, j, poly = j, i, -poly
            if not poly.is_zero():
                self.upper[(i, j)] = poly

    def entry(self, i: int, j: int) -> Polynomial:
        if i < j:
            return self.upper.get((i, j)) or Polynomial.zero(self.ctx, self.field)
        if i > j:
            return -self.entry(j, i)
        return Polynomial.zero(self.ctx, self.field)

    @classmethod
    def from_rows(cls, rows, ctx, field=QQ):
        n = len(rows)
        for i in range(n):
            if not rows[i][i].is_zero():
                raise ShapeError("diagonal must vanish")
            for j in range(i + 1, n):
                if rows[i][j] != -rows[j][i]:
                    raise ShapeError(f"entries ({i},{j}) and ({j},{i}) are not opposite")
        return cls(n, ctx, {(i, j): rows[i][j] for i in range(n) for j in range(i + 1, n)}, field)

    @classmethod
    def generic(cls, n: int, prefix: str = "x", field=QQ):
        """Symbolic matrix with independent entries ``x{i}{j}`` (0-based, i<j)."""
        names = [f"{prefix}{i}{j}" for i in range(n) for j in range(i + 1, n)]
        ctx = VarContext(names)
        upper = {(i, j): Polynomial.var(ctx, f"{prefix}{i}{j}", field)
                 for i in range(n) for j in range(i + 1, n)}
        return cls(n, ctx, upper, field)

    @classmethod
    def random_linear(cls, n: int, ctx: VarContext, field: GF, rng):
        """Entries are linear forms with uniform GF(p) coefficients."""
        nv = len(ctx)
        upper = {}
        for i in range(n):
            for j in range(i + 1, n):
                coeffs = [rng.randrange(field.p) for _ in range(nv)]
                upper[(i, j)] = Polynomial(
                    ctx, {tuple(int(k == v) for k in range(nv)): c for v, c in enumerate(coeffs)}, field)
        return cls(n, ctx, upper, field)

    @classmethod
    def from_json(cls, source, field=QQ):
        """Load ``{"n", "vars", "entries": [{"i", "j", "poly"}]}`` from a dict, path or text."""
        source = load_json_source(source)
        ctx = VarContext(source["vars"])
        upper = {}
        for ent in source["entries"]:
            i, j = int(ent["i"]), int(ent["j"])
            if i >= j:
                raise ShapeError(f"entry ({i}, {j}) must satisfy i < j")
            upper[(i, j)] = parse_poly(ent["poly"], ctx, field)
        return cls(int(source["n"]), ctx, upper, field)

    def to_json(self) -> dict:
        return {"n": self.n, "vars": list(self.ctx.names),
                "entries": [{"i": i, "j": j, "poly": str(p)} for (i, j), p in sorted(self.upper.items())]}

    def delete(self, *indices) -> "SkewPolyMatrix":
        keep = [k for k in range(self.n) if k not in set(indices)]
        for k in indices:
            if not 0 <= k < self.n:
                raise IndexError(f"index {k} out of range for size {self.n}")
        pos = {k: a for a, k in enumerate(keep)}
        upper = {(pos[i], pos[j]): p for (i, j), p in self.upper.items() if i in pos and j in pos}
        return SkewPolyMatrix(len(keep), self.ctx, upper, self.field)

    def to_field(self, field) -> "SkewPolyMatrix":
        if isinstance(field, int):
            field = GF(field)
        return SkewPolyMatrix(self.n, self.ctx, {k: p.to_field(field) for k, p in self.upper.items()}, field)

    def specialize(self, point, p: int) -> list:
        """Numeric matrix mod ``p`` at ``point``."""
        a = [[0] * self.n for _ in range(self.n)]
        for (i, j), poly in self.upper.items():
            v = poly.evaluate(point, p)
            a[i][j] = v
            a[j][i] = -v % p
        return a

    def max_entry_degree(self) -> int:
        return max((q.degree() for q in self.upper.values()), default=-1)

    def __repr__(self):
        return f"SkewPolyMatrix(n={self.n}, vars={len(self.ctx)}, nonzero={len(self.upper)})"


def pfaffian(M: SkewPolyMatrix) -> Polynomial:
    if M.n % 2:
        raise ShapeError("Pfaffian of an odd-size matrix; use odd_pfaffian_family")
    return _pf_indices(M, tuple(range(M.n)))


def _pf_indices(M: SkewPolyMatrix, indices: tuple) -> Polynomial:
    """Pfaffian of the principal submatrix on ``indices``, memoized by index subset."""
    ctx, field = M.ctx, M.field
    one = Polynomial.constant(ctx, 1, field)
    zero = Polynomial.zero(ctx, field)
    memo: dict = {}

    def pf(idx: tuple) -> Polynomial:
        if not idx:
            return one
        if idx in memo:
            return memo[idx]
        i, rest = idx[0], idx[1:]
        total = zero
        for pos, j in enumerate(rest):
            a = M.upper.get((i, j))
            if a is None:
                continue
            sub = pf(rest[:pos] + rest[pos + 1:])
            if sub.is_zero():
                continue
            term = a * sub
            total = total - term if pos % 2 else total + term
        memo[idx] = total
        return total

    return pf(tuple(indices))


def sub_pfaffian(M: SkewPolyMatrix, i: int, j: int) -> Polynomial:
    """Pfaffian of ``M`` with rows and columns ``i`` and ``j`` removed."""
    if M.n % 2:
        raise ShapeError("sub_pfaffian needs an even-size matrix")
    if i == j:
        raise ValueError("i and j must differ")
    for k in (i, j):
        if not 0 <= k < M.n:
            raise IndexError(f"index {k} out of range for size {M.n}")
    return _pf_indices(M, tuple(k for k in range(M.n) if k not in (i, j)))


def odd_pfaffian_family(M: SkewPolyMatrix) -> list:
    """Entry ``r`` is the Pfaffian of ``M`` with row/column ``r`` removed."""
    if M.n % 2 == 0:
        raise ShapeError("odd_pfaffian_family needs an odd-size matrix")
    return [_pf_indices(M, tuple(k for k in range(M.n) if k != r)) for r in range(M.n)]


def four_by_four_pfaffians(M: SkewPolyMatrix) -> list:
    """All principal 4x4 sub-Pfaffians, indexed by ``combinations(range(n), 4)``."""
    return [_pf_indices(M, idx) for idx in combinations(range(M.n), 4)]


# ---------------------------------------------------------------------------
# shipped data


def load_m0(field=QQ) -> SkewPolyMatrix:
    text = resources.files("pfq").joinpath("data/m0.json").read_text()
    return SkewPolyMatrix.from_json(json.loads(text), field)


def load_f0(field=QQ) -> Polynomial:
    text = resources.files("pfq").joinpath("data/f0.txt").read_text()
    return parse_poly(text, VarContext.numbered(5), field)


@dataclass(frozen=True)
class PfaffianCertificate:
    matrix_id: str
    claimed: str
    computed: str
    sign: int | None
    mismatch: bool

    def as_dict(self):
        return {"matrix_id": self.matrix_id, "claimed": self.claimed, "computed": self.computed,
                "sign": self.sign, "mismatch": self.mismatch}


def pfaffian_certificate(M: SkewPolyMatrix, claimed: Polynomial, matrix_id: str = "M") -> PfaffianCertificate:
    """Compare Pf(M) with ``claimed`` up to a global sign."""
    computed = pfaffian(M)
    if computed == claimed:
        sign = 1
    elif computed == -claimed:
        sign = -1
    else:
        sign = None
    if claimed.is_zero() and computed.is_zero():
        sign = 1
    return PfaffianCertificate(matrix_id, str(claimed), str(computed), sign, sign is None)


# ---------------------------------------------------------------------------
# differential of the Pfaffian map


def jacobian_span_matrix(M: SkewPolyMatrix, p: int) -> ExactMatrix:
    """Rows: coefficient vectors of ``x_k * Pf_ij(M)`` over the degree-(n/2) monomials."""
    if M.n % 2:
        raise ShapeError("need an even-size matrix")
    if M.max_entry_degree() > 1 or any(not q.is_homogeneous() or q.degree() != 1 for q in M.upper.values()):
        raise NotHomogeneous("entries must be linear forms")
    gf = GF(p)
    Mp = M.to_field(gf)
    nv = len(M.ctx)
    d = M.n // 2
    basis = monomials_of_degree(nv, d)
    xs = Polynomial.gens(M.ctx, gf)
    rows = []
    for i, j in combinations(range(M.n), 2):
        pf = sub_pfaffian(Mp, i, j)
        for x in xs:
            rows.append((x * pf).coefficient_vector(basis))
    return ExactMatrix(rows, gf, cols=len(basis))


def jacobian_span_rank(M: SkewPolyMatrix, p: int) -> int:
    """Rank over GF(p) of the span of ``x_k Pf_ij(M)``; 70 means full rank for 8x8 in 5 variables."""
    if M.n != 8 or len(M.ctx) != 5:
        raise ShapeError("expected an 8x8 matrix of linear forms in 5 variables")
    return rank(jacobian_span_matrix(M, p))


# ---------------------------------------------------------------------------
# points on the quartic and kernel classification


def _normalize(point, p):
    lead = next(x for x in point if x % p)
    inv = pow(lead, -1, p)
    return tuple(x * inv % p for x in point)


def _exhaustive_zeros(F: Polynomial, p: int) -> list:
    n = F.nvars
    if p ** (n - 1) > 2_000_000:
        raise SamplingError(f"exhaustive enumeration over GF({p})^{n} is too large")
    found = []
    for lead in range(n):
        for tail in product(range(p), repeat=n - 1 - lead):
            pt = (0,) * lead + (1,) + tail
            if F.evaluate(pt, p) == 0:
                found.append(pt)
    return found


def sample_points_on_quartic(F: Polynomial, p: int, count: int, seed: int,
                             exhaustive: bool = False, max_tries: int | None = None) -> list:
    """Distinct projective GF(p)-points on ``{F = 0}``, deterministic in ``(p, seed)``.

    All but the last coordinate are drawn at random; the last one is found by
    scanning GF(p). With ``exhaustive=True`` every projective point is
    tested instead and ``count``/``seed`` are ignored.
    """
    if not F.is_homogeneous() or F.is_zero():
        raise NotHomogeneous("expected a nonzero homogeneous form")
    if p == 2:
        raise ValueError("p must be odd")
    gf = GF(p)
    Fp = F.to_field(gf)
    if exhaustive:
        return _exhaustive_zeros(Fp, p)
    if p >= 2 ** 31:
        raise ValueError("vectorized scan needs p < 2^31")
    rng = random.Random(seed)
    n = Fp.nvars
    ts = np.arange(p, dtype=np.int64)
    seen = set()
    points = []
    tries = 0
    max_tries = max_tries if max_tries is not None else 50 * count + 100
    while len(points) < count:
        tries += 1
        if tries > max_tries:
            raise SamplingError(f"only {len(points)} of {count} points after {max_tries} slices")
        head = [rng.randrange(p) for _ in range(n - 1)]
        if not any(head):
            continue
        # univariate coefficients in the last coordinate
        coeffs = [0] * (Fp.degree() + 1)
        for e, c in Fp.terms.items():
            v = c
            for x, a in zip(head, e[:-1]):
                if a:
                    v = v * pow(x, a, p) % p
            coeffs[e[-1]] = (coeffs[e[-1]] + v) % p
        acc = np.zeros(p, dtype=np.int64)
        for c in reversed(coeffs):
            acc = (acc * ts + c) % p
        roots = np.flatnonzero(acc == 0)
        if roots.size == 0:
            continue
        t = int(roots[rng.randrange(roots.size)])
        pt = _normalize(head + [t], p)
        if pt in seen:
            continue
        seen.add(pt)
        points.append(pt)
    return points


def plucker_vector(v, w, p: int) -> tuple:
    """Coordinates ``v_i w_j - v_j w_i`` for ``i < j`` (lexicographic), normalized."""
    n = len(v)
    coords = [(v[i] * w[j] - v[j] * w[i]) % p for i in range(n) for j in range(i + 1, n)]
    return _normalize(coords, p) if any(coords) else tuple(coords)


def grassmann_relations(plucker, n: int, p: int) -> list:
    """Values of the 4x4 sub-Pfaffians of the skew form with upper entries ``plucker``."""
    idx = {pair: k for k, pair in enumerate(combinations(range(n), 2))}

    def x(i, j):
        return plucker[idx[(i, j)]]

    return [(x(i, j) * x(k, l) - x(i, k) * x(j, l) + x(i, l) * x(j, k)) % p
            for i, j, k, l in combinations(range(n), 4)]


@dataclass(frozen=True)
class KernelClass:
    rank: int
    kernel_dim: int
    plucker: tuple | None
    grassmann_ok: bool | None

    def as_dict(self):
        return {"rank": self.rank, "kernel_dim": self.kernel_dim,
                "plucker": list(self.plucker) if self.plucker else None,
                "grassmann_ok": self.grassmann_ok}


def classify_kernel(M: SkewPolyMatrix, point, p: int) -> KernelClass:
    gf = GF(p)
    if len(point) != len(M.ctx):
        raise ShapeError(f"point needs {len(M.ctx)} coordinates")
    A = ExactMatrix(M.specialize(point, p), gf)
    r = rank(A)
    ker = kernel_basis(A)
    for v in ker:
        if any(A.apply(v)):
            raise ArithmeticError("kernel vector failed M v = 0")
    if r != M.n - 2 or len(ker) != 2:
        return KernelClass(r, len(ker), None, None)
    pl = plucker_vector(ker[0], ker[1], p)
    ok = not any(grassmann_relations(pl, M.n, p))
    return KernelClass(r, len(ker), pl, ok)

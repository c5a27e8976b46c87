"""Exact dense linear algebra over GF(p) and QQ."""
from __future__ import annotations

from fractions import Fraction
from math import lcm

from .arith import GF, QQ
from .errors import NotHomogeneous, ShapeError
from .poly import Polynomial, monomials_of_degree


class ExactMatrix:
    """Rectangular matrix with entries in ``field`` (GF(p) residues or Fractions)."""

    __slots__ = ("rows", "cols", "field", "data")

    def __init__(self, data, field=QQ, cols: int | None = None):
        if isinstance(field, int):
            field = GF(field)
        self.field = field
        self.data = [[field.convert(x) for x in row] for row in data]
        self.rows = len(self.data)
        self.cols = cols if cols is not None else (len(self.data[0]) if self.data else 0)
        if any(len(row) != self.cols for row in self.data):
            raise ShapeError("rows have unequal lengths")

    @classmethod
    def identity(cls, n, field=QQ):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], field)

    @classmethod
    def zeros(cls, rows, cols, field=QQ):
        return cls([[0] * cols for _ in range(rows)], field, cols=cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([list(col) for col in zip(*self.data)], self.field, cols=self.rows)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ShapeError("inner dimensions differ")
        f = self.field
        out = []
        for row in self.data:
            out.append([sum(a * b for a, b in zip(row, col)) for col in zip(*other.data)])
        return ExactMatrix(out, f, cols=other.cols)

    def apply(self, v):
        return [self.field.convert(sum(a * b for a, b in zip(row, v))) for row in self.data]

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.field == other.field and self.data == other.data

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols}, {self.field!r})"


def rref(m: ExactMatrix):
    """Reduced row echelon form; returns ``(rows, pivot_columns)``."""
    f = m.field
    a = [row[:] for row in m.data]
    pivots = []
    r = 0
    if isinstance(f, GF):
        p = f.p
        for c in range(m.cols):
            piv = next((i for i in range(r, m.rows) if a[i][c]), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            inv = pow(a[r][c], -1, p)
            a[r] = [x * inv % p for x in a[r]]
            prow = a[r]
            for i in range(m.rows):
                if i != r and a[i][c]:
                    k = a[i][c]
                    a[i] = [(x - k * y) % p for x, y in zip(a[i], prow)]
            pivots.append(c)
            r += 1
            if r == m.rows:
                break
    else:
        for c in range(m.cols):
            piv = next((i for i in range(r, m.rows) if a[i][c]), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            inv = 1 / Fraction(a[r][c])
            a[r] = [x * inv for x in a[r]]
            prow = a[r]
            for i in range(m.rows):
                if i != r and a[i][c]:
                    k = a[i][c]
                    a[i] = [x - k * y for x, y in zip(a[i], prow)]
            pivots.append(c)
            r += 1
            if r == m.rows:
                break
    return a, pivots


def _rank_modp(data, p: int) -> int:
    rows = [row[:] for row in data if any(row)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv = pow(prow[c], -1, p)
        for i in range(rank + 1, len(rows)):
            if rows[i][c]:
                k = rows[i][c] * inv % p
                rows[i] = [(x - k * y) % p for x, y in zip(rows[i], prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def _integer_rows(m: ExactMatrix):
    out = []
    for row in m.data:
        den = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        out.append([int(Fraction(x) * den) for x in row])
    return out


def _bareiss(a, want_det=False):
    """Fraction-free elimination on an integer matrix; returns (rank, det-or-None)."""
    a = [row[:] for row in a]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    prev = 1
    rank = 0
    sign = 1
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if a[i][c]), None)
        if piv is None:
            if want_det:
                return rank, 0
            continue
        if piv != rank:
            a[rank], a[piv] = a[piv], a[rank]
            sign = -sign
        pv = a[rank][c]
        for i in range(rank + 1, nrows):
            ai = a[i]
            aic = ai[c]
            a[i] = [(pv * ai[j] - aic * a[rank][j]) // prev for j in range(ncols)]
        prev = pv
        rank += 1
        if rank == nrows:
            break
    det = sign * prev if (want_det and rank == nrows == ncols) else None
    return rank, det


def rank(m: ExactMatrix) -> int:
    if isinstance(m.field, GF):
        return _rank_modp(m.data, m.field.p)
    return _bareiss(_integer_rows(m))[0]


def det(m: ExactMatrix):
    if m.rows != m.cols:
        raise ShapeError("determinant of a non-square matrix")
    if m.rows == 0:
        return m.field.convert(1)
    f = m.field
    if isinstance(f, GF):
        p = f.p
        a = [row[:] for row in m.data]
        d = 1
        for c in range(m.rows):
            piv = next((i for i in range(c, m.rows) if a[i][c]), None)
            if piv is None:
                return 0
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                d = -d
            d = d * a[c][c] % p
            inv = pow(a[c][c], -1, p)
            for i in range(c + 1, m.rows):
                if a[i][c]:
                    k = a[i][c] * inv % p
                    a[i] = [(x - k * y) % p for x, y in zip(a[i], a[c])]
        return d % p
    scale = Fraction(1)
    for row in m.data:
        scale *= lcm(*(Fraction(x).denominator for x in row))
    _, d = _bareiss(_integer_rows(m), want_det=True)
    return Fraction(d) / scale


def kernel_basis(m: ExactMatrix) -> list:
    """Basis of the right null space ``{v : m v = 0}``."""
    a, pivots = rref(m)
    f = m.field
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [f.convert(0)] * m.cols
        v[fc] = f.convert(1)
        for r, pc in enumerate(pivots):
            v[pc] = f.neg(a[r][fc])
        basis.append(v)
    return basis


def solve(m: ExactMatrix, b) -> list | None:
    """One solution of ``m x = b`` or None when the system is inconsistent."""
    f = m.field
    aug = ExactMatrix([row + [f.convert(bi)] for row, bi in zip(m.data, b)], f, cols=m.cols + 1)
    a, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [f.convert(0)] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = a[r][m.cols]
    return x


def quadratic_form_rank(q: Polynomial) -> int:
    """Rank of the symmetric Gram matrix of a quadratic form (char != 2)."""
    if not q.is_zero() and (q.degree() != 2 or not q.is_homogeneous()):
        raise NotHomogeneous("expected a homogeneous quadratic form")
    f = q.field
    if f.characteristic == 2:
        raise ValueError("characteristic 2 is not supported")
    n = q.nvars
    half = f.inv(f.convert(2))
    gram = [[f.convert(0)] * n for _ in range(n)]
    for e, c in q.terms.items():
        idx = [i for i, a in enumerate(e) if a]
        if len(idx) == 1:
            gram[idx[0]][idx[0]] = c
        else:
            i, j = idx
            gram[i][j] = gram[j][i] = f.mul(c, half)
    return rank(ExactMatrix(gram, f))


def decompose_in_ideal(F: Polynomial, gens: list) -> list | None:
    """Homogeneous cofactors ``h`` with ``F == sum(g*h)``, or None.

    The cofactor coefficients are the unknowns of a linear system indexed by
    the degree-``deg F`` monomials; any solution is returned.
    """
    polys = [F, *gens]
    if any(not g.is_homogeneous() for g in polys):
        raise NotHomogeneous("decompose_in_ideal needs homogeneous input")
    f = F.field
    ctx = F.ctx
    n = len(ctx)
    if F.is_zero():
        return [Polynomial.zero(ctx, f) for _ in gens]
    d = F.degree()
    target = monomials_of_degree(n, d)
    row_of = {mono: i for i, mono in enumerate(target)}
    # one column per (generator, multiplier monomial)
    columns = []
    for gi, g in enumerate(gens):
        if g.is_zero() or g.degree() > d:
            continue
        for mono in monomials_of_degree(n, d - g.degree()):
            columns.append((gi, mono))
    if not columns:
        return None
    mat = [[f.convert(0)] * len(columns) for _ in target]
    for k, (gi, mono) in enumerate(columns):
        for e, c in gens[gi].terms.items():
            mat[row_of[tuple(a + b for a, b in zip(e, mono))]][k] = c
    x = solve(ExactMatrix(mat, f, cols=len(columns)), F.coefficient_vector(target))
    if x is None:
        return None
    cof = [dict() for _ in gens]
    for k, (gi, mono) in enumerate(columns):
        if x[k]:
            cof[gi][mono] = x[k]
    result = [Polynomial(ctx, c, f) for c in cof]
    residual = F - sum((g * h for g, h in zip(gens, result)), Polynomial.zero(ctx, f))
    if not residual.is_zero():
        raise ArithmeticError("decomposition failed its exact recombination check")
    return result

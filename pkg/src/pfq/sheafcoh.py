"""Cohomology bookkeeping on P^n, Chern arithmetic on a quartic threefold, dimension audit.

A :class:`TwistedFreeComplex` ``0 -> F_m -> ... -> F_1 -> S -> 0`` is chased
through its short exact pieces ``0 -> Z_j -> F_j -> Z_{j-1} -> 0`` (with
``Z_{m-1} = F_m`` and ``Z_0 = S``). Connecting maps are never computed: an
entry is exact only when a vanishing neighbour forces it, or when it is the
single unknown left in an Euler characteristic. Anything else stays an
interval.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._io import load_json_source
from .arith import binomial_ext


def bott_h(n: int, d: int, i: int) -> int:
    """``h^i(P^n, O(d))``."""
    if not 0 <= i <= n:
        raise ValueError(f"cohomological degree {i} outside [0, {n}]")
    if i == 0 and d >= 0:
        return binomial_ext(n + d, n)
    if i == n and d <= -n - 1:
        return binomial_ext(-d - 1, n)
    return 0


def line_bundle_euler(n: int, d: int) -> int:
    return binomial_ext(n + d, n)


@dataclass(frozen=True)
class Entry:
    lo: int
    hi: int

    @property
    def forced(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> int | None:
        return self.lo if self.forced else None

    def __add__(self, other):
        return Entry(self.lo + other.lo, self.hi + other.hi)

    def as_json(self):
        return self.lo if self.forced else {"interval": [self.lo, self.hi], "status": "inconclusive"}


def _exact(v: int) -> Entry:
    return Entry(v, v)


@dataclass
class TwistedFreeComplex:
    """Free resolution of a sheaf on P^n by sums of twisted line bundles.

    ``terms[0]`` is the deepest syzygy module and ``terms[-1]`` maps onto the
    resolved sheaf; each term is a list of ``(twist, rank)`` pairs.
    """

    ambient_dim: int
    terms: list
    name: str = ""

    def __post_init__(self):
        self.terms = [[(int(d), int(r)) for d, r in term] for term in self.terms]
        for term in self.terms:
            for _, r in term:
                if r <= 0:
                    raise ValueError("ranks must be positive")

    @classmethod
    def from_json(cls, source) -> "TwistedFreeComplex":
        source = load_json_source(source)
        terms = [[(b["twist"], b["rank"]) for b in term] for term in source["terms"]]
        return cls(int(source["ambient_dim"]), terms, source.get("name", ""))

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim,
                "terms": [[{"twist": d, "rank": r} for d, r in term] for term in self.terms]}

    def term_cohomology(self, k: int, t: int) -> list:
        """Exact ``h^i`` of ``terms[k]`` twisted by ``t``."""
        n = self.ambient_dim
        return [_exact(sum(r * bott_h(n, d + t, i) for d, r in self.terms[k])) for i in range(n + 1)]

    def term_euler(self, k: int, t: int) -> int:
        return sum(r * line_bundle_euler(self.ambient_dim, d + t) for d, r in self.terms[k])


def _refine_by_euler(col: list, chi: int) -> list:
    """Pin the single non-forced entry, or tighten intervals, using the alternating sum."""
    out = list(col)
    for i, e in enumerate(out):
        if e.forced:
            continue
        sign = 1 if i % 2 == 0 else -1
        lo_rest = hi_rest = 0
        for k, f in enumerate(out):
            if k == i:
                continue
            s = 1 if k % 2 == 0 else -1
            lo_rest += s * (f.lo if s > 0 else f.hi)
            hi_rest += s * (f.hi if s > 0 else f.lo)
        # sign * h_i = chi - rest
        a, b = sign * (chi - hi_rest), sign * (chi - lo_rest)
        lo, hi = max(e.lo, min(a, b)), min(e.hi, max(a, b))
        out[i] = Entry(lo, hi) if lo <= hi else e
    return out


def _quotient_cohomology(A: list, B: list, chi: int) -> list:
    """Bounds for ``h^i(C)`` from ``0 -> A -> B -> C -> 0``.

    ``h^i(C) = dim coker(H^i A -> H^i B) + dim ker(H^{i+1} A -> H^{i+1} B)``.
    """
    n = len(A) - 1
    col = []
    for i in range(n + 1):
        a, b = A[i], B[i]
        if a.hi == 0:
            cok = b
        elif b.hi == 0:
            cok = _exact(0)
        else:
            cok = Entry(max(0, b.lo - a.hi), b.hi)
        if i + 1 <= n:
            a1, b1 = A[i + 1], B[i + 1]
            if a1.hi == 0:
                ker = _exact(0)
            elif b1.hi == 0:
                ker = a1
            else:
                ker = Entry(max(0, a1.lo - b1.hi), a1.hi)
        else:
            ker = _exact(0)
        col.append(cok + ker)
    return _refine_by_euler(col, chi)


def complex_euler(cx: TwistedFreeComplex, t: int) -> int:
    """Euler characteristic of the resolved sheaf twisted by ``t``."""
    total = 0
    m = len(cx.terms)
    for k in range(m):
        # terms[k] sits at homological position m - k
        sign = 1 if (m - k) % 2 == 1 else -1
        total += sign * cx.term_euler(k, t)
    return total


def complex_cohomology(cx: TwistedFreeComplex, t: int) -> list:
    """Column ``[h^0, ..., h^n]`` of the resolved sheaf twisted by ``t`` (each an :class:`Entry`)."""
    Z = cx.term_cohomology(0, t)
    chi_z = cx.term_euler(0, t)
    for k in range(1, len(cx.terms)):
        chi_f = cx.term_euler(k, t)
        chi_z = chi_f - chi_z
        Z = _quotient_cohomology(Z, cx.term_cohomology(k, t), chi_z)
    return Z


def cohomology_table(cx: TwistedFreeComplex, twists) -> dict:
    return {t: complex_cohomology(cx, t) for t in twists}


BUILTIN_COMPLEXES = {
    # E on P^4 from a skew 8x8 matrix of linear forms
    "eacm": TwistedFreeComplex(4, [[(-1, 8)], [(0, 8)]], "eacm"),
    # resolution of I_C^2(3) restricted from P^6
    "rodland": TwistedFreeComplex(4, [[(-5, 21)], [(-4, 48)], [(-3, 28)]], "rodland"),
    # O_C for the 7 cubic Pfaffians (Buchsbaum-Eisenbud)
    "be-curve": TwistedFreeComplex(4, [[(-7, 1)], [(-4, 7)], [(-3, 7)], [(0, 1)]], "be-curve"),
}


def builtin_complex(name: str) -> TwistedFreeComplex:
    try:
        return BUILTIN_COMPLEXES[name]
    except KeyError:
        raise KeyError(f"unknown builtin complex {name!r}; choose from {', '.join(BUILTIN_COMPLEXES)}") from None


# ---------------------------------------------------------------------------
# Chern classes on a quartic threefold: c1 = k[H], c2 = alpha[l], [H]^2 = 4[l]


@dataclass(frozen=True)
class ChernData:
    k: int
    alpha: int


def chern_twist(c: ChernData, n: int) -> ChernData:
    """Chern data of ``E(n)``."""
    return ChernData(c.k + 2 * n, c.alpha + 4 * c.k * n + 4 * n * n)


def euler_char_bundle(c: ChernData) -> Fraction:
    """Riemann-Roch value of ``chi(E)``; non-integral values rule the Chern data out."""
    k, a = Fraction(c.k), Fraction(c.alpha)
    return Fraction(2, 3) * k ** 3 - k * a / 2 + k ** 2 - a / 2 + Fraction(7, 3) * k + 2


def is_integral_chi(c: ChernData) -> bool:
    return euler_char_bundle(c).denominator == 1


def zero_locus_invariants(c: ChernData) -> tuple:
    """(degree, arithmetic genus) of the zero curve of a section of ``E``.

    Adjunction on the quartic gives ``omega_C = O_C(k - 1)``, hence
    ``2 p_a - 2 = (k - 1) * alpha``.
    """
    twice = (c.k - 1) * c.alpha + 2
    if twice % 2:
        raise ValueError(f"odd 2p_a for {c}")
    return c.alpha, twice // 2


def virtual_dimension(c: ChernData) -> int:
    """Expected dimension ``-chi(End_0 E) = 2 alpha - 2 k^2 - 3`` of the moduli space."""
    return 2 * c.alpha - 2 * c.k ** 2 - 3


def curve_euler(degree: int, genus: int, twist: int) -> int:
    """``chi(O_C(twist))`` for a curve of the given degree and arithmetic genus."""
    return degree * twist + 1 - genus


# ---------------------------------------------------------------------------
# dimension audit


@dataclass(frozen=True)
class AuditEntry:
    name: str
    value: object
    expected: object
    derivation: str

    @property
    def ok(self) -> bool:
        return self.value == self.expected

    def as_dict(self):
        return {"name": self.name, "value": self.value, "expected": self.expected,
                "derivation": self.derivation, "ok": self.ok}


def _pgl(n: int) -> int:
    return n * n - 1


def dimension_audit() -> list:
    """Named constants of the Pfaffian-quartic story, each recomputed from its parts."""
    n = 4  # ambient P^4
    quartics = binomial_ext(n + 4, n)  # 70
    lin_p4_p27 = 5 * binomial_ext(8, 2) - 1  # 139
    lin_p4_p20 = 5 * binomial_ext(7, 2) - 1  # 104
    deg_c, genus_c = zero_locus_invariants(ChernData(3, 14))
    rodland = complex_cohomology(builtin_complex("rodland"), 0)
    h0_normal_minus1 = rodland[2].value  # h^0(N(-1)) = h^2(I_C^2(3))
    # N_{C/P^4}: rank 3, degree 5*deg + 2g - 2
    deg_normal = 5 * deg_c + 2 * genus_c - 2
    chi_normal = deg_normal + 3 * (1 - genus_c)
    chi_normal_minus1 = deg_normal - 3 * deg_c + 3 * (1 - genus_c)
    chi_e = euler_char_bundle(ChernData(3, 14))
    # E|_C = N_{C/X}: rank 2, degree c1(E).C = 3 * deg
    chi_e_on_c = 3 * deg_c + 2 * (1 - genus_c)
    # h^{2,1} of a quartic threefold = dim of the degree-3 Jacobian ring piece
    h21 = binomial_ext(3 + n, n) - (n + 1)
    h0_ox3 = binomial_ext(3 + n, n)
    h0_oc3 = curve_euler(deg_c, genus_c, 3)
    h1_normal_minus1 = h0_normal_minus1 - chi_normal_minus1
    entries = [
        AuditEntry("quinary_quartics", quartics, 70, "C(8,4)"),
        AuditEntry("pfaffian_reps", lin_p4_p27 - _pgl(8) - (quartics - 1), 7,
                   "(5*28-1) - (8^2-1) - 69"),
        AuditEntry("curve_hilb_P4", lin_p4_p20 - _pgl(7), 56, "(5*21-1) - (7^2-1)"),
        AuditEntry("h0_normal_P4", chi_normal, 56, "chi(N_C/P4) = deg N + 3(1-g), h^1 = 0"),
        AuditEntry("theta_moduli", lin_p4_p20 - _pgl(5) - _pgl(7), 32, "104 - 24 - 48"),
        AuditEntry("h0_normal_X", int(chi_e_on_c), 14, "chi(E|_C) = 3*14 + 2(1-15)"),
        AuditEntry("chi_E_tensor_IC", int(chi_e - chi_e_on_c), -6, "chi(E) - chi(E|_C) = 8 - 14"),
        AuditEntry("h0_normal_minus1", h0_normal_minus1, 21, "h^2(I_C^2(3)) from the Rodland resolution"),
        AuditEntry("chi_normal_minus1", chi_normal_minus1, 14, "deg N(-1) + 3(1-g) = 56 - 42"),
        AuditEntry("h1_normal_minus1", h1_normal_minus1, 7, "21 - 14"),
        AuditEntry("aj_image_dim", 14 - h1_normal_minus1, 7, "h^0(N_C/X) - h^1(N(-1))"),
        AuditEntry("intermediate_jacobian_dim", h21, 30, "h^{2,1} = C(7,4) - 5"),
        AuditEntry("welters_array", [[h0_ox3, h21], [h0_oc3, int(chi_e_on_c)]], [[35, 30], [28, 14]],
                   "(h^0(O_X(3)), h^{2,1}; h^0(O_C(3)), h^0(N_C/X))"),
        AuditEntry("virtual_dim_M_0_2", virtual_dimension(ChernData(0, 2)), 1, "2*2 - 0 - 3"),
        AuditEntry("virtual_dim_M_-1_6", virtual_dimension(ChernData(-1, 6)), 7, "2*6 - 2 - 3"),
    ]
    return entries

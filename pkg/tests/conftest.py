from __future__ import annotations

import random

import pytest


@pytest.fixture
def rng():
    return random.Random(20240607)


def egcd_inverse(a: int, p: int) -> int:
    """Modular inverse by the textbook extended Euclidean algorithm."""
    r0, r1, s0, s1 = p, a % p, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    assert r0 == 1
    return s0 % p


def macaulay_ideal_dim(gens, d: int, p: int) -> int:
    """dim_k I_d as the rank of the coefficient matrix of all m*g with deg(m*g) = d."""
    from pfq.linalg import ExactMatrix, rank
    from pfq.poly import Polynomial, monomials_of_degree

    n = gens[0].nvars
    target = monomials_of_degree(n, d)
    rows = []
    for g in gens:
        if g.is_zero() or g.degree() > d:
            continue
        for m in monomials_of_degree(n, d - g.degree()):
            mono = Polynomial(g.ctx, {m: 1}, g.field)
            rows.append((mono * g).coefficient_vector(target))
    if not rows:
        return 0
    return rank(ExactMatrix(rows, p, cols=len(target)))


def brute_force_hf(gens, d: int, p: int) -> int:
    from pfq.arith import binomial_ext

    n = gens[0].nvars
    return binomial_ext(n - 1 + d, n - 1) - macaulay_ideal_dim(gens, d, p)


def standard_monomial_count(lms, n: int, d: int) -> int:
    """Degree-d monomials outside the monomial ideal generated by ``lms`` (enumeration)."""
    from pfq.poly import monomials_of_degree

    return sum(1 for m in monomials_of_degree(n, d)
               if not any(all(a <= b for a, b in zip(l, m)) for l in lms))


def random_small_ideal(seed: int, p: int = 101):
    import random as _random

    from pfq.arith import GF
    from pfq.poly import Polynomial, VarContext, monomials_of_degree

    r = _random.Random(seed)
    n = r.randint(2, 4)
    ctx = VarContext.numbered(n)
    gens = []
    for _ in range(r.randint(1, 3)):
        deg = r.randint(1, 3)
        mons = monomials_of_degree(n, deg)
        terms = {m: r.randrange(1, p) for m in r.sample(mons, min(len(mons), r.randint(1, 3)))}
        gens.append(Polynomial(ctx, terms, GF(p)))
    return gens


# acceptance criteria: one line each, printed in the terminal summary
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (isinstance(k, str), k)):
        terminalreporter.write_line(ACCEPTANCE[key])

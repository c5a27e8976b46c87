from __future__ import annotations

import json
from fractions import Fraction
from math import comb

import pytest

from pfq.poly import monomials_of_degree
from pfq.sheafcoh import (BUILTIN_COMPLEXES, ChernData, Entry, TwistedFreeComplex, bott_h, builtin_complex,
                          chern_twist, complex_cohomology, complex_euler, dimension_audit, euler_char_bundle,
                          is_integral_chi, virtual_dimension, zero_locus_invariants)


def _values(col):
    return [e.value for e in col]


def test_bott_examples():
    assert bott_h(4, 0, 0) == 1
    assert bott_h(4, -5, 4) == 1
    assert bott_h(4, 3, 0) == 35 == len(monomials_of_degree(5, 3))
    assert bott_h(4, -3, 2) == 0
    with pytest.raises(ValueError):
        bott_h(4, 0, 5)


def test_bott_h0_counts_monomials():
    for n in range(1, 5):
        for d in range(0, 7):
            assert bott_h(n, d, 0) == len(monomials_of_degree(n + 1, d))


@pytest.mark.parametrize("n", range(1, 7))
def test_serre_duality_table(n):
    for d in range(-12, 13):
        for i in range(n + 1):
            assert bott_h(n, d, i) == bott_h(n, -d - n - 1, n - i)


def test_complex_euler_examples():
    assert complex_euler(TwistedFreeComplex(4, [[(0, 1)]]), 0) == 1
    assert complex_euler(builtin_complex("rodland"), 0) == 21


def test_be_euler_is_14t_minus_14():
    be = builtin_complex("be-curve")
    for t in range(3, 21):
        oracle = comb(t + 4, 4) - 7 * comb(t + 1, 4) + 7 * comb(t, 4) - (comb(t - 3, 4) if t >= 3 else 0)
        assert complex_euler(be, t) == oracle == 14 * t - 14
    assert [complex_euler(be, t) for t in (3, 4, 7)] == [28, 42, 84]


def test_rodland_at_zero_is_forced():
    col = complex_cohomology(builtin_complex("rodland"), 0)
    assert all(e.forced for e in col)
    assert _values(col) == [0, 0, 21, 0, 0]


def test_eacm_columns():
    eacm = builtin_complex("eacm")
    assert _values(complex_cohomology(eacm, 0))[:3] == [8, 0, 0]
    assert complex_cohomology(eacm, 1)[0].value == 32


@pytest.mark.parametrize("t", range(-20, 21))
def test_acm_squeeze(t):
    col = complex_cohomology(builtin_complex("eacm"), t)
    assert col[1].value == 0 and col[2].value == 0


def test_be_half_canonical_fingerprint():
    be = builtin_complex("be-curve")
    assert _values(complex_cohomology(be, 2)) == [15, 1, 0, 0, 0]
    assert _values(complex_cohomology(be, 0)) == [1, 15, 0, 0, 0]
    assert complex_cohomology(be, 3)[0].value == 28


@pytest.mark.parametrize("name", sorted(BUILTIN_COMPLEXES))
def test_euler_consistency_on_forced_columns(name):
    cx = builtin_complex(name)
    for t in range(-20, 21):
        col = complex_cohomology(cx, t)
        for e in col:
            assert 0 <= e.lo <= e.hi
        if all(e.forced for e in col):
            assert sum((-1) ** i * e.lo for i, e in enumerate(col)) == complex_euler(cx, t)


def test_unforced_entries_stay_intervals():
    col = complex_cohomology(builtin_complex("rodland"), -1)
    assert not all(e.forced for e in col)
    assert any(isinstance(e.as_json(), dict) and e.as_json()["status"] == "inconclusive" for e in col)


def test_complex_json(tmp_path):
    doc = {"ambient_dim": 4, "terms": [[{"twist": -5, "rank": 21}], [{"twist": -4, "rank": 48}],
                                       [{"twist": -3, "rank": 28}]]}
    cx = TwistedFreeComplex.from_json(doc)
    assert cx.terms == builtin_complex("rodland").terms
    path = tmp_path / "cx.json"
    path.write_text(json.dumps(doc))
    assert TwistedFreeComplex.from_json(str(path)).to_json() == doc
    with pytest.raises(ValueError):
        TwistedFreeComplex(4, [[(0, 0)]])


def test_entry_arithmetic():
    assert (Entry(1, 2) + Entry(3, 3)) == Entry(4, 5)
    assert Entry(2, 2).value == 2 and Entry(1, 2).value is None


def test_chern_twist_examples():
    assert chern_twist(ChernData(0, 4), 0) == ChernData(0, 4)
    assert chern_twist(ChernData(-1, 6), 2) == ChernData(3, 14)
    for a in range(0, 21):
        assert chern_twist(ChernData(0, a), 1) == ChernData(2, a + 4)


def test_euler_char_examples():
    assert euler_char_bundle(ChernData(3, 14)) == 8
    for a in range(0, 21):
        assert euler_char_bundle(ChernData(0, a)) == 2 - Fraction(a, 2)
        assert is_integral_chi(ChernData(0, a)) == (a % 2 == 0)
        assert euler_char_bundle(ChernData(2, a + 4)) == 10 - Fraction(3 * a, 2)


def test_twist_functoriality():
    for a in range(0, 21):
        assert euler_char_bundle(chern_twist(ChernData(0, a), 1)) == 10 - Fraction(3 * a, 2)
        # the cubic-in-n Riemann-Roch shape survives twisting back and forth
        for n in range(-3, 4):
            c = chern_twist(ChernData(1, a), n)
            assert chern_twist(c, -n) == ChernData(1, a)


def test_zero_locus_examples():
    assert zero_locus_invariants(ChernData(2, 6)) == (6, 4)
    assert zero_locus_invariants(ChernData(3, 14)) == (14, 15)
    assert zero_locus_invariants(ChernData(2, 8)) == (8, 5)
    with pytest.raises(ValueError):
        zero_locus_invariants(ChernData(2, 7))


def test_virtual_dimension():
    assert virtual_dimension(ChernData(0, 2)) == 1
    assert virtual_dimension(ChernData(-1, 6)) == 7


def test_dimension_audit():
    table = {e.name: e for e in dimension_audit()}
    assert all(e.ok for e in table.values())
    expected = {"pfaffian_reps": 7, "curve_hilb_P4": 56, "theta_moduli": 32, "h0_normal_X": 14,
                "chi_E_tensor_IC": -6, "h0_normal_minus1": 21, "chi_normal_minus1": 14,
                "h1_normal_minus1": 7, "aj_image_dim": 7, "intermediate_jacobian_dim": 30,
                "welters_array": [[35, 30], [28, 14]]}
    for name, value in expected.items():
        assert table[name].value == value
    assert all(e.derivation for e in table.values())

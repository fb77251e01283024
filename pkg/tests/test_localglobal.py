import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import assume, given, settings, strategies as st
from sympy import primerange

from wittconics.hyperfield import is_group_extension, is_morphism, verify_axioms
from wittconics.localglobal import (
    INF, Place, PolyOverQ, as_place, finite_field_quadratic_hyperfield, gauss_valuation, hilbert_symbol,
    local_level, local_square_class_hyperfield, padic_classes, padic_square_class, quaternion_ramification,
    rational_quadratic_hyperfield, reciprocity_check, represents, represents_bruteforce, residue_embedding,
    square_class,
)
from wittconics.numtheory import is_squarefree

SQUAREFREE = [n for n in range(-30, 31) if n not in (0,) and is_squarefree(n)]
nonzero_sf = st.sampled_from(SQUAREFREE)
places = st.sampled_from([INF] + [Place(p) for p in (2, 3, 5, 7, 11, 13)])


def primitive_zero_mod(coefs, m):
    """Some (x, y, z) not all even with sum c_i x_i^2 = 0 mod m (m a power of 2)."""
    r = range(m)
    for x, y, z in product(r, repeat=3):
        if (x % 2 or y % 2 or z % 2) and (coefs[0] * x * x + coefs[1] * y * y + coefs[2] * z * z) % m == 0:
            return True
    return False


# --- square classes ------------------------------------------------------------

@pytest.mark.parametrize("r,sign,core", [(4, 1, 1), (8, 1, 2), (Fraction(-12, 49), -1, 3), (Fraction(2, 3), 1, 6)])
def test_square_class(r, sign, core):
    c = square_class(r)
    assert (c.sign, c.core) == (sign, core)


def test_square_class_zero():
    with pytest.raises(ValueError):
        square_class(0)


def test_padic_square_class_examples():
    assert padic_square_class(-7, 2).label == "1"
    assert padic_square_class(2, 2).label == "2"
    assert pow(3, 3, 7) == 6
    assert padic_square_class(3, 7).label == "u"
    with pytest.raises(ValueError):
        padic_square_class(0, 5)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_padic_class_is_square_iff_one(p):
    # squares of small rationals all land in class 1, and the class list is closed
    for n in range(1, 40):
        assert padic_square_class(Fraction(n * n, 9), p).rep == 1
    classes = padic_classes(p)
    assert len(classes) == (8 if p == 2 else 4)
    for a, b in product(classes, repeat=2):
        assert padic_square_class(a * b, p).rep in classes


# --- Hilbert symbol ------------------------------------------------------------

@given(nonzero_sf, places)
def test_symbol_with_one(b, v):
    assert hilbert_symbol(1, b, v) == 1


def test_symbol_examples():
    assert not primitive_zero_mod((1, 1, 1), 8)
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(2, 3, 3) == -1
    assert hilbert_symbol(-1, -1, "inf") == -1


@given(nonzero_sf, nonzero_sf, nonzero_sf)
@settings(max_examples=200)
def test_bimultiplicative_and_symmetric(a, b, c):
    for v in {INF, Place(2)} | {Place(p) for p in primerange(3, 32) if (a * b * c) % p == 0}:
        assert hilbert_symbol(a, b * c, v) == hilbert_symbol(a, b, v) * hilbert_symbol(a, c, v)
        assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)


@given(nonzero_sf, nonzero_sf, st.integers(1, 12), st.integers(1, 12), places)
@settings(max_examples=200)
def test_square_class_invariance(a, b, s, t, v):
    A, B = Fraction(a * s * s, t * t), b * t * t
    assert hilbert_symbol(A, B, v) == hilbert_symbol(a, b, v)
    assert quaternion_ramification(A, B) == quaternion_ramification(a, b)
    assert represents(A, B, s * s * 5) == represents(a, b, 5)


def test_symbol_matches_solution_search():
    # (a, b)_p = 1 iff a x^2 + b y^2 = z^2 has a liftable zero mod p^3 (2^8 at p = 2)
    for a, b in [(2, 3), (-1, -1), (3, 5), (-2, 7), (6, -3), (5, 10)]:
        for p in (2, 3, 5, 7):
            assert (hilbert_symbol(a, b, p) == 1) == represents_bruteforce(a, b, 1, p)


# --- reciprocity and ramification ----------------------------------------------

def test_reciprocity_examples():
    assert reciprocity_check(-1, -1)
    assert quaternion_ramification(-1, -1).labels() == ["2", "inf"]
    assert reciprocity_check(2, 3)
    assert quaternion_ramification(2, 3).labels() == ["2", "3"]
    for n in (2, -3, 10, Fraction(5, 7)):
        assert reciprocity_check(1, n)
        assert quaternion_ramification(1, n).is_split


def test_ramification_examples():
    assert quaternion_ramification(1, 1).is_split
    assert quaternion_ramification(-385, -1).labels() == ["2", "7", "11", "inf"]


@given(nonzero_sf, nonzero_sf)
@settings(max_examples=200)
def test_reciprocity_property(a, b):
    R = quaternion_ramification(a, b)
    assert len(R.places) % 2 == 0
    assert reciprocity_check(a, b)


# --- representation ------------------------------------------------------------

def test_represents_examples():
    assert represents(1, 1, 5)
    assert not represents(1, 1, -1)
    assert not represents(2, 3, 1, Place(3))
    assert represents(1, 1, 5, "global")
    with pytest.raises(ValueError):
        represents(0, 1, 1)


@pytest.mark.parametrize("p", [2] + list(primerange(3, 14)))
def test_local_oracle_agreement(p):
    cls = padic_classes(p)
    for a, b, c in product(cls, repeat=3):
        assert represents(a, b, c, Place(p)) == represents_bruteforce(a, b, c, p), (a, b, c)


@given(nonzero_sf, nonzero_sf)
def test_value_set_contains_coefficients(a, b):
    assert represents(a, b, a) and represents(a, b, b)


# --- hyperfield builders --------------------------------------------------------

def test_real_table():
    H = local_square_class_hyperfield(INF)
    assert H.elements == ("0", "1", "-1")
    assert H.plus(1, 1) == {1}
    assert H.plus(1, 2) == {0, 1, 2}


def test_q3_table():
    H = local_square_class_hyperfield(3)
    assert H.n == 5
    assert {H.index("p"), H.index("up")} <= H.plus(H.one, H.index("u"))
    assert verify_axioms(H) == []


def test_q2_table():
    H = local_square_class_hyperfield(2)
    assert H.n == 9
    assert H.index("5") in H.plus(H.one, H.one)
    assert verify_axioms(H) == []


@pytest.mark.parametrize("v", ["inf", 2, 3, 5, 7, 11, 13])
def test_local_tables_contain_summands(v):
    H = local_square_class_hyperfield(v)
    assert H.n - 1 == {"inf": 2, 2: 8}.get(v, 4)
    for a in H.nonzero:
        for b in H.nonzero:
            assert {a, b} <= H.plus(a, b)


def test_local_table_agrees_with_oracle():
    v = Place(5)
    from wittconics.localglobal import local_oracle_hyperfield
    O = local_oracle_hyperfield(v)
    H = local_square_class_hyperfield(v)
    carrier = [0] + padic_classes(5)
    for i, j, k in product(range(5), repeat=3):
        assert (k in H.plus(i, j)) == O.contains(carrier[k], carrier[i], carrier[j])
    assert O.contains(25 * 2, 2, 0)


def test_finite_field_builder_examples():
    assert finite_field_quadratic_hyperfield(3).elements == ("0", "1", "-1")
    H5 = finite_field_quadratic_hyperfield(5)
    assert H5.neg[1] == 1
    H9 = finite_field_quadratic_hyperfield(9)
    assert H9.neg[1] == 1 and H9.add == H5.add
    with pytest.raises(ValueError):
        finite_field_quadratic_hyperfield(8)
    with pytest.raises(ValueError):
        finite_field_quadratic_hyperfield(2003)


def test_rational_oracle_hyperfield():
    Q = rational_quadratic_hyperfield()
    assert Q.contains(5, 1, 1)
    assert not Q.contains(-1, 1, 1)
    assert Q.contains(0, 3, -3)
    assert Q.contains(12, 1, 2) == Q.contains(3, 1, 2)


# --- residue embedding ---------------------------------------------------------

def test_residue_embedding_examples():
    f3 = residue_embedding(3)
    tgt = f3.target
    assert f3(1) == tgt.one
    assert tgt.elements[f3(2)] == padic_square_class(-1, 3).label == "u"
    f5 = residue_embedding(5)
    assert f5.source.neg[1] == 1 and f5(f5.source.neg[1]) == f5.target.one
    f7 = residue_embedding(7)
    assert sorted(f7.target.elements[f7(x)] for x in (1, 2)) == ["1", "u"]
    with pytest.raises(ValueError):
        residue_embedding(2)


@pytest.mark.parametrize("p", list(primerange(3, 30)))
def test_residue_embedding_structure(p):
    f = residue_embedding(p)
    assert is_morphism(f) and is_group_extension(f)
    outside = {f.target.elements[x] for x in f.target.nonzero} - {f.target.elements[f(x)] for x in (1, 2)}
    assert outside == {"p", "up"}


# --- Gauss valuation and levels ------------------------------------------------

def test_gauss_examples():
    assert gauss_valuation([9, 0, 3], 3) == 1
    assert gauss_valuation([1, 1], 5) == 0
    assert gauss_valuation([25, 5], 5, denominator=[5, 1]) == 1
    assert gauss_valuation([0], 7) == math.inf
    with pytest.raises(ValueError):
        gauss_valuation([1], 5, denominator=[0])


poly = st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=30), min_size=1, max_size=4)


@given(poly, poly, st.sampled_from([2, 3, 5]))
@settings(max_examples=150)
def test_gauss_lemma(f, g, p):
    F, G = PolyOverQ(f), PolyOverQ(g)
    assume(not F.is_zero() and not G.is_zero())
    assert gauss_valuation(F * G, p) == gauss_valuation(F, p) + gauss_valuation(G, p)


def test_levels():
    assert local_level(5) == 1
    assert local_level(7) == 2
    assert local_level(2) == 4
    assert local_level("inf") == math.inf
    for p in primerange(3, 60):
        assert local_level(p) == (1 if p % 4 == 1 else 2)


def test_place_parsing():
    assert as_place("inf") is INF or as_place("inf") == INF
    assert as_place("7") == Place(7)
    with pytest.raises(ValueError):
        as_place(9)

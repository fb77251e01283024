from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from wittconics.numtheory import is_squarefree
from wittconics.quadfields import (
    REAL_QUADRATIC_TABLE, QuadraticField, class_group_2rank, compose, discriminant_of,
    distinct_2rank_family, imaginary_class_group_oracle, is_sum_two_squares, quadfield_summary,
    ramified_count, rational_function_field_inequiv, real_table_report, reduce_form, reduced_forms,
    sum_two_squares_agrees, vk_2rank,
)


def sum_of_two_squares_naive(n):
    return any(int((n - x * x) ** 0.5 + 0.5) ** 2 == n - x * x for x in range(int(n ** 0.5) + 1))


def test_discriminant_examples():
    assert discriminant_of(5) == 5
    assert discriminant_of(3) == 12
    assert discriminant_of(-5) == -20
    for bad in (0, 1, 4, 12):
        with pytest.raises(ValueError):
            discriminant_of(bad)
    with pytest.raises(ValueError):
        QuadraticField(18)


def test_ramified_count_examples():
    assert ramified_count(10) == 2
    assert ramified_count(-5) == 2
    assert ramified_count(5) == 1


def test_sum_two_squares_examples():
    assert is_sum_two_squares(10) and not is_sum_two_squares(3) and is_sum_two_squares(34)
    with pytest.raises(ValueError):
        is_sum_two_squares(-5)


def test_sum_two_squares_against_naive_and_global_representation():
    for d in range(1, 501):
        if is_squarefree(d):
            assert is_sum_two_squares(d) == sum_of_two_squares_naive(d)
            assert sum_two_squares_agrees(d)


def test_class_group_2rank_examples():
    assert class_group_2rank(10) == 1
    assert class_group_2rank(3) == 0
    assert class_group_2rank(-5) == 1
    assert REAL_QUADRATIC_TABLE[10]["h"] == 2 and REAL_QUADRATIC_TABLE[3]["h"] == 1


def test_imaginary_oracle_examples():
    g = imaginary_class_group_oracle(-1)
    assert (g.order, g.two_rank) == (1, 0)
    g = imaginary_class_group_oracle(-5)
    assert (g.order, g.two_rank) == (2, 1)
    assert set(g.representatives) == {(1, 0, 5), (2, 2, 3)}
    g = imaginary_class_group_oracle(-23)
    assert (g.order, g.two_rank) == (3, 0)
    with pytest.raises(ValueError):
        imaginary_class_group_oracle(5)
    with pytest.raises(ValueError):
        imaginary_class_group_oracle(-101, max_abs=100)


@pytest.mark.parametrize("d,h,rank", [(-14, 4, 1), (-21, 4, 2), (-105, 8, 3), (-47, 5, 0), (-30, 4, 2)])
def test_known_class_groups(d, h, rank):
    g = imaginary_class_group_oracle(d)
    assert (g.order, g.two_rank) == (h, rank)
    assert g.order % (1 << g.two_rank) == 0


def test_composition_is_a_group_law():
    D = discriminant_of(-105)
    forms = reduced_forms(D)
    e = reduce_form((1, 0, 105))
    for f in forms:
        assert compose(f, e) == f
        assert compose(f, (f[0], -f[1], f[2])) == e
    for f, g in combinations(forms, 2):
        assert compose(f, g) == compose(g, f)
        assert compose(f, g) in forms


@pytest.mark.parametrize("d", [d for d in range(-200, -1) if is_squarefree(d)])
def test_formula_matches_forms_oracle(d):
    assert class_group_2rank(d) == imaginary_class_group_oracle(d).two_rank


def test_real_table():
    report = real_table_report()
    assert [r["d"] for r in report] == sorted(REAL_QUADRATIC_TABLE)
    assert all(r["formula"] == r["table"] for r in report)
    assert {r["d"] for r in report if r["narrow_differs"]} == {3, 6, 7, 11, 14, 15, 30}


def test_vk_2rank_examples():
    assert vk_2rank(10) == 3
    assert vk_2rank(-1) == 1


def test_family():
    assert distinct_2rank_family(1) == [5]
    assert distinct_2rank_family(3) == [5, 65, 5 * 13 * 17]
    fam = distinct_2rank_family(5)
    assert [class_group_2rank(d) for d in fam] == [0, 1, 2, 3, 4]
    for d1, d2 in combinations(fam, 2):
        assert rational_function_field_inequiv(d1, d2)
    with pytest.raises(ValueError):
        distinct_2rank_family(0)


def test_inequivalence_examples():
    assert rational_function_field_inequiv(10, 3)
    assert rational_function_field_inequiv(-5, 5)
    assert not rational_function_field_inequiv(2, 3)


def test_summary_shape():
    assert quadfield_summary(10) == {"d": 10, "discriminant": 40, "N": 2, "branch": "N-1",
                                     "two_rank": 1, "vk_two_rank": 3}
    assert quadfield_summary(3)["branch"] == "N-2"


@given(st.integers(-300, 300).filter(lambda d: d not in (0, 1) and is_squarefree(d)))
def test_2rank_bounds(d):
    N = ramified_count(d)
    assert class_group_2rank(d) in (N - 1, N - 2)
    assert class_group_2rank(d) >= 0

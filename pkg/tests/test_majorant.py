from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rothsq.core.arith import SmoothnessContext, admissible_b2, is_smooth, smooth_numbers_upto
from rothsq.core.errors import PreconditionError
from rothsq.core.majorant import (
    Majorant,
    WParams,
    class_statistics,
    indicator,
    lift_set,
    mass_report,
    plain_majorant,
    residue_class,
    select_b,
    weights_of,
    wtricked_majorant,
)


def test_default_params(small_params):
    p = small_params
    assert (p.W, p.b1, p.b2, p.sigma, p.Nb) == (24, 1, 23, 8, 417)
    assert p.residues() == [1, 5, 7, 11, 13, 17, 19, 23]


@pytest.mark.parametrize(
    "b1, b2, field",
    [
        (5, 23, "b1"),
        (16, 23, "b1"),
        (1, 1, "b2"),
        (1, 2, "b2"),
    ],
)
def test_build_rejects(b1, b2, field):
    with pytest.raises(PreconditionError) as info:
        WParams.build(100, 3, b1, b2)
    assert info.value.field == field


def test_plain_majorant():
    nu = plain_majorant(30)
    assert nu.total_mass() == 30 * 31
    assert nu.weight(49) == 14
    assert nu.weight(50) == 0


def test_wtricked_weights(small_params):
    p = small_params
    nu = wtricked_majorant(p)
    assert nu.support_len == p.Nb
    assert nu.scale == Fraction(2, 8)
    for n, y in nu.numerators.items():
        assert 1 <= n <= p.Nb
        assert y * y == p.W * n - p.b2
        assert 1 <= y <= p.X


def test_wtricked_weights_with_b1():
    p = WParams.build(400, 3, 2, 23)
    nu = wtricked_majorant(p)
    for n, y in nu.numerators.items():
        x = p.b1 * y
        assert x <= p.X
        assert p.b1 ** 2 * (p.W * n - p.b2) == x * x


def test_mass_identity(small_params):
    report = mass_report(small_params)
    assert report.mass == wtricked_majorant(small_params).total_mass()
    assert report.error == report.mass - small_params.Nb
    assert report.constant < 4


def test_majorant_rejects_bad_support():
    with pytest.raises(PreconditionError):
        Majorant(5, {6: 1})
    with pytest.raises(PreconditionError):
        Majorant(5, {2: -1})


def test_restrict_and_dense(small_params):
    nu = wtricked_majorant(small_params)
    subset = nu.support()[:3]
    restricted = nu.restrict(subset)
    assert restricted.support() == subset
    dense = nu.dense()
    assert len(dense) == small_params.Nb + 1
    assert dense[subset[0]] == pytest.approx(float(nu.weight(subset[0])))


def test_weights_of_variants():
    assert weights_of({3, 1}) == {1: 1, 3: 1}
    assert weights_of({1: 0, 2: 5}) == {2: 5}
    assert weights_of(indicator(3)) == {1: 1, 2: 1, 3: 1}


def test_lift_set(small_params):
    assert lift_set({5}, small_params) == {2}
    assert lift_set({2, 4, 6}, small_params) == set()
    with pytest.raises(PreconditionError):
        lift_set({101}, small_params)


@given(st.integers(min_value=1, max_value=10**5), st.sampled_from([3, 5]))
def test_residue_classes_partition(x, w):
    ctx = SmoothnessContext.for_cutoff(w)
    b1, b2 = residue_class(x, ctx)
    assert is_smooth(b1, w)
    y, r = divmod(x, b1)
    assert r == 0
    assert (y * y + b2) % ctx.W == 0
    assert 1 <= b2 < ctx.W


def test_residue_classes_are_unique():
    X = 500
    ctx = SmoothnessContext.for_cutoff(3)
    b1_values = smooth_numbers_upto(X, 3)
    b2_values = admissible_b2(ctx.W)
    for x in range(1, X + 1):
        hits = [
            (b1, b2)
            for b1 in b1_values
            if x % b1 == 0
            for b2 in b2_values
            if ((x // b1) ** 2 + b2) % ctx.W == 0
        ]
        assert hits == [residue_class(x, ctx)]


@given(
    st.sets(st.integers(min_value=1, max_value=300), min_size=1, max_size=40),
    st.sets(st.integers(min_value=1, max_value=300), max_size=40),
)
def test_select_b_is_monotone_in_A(A, extra):
    X = 300
    ctx = SmoothnessContext.for_cutoff(3)
    larger = A | extra
    small_table = class_statistics(A, X, ctx)
    large_table = class_statistics(larger, X, ctx)
    for b, value in small_table.items():
        assert value <= large_table[b]
    assert select_b(A, 3, X).normalized <= select_b(larger, 3, X).normalized


def test_select_b_full_interval():
    selection = select_b(range(1, 401), 3, 400)
    assert selection.normalized >= 0.5
    assert selection.delta == 1.0


@pytest.mark.parametrize("delta", [1, Fraction(1, 2), Fraction(1, 4)])
def test_select_b_density_check(delta):
    X = 400
    A = range(1, int(delta * X) + 1)
    selection = select_b(A, 3, X)
    assert float(selection.statistic) >= 0.1 * selection.delta_sq_nb


def test_select_b_singleton():
    selection = select_b({5}, 3, 100)
    assert selection.statistic == Fraction(5, 4)
    p = selection.params
    nu = wtricked_majorant(p)
    (n,) = lift_set({5}, p)
    assert nu.weight(n) == selection.statistic


def test_select_b_matches_table():
    A = [1, 5, 7, 10, 25, 49, 50]
    ctx = SmoothnessContext.for_cutoff(3)
    table = class_statistics(A, 100, ctx)
    selection = select_b(A, 3, 100)
    assert selection.statistic == table[(selection.params.b1, selection.params.b2)]
    best = max(v / WParams.build(100, 3, *b).Nb for b, v in table.items())
    assert selection.normalized == pytest.approx(float(best))

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rothsq.core.counting import (
    Equation,
    SubspaceFamily,
    admissible_modulus,
    config_gap,
    count_brute,
    count_dft,
    count_ktrivial,
    count_report,
    default_modulus,
    ktrivial_sum,
    ktrivial_weighted,
    progression_solution,
    system_direction,
    telescope_check,
)
from rothsq.core.errors import PreconditionError
from rothsq.core.majorant import indicator, wtricked_majorant


def _random_weights(rng, N, low=-3, high=4):
    return {n: int(v) for n, v in enumerate(rng.integers(low, high, N), start=1)}


def test_equation_properties(quintic, quartic):
    assert quintic.s == 5 and quintic.sum_zero and quintic.is_admissible
    assert quintic.signs == (4, 1)
    assert quartic.quadratic((1, 7, 5, 5)) == 0
    assert not Equation((1, -1)).is_admissible
    with pytest.raises(PreconditionError):
        Equation((1, 0, -1))
    with pytest.raises(PreconditionError):
        Equation((3,))


def test_count_brute_small_cases():
    assert count_brute([indicator(9)] * 2, Equation((1, -1))) == 9
    assert count_brute([indicator(10)] * 3, Equation((1, 1, -2))) == 50
    assert count_brute([{1: 1}, {2: 1}], Equation((1, -1))) == 0
    assert count_brute([{}, indicator(4)], Equation((1, -1))) == 0


def test_count_brute_permutation_symmetry(rng):
    f, g, h = (_random_weights(rng, 8) for _ in range(3))
    assert count_brute([f, g, h], Equation((1, 2, -3))) == count_brute([g, f, h], Equation((2, 1, -3)))


def test_count_brute_arity():
    with pytest.raises(PreconditionError) as info:
        count_brute([indicator(3)] * 2, Equation((1, 1, -2)))
    assert info.value.field == "fs"


@pytest.mark.parametrize("coeffs", [(1, -1), (1, 1, -2), (1, 2, -3), (1, 1, -1, -1), (2, 3, -1, -4)])
def test_count_dft_matches_brute(rng, coeffs):
    eq = Equation(coeffs)
    for N in (1, 5, 16):
        fs = [_random_weights(rng, N) for _ in coeffs]
        assert count_dft(fs, eq) == count_brute(fs, eq)


def test_count_dft_rational_weights(small_params, quartic):
    nu = wtricked_majorant(small_params).restrict(range(1, 60))
    brute = count_brute([nu] * 4, quartic)
    assert count_dft([nu] * 4, quartic) == pytest.approx(float(brute), rel=1e-9)


def test_count_dft_modulus():
    eq = Equation((1, -1))
    fs = [indicator(5)] * 2
    assert admissible_modulus(fs, eq) == 5
    with pytest.raises(PreconditionError) as info:
        count_dft(fs, eq, M=4)
    assert info.value.field == "M"
    assert ">= 5" in info.value.message
    assert count_dft(fs, eq, M=5) == 5
    assert count_dft(fs, eq, M=20) == 5
    assert default_modulus(fs, eq) == 16


def test_subspace_family_validation(quintic):
    with pytest.raises(PreconditionError) as info:
        SubspaceFamily.from_forms(quintic, [(2, 2, 2, 2, -8)])
    assert info.value.field == "forms"
    with pytest.raises(PreconditionError):
        SubspaceFamily.from_forms(quintic, [(1, -1)])
    family = SubspaceFamily.from_forms(quintic, [(1, 0, 0, 0, 0), (1, -1, 0, 0, 0)])
    assert family.contains_diagonal == [False, True]
    assert len(SubspaceFamily.pairs_equal(quintic)) == 10


def test_subspace_family_contains(quartic):
    family = SubspaceFamily.pairs_equal(quartic)
    assert family.contains((3, 5, 3, 5))
    assert not family.contains((1, 7, 3, 5))
    assert not family.contains((1, 1, 1, 2))


def test_count_ktrivial_diagonal(quintic):
    assert count_ktrivial(15, SubspaceFamily.diagonal(quintic)) == 15


@pytest.mark.parametrize("X", [1, 16, 40, 97])
def test_count_ktrivial_diagonal_counts_every_x(quintic, X):
    assert count_ktrivial(X, SubspaceFamily.diagonal(quintic)) == X
    assert count_ktrivial(15, SubspaceFamily(quintic, ())) == 0


def test_count_ktrivial_pairs_equal_matches_enumeration(quintic):
    X = 12
    expected = 0
    for head in itertools.product(range(1, X + 1), repeat=4):
        total = sum(x * x for x in head)
        if total % 4:
            continue
        x5 = math.isqrt(total // 4)
        if x5 * x5 * 4 == total and x5 <= X and len(set(head + (x5,))) < 5:
            expected += 1
    assert count_ktrivial(X, SubspaceFamily.pairs_equal(quintic), threads=2) == expected


def test_ktrivial_sum_first_member_attribution(quartic):
    f = indicator(8)
    family = SubspaceFamily.pairs_equal(quartic)
    expected = sum(
        1
        for n in itertools.product(range(1, 9), repeat=4)
        if n[0] + n[1] == n[2] + n[3] and len(set(n)) < 4
    )
    assert ktrivial_sum(f, family) == expected


def test_ktrivial_sum_rational_weights(quartic):
    f = {1: Fraction(1, 2), 2: Fraction(1, 3)}
    family = SubspaceFamily.diagonal(quartic)
    assert ktrivial_sum(f, family) == Fraction(1, 16) + Fraction(1, 81)


def test_ktrivial_weighted_diagonal(small_params, quintic):
    nu = wtricked_majorant(small_params)
    report = ktrivial_weighted(nu, small_params, SubspaceFamily.diagonal(quintic))
    assert report.value == sum(nu.weight(n) ** 5 for n in nu.support())
    assert report.contains_diagonal == [True]
    assert report.saving_scale == pytest.approx(float(nu.total_mass()) ** 5 / small_params.Nb ** 1.2)


def test_ktrivial_weighted_empty_family(small_params, quintic):
    report = ktrivial_weighted(wtricked_majorant(small_params), small_params, SubspaceFamily(quintic, ()))
    assert report.value == 0
    assert report.ratio == 0
    assert report.per_member == []


def test_count_report(quartic):
    report = count_report(indicator(8), quartic, K=SubspaceFamily.pairs_equal(quartic))
    assert report.brute == report.dft == 344
    assert 0 < report.ktrivial <= report.brute
    assert report.heuristic == 8 ** 3
    assert report.to_dict()["M"] == report.M


def test_telescope_check():
    f = {1: 2, 2: 3, 3: -1}
    g = {1: 1, 3: 5}
    assert telescope_check(f, g, itertools.product([1, 2, 3, 4], repeat=3))
    assert telescope_check(indicator(3), {}, [(1, 2), (3, 3)])


def test_config_gap(quartic):
    f = indicator(10)
    same = config_gap(f, f, quartic, 3.5, f, 10)
    assert same.gap == 0 and same.rhs == pytest.approx(0, abs=1e-9)
    empty = config_gap(f, {}, quartic, 3.5, f, 10)
    assert empty.gap == 670
    assert empty.rhs == pytest.approx(1000)


@pytest.mark.parametrize(
    "f, g, p_exp, field",
    [
        ({1: 2}, {}, 3.5, "f"),
        ({1: 1}, {}, 4.0, "p"),
        ({1: 1}, {11: 1}, 3.5, "g"),
        ({1: 1}, {2: 2}, 3.5, "g"),
    ],
)
def test_config_gap_rejects(quartic, f, g, p_exp, field):
    with pytest.raises(PreconditionError) as info:
        config_gap(f, g, quartic, p_exp, indicator(10), 10)
    assert info.value.field == field


def test_system_direction(quartic, quintic):
    assert system_direction(quartic, 3) == (0, 1, 0, 1)
    assert system_direction(quintic, 6) is None
    with pytest.raises(PreconditionError):
        system_direction(Equation((1, 1, -3)), 3)


def test_progression_solution(quartic):
    y = progression_solution(quartic, (0, 1, 0, 1), 3, 2)
    assert y == (3, 5, 3, 5)
    assert quartic.quadratic(y) == 0
    with pytest.raises(PreconditionError) as info:
        progression_solution(quartic, (1, 2, 3, 4), 1, 1)
    assert info.value.field == "direction"


@given(
    st.sampled_from([(1, 1, -1, -1), (1, 2, -1, -2), (3, 1, -3, -1), (1, 1, 1, -1, -1, -1)]),
    st.integers(min_value=0, max_value=5),
)
def test_system_solutions_are_shift_invariant(coeffs, t):
    eq = Equation(coeffs)
    x = system_direction(eq, 3)
    assert x is not None
    shifted = tuple(v + t for v in x)
    assert eq.linear(shifted) == 0
    assert eq.quadratic(shifted) == 0
    assert progression_solution(eq, shifted, 1, 2) == tuple(1 + 2 * v for v in shifted)

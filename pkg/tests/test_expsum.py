import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import totient

from rothsq.core.arith import is_smooth
from rothsq.core.errors import PreconditionError
from rothsq.core.expsum import (
    arcs,
    decay_sup,
    decay_sup_of,
    dirichlet_approximation,
    fourier_at,
    fourier_grid,
    gauss_sum,
    gauss_table,
    integral_I,
    major_arc_error,
    major_arc_main,
    major_arc_sweep,
    minor_arc_bound,
    smooth_vanishing_residual,
    weyl_ratio,
)
from rothsq.core.majorant import WParams, indicator, mass_report, plain_majorant, wtricked_majorant


def test_fourier_at_indicator():
    assert fourier_at(indicator(10), 0) == pytest.approx(10)
    assert abs(fourier_at(indicator(10), Fraction(1, 2))) < 1e-12
    assert abs(fourier_at(indicator(12), Fraction(1, 3))) < 1e-12


def test_fourier_at_large_frequency_reduction():
    f = {10**9: 1}
    alpha = Fraction(1, 7)
    expected = cmath.exp(2j * math.pi * ((10**9 % 7) / 7))
    assert fourier_at(f, alpha) == pytest.approx(expected, abs=1e-12)


def test_fourier_grid_matches_pointwise(rng):
    f = {int(n): int(v) for n, v in zip(rng.integers(1, 40, 25), rng.integers(-5, 6, 25))}
    grid = fourier_grid(f, 64)
    for t in (0, 1, 7, 31, 63):
        assert grid.at(t) == pytest.approx(fourier_at(f, Fraction(t, 64)), abs=1e-9)


def test_fourier_grid_parseval(rng):
    f = {n: float(v) for n, v in enumerate(rng.normal(size=50), start=1)}
    grid = fourier_grid(f, 128)
    assert grid.parseval() == pytest.approx(sum(v * v for v in f.values()), rel=1e-9)


def test_fourier_grid_rejects_small_modulus():
    with pytest.raises(PreconditionError) as info:
        fourier_grid(indicator(20), 10)
    assert info.value.field == "M"


def test_gauss_sum_rejects_non_root(small_params):
    with pytest.raises(PreconditionError) as info:
        gauss_sum(5, 1, 2, small_params)
    assert info.value.field == "z"


def test_gauss_sum_trivial_modulus(small_params):
    for z in small_params.residues():
        assert gauss_sum(1, 0, z, small_params) == pytest.approx(1)


def test_gauss_table_agrees_with_gauss_sum(small_params):
    rows = gauss_table(small_params, 12, threads=2)
    for row in rows[:20]:
        q, a = row["q"], row["a"]
        direct = max(abs(gauss_sum(q, a, z, small_params)) for z in small_params.residues())
        assert row["max_abs_S"] == pytest.approx(direct, abs=1e-9)
        assert row["residual"] == pytest.approx(smooth_vanishing_residual(q, a, small_params), abs=1e-9)


@pytest.mark.parametrize("w, qmax", [(3, 60), (5, 60)])
def test_gauss_sum_magnitude(w, qmax):
    p = WParams.default(1000, w)
    for row in gauss_table(p, qmax):
        assert row["max_abs_S"] <= row["bound"] + 1e-9


@pytest.mark.slow
def test_gauss_sum_magnitude_full():
    p = WParams.default(1000, 5)
    for row in gauss_table(p, 500):
        assert row["max_abs_S"] <= row["bound"] + 1e-9


@pytest.mark.parametrize("w", [3, 5])
def test_smooth_vanishing(w):
    p = WParams.default(1000, w)
    rows = gauss_table(p, 200)
    smooth_rows = [row for row in rows if row["q"] >= 2 and is_smooth(row["q"], w)]
    assert smooth_rows
    assert all(row["smooth"] for row in smooth_rows)
    assert max(row["residual"] for row in smooth_rows) <= 1e-9


def test_gauss_sum_vanishes_off_reduced_moduli():
    p = WParams.default(1000, 5)
    rows = [row for row in gauss_table(p, 200) if 2 % math.gcd(row["q"], p.W)]
    assert {row["q"] for row in rows} >= {3, 4, 5, 6, 8, 9, 10, 12, 15}
    assert max(row["max_abs_S"] for row in rows) <= 1e-9


@given(st.integers(min_value=1, max_value=10**4), st.integers(min_value=2, max_value=10**4))
def test_majorant_transform_conjugate_symmetry(num, den):
    nu = wtricked_majorant(WParams.default(100, 3))
    alpha = Fraction(num, den)
    assert fourier_at(nu, 1 - alpha) == pytest.approx(fourier_at(nu, alpha).conjugate(), abs=1e-6)


def test_integral_I():
    assert integral_I(0, 25) == 25
    assert abs(integral_I(Fraction(1, 10), 10)) < 1e-12
    beta, N = 0.013, 50
    ts = np.linspace(0, N, 200001)
    trapezoid = getattr(np, "trapezoid", None) or np.trapz
    numeric = trapezoid(np.exp(2j * np.pi * beta * ts), ts)
    assert integral_I(beta, N) == pytest.approx(complex(numeric), abs=1e-6)


def test_major_arc_main_at_zero(small_params):
    assert major_arc_main(0, 1, 0, small_params) == pytest.approx(small_params.Nb)


def test_major_arc_error_at_zero_is_mass_constant(small_params):
    assert major_arc_error(0, 1, 0, small_params) == pytest.approx(mass_report(small_params).constant)


def test_major_arc_error_requires_coprime(small_params):
    with pytest.raises(PreconditionError):
        major_arc_main(Fraction(1, 2), 4, 2, small_params)


def test_major_arc_sweep(small_params):
    samples = major_arc_sweep(small_params, qmax=2, points=5, threads=1)
    assert len(samples) == 10
    assert {(s.q, s.a) for s in samples} == {(1, 0), (2, 1)}
    assert all(math.isfinite(s.ratio) and s.ratio >= 0 for s in samples)


def test_weyl_ratio_rejects_large_b1():
    p = WParams.build(100, 3, 8, 23)
    with pytest.raises(PreconditionError) as info:
        weyl_ratio(Fraction(1, 3), 3, 1, p)
    assert info.value.field == "b1"


@pytest.mark.parametrize("q", [1, 2, 3, 5, 7, 12])
def test_weyl_ratio_at_rationals(q):
    p = WParams.default(1000, 3)
    nu = wtricked_majorant(p)
    a = 1 if q > 1 else 0
    assert weyl_ratio(Fraction(a, q), q, a, p, nu) < 1


def test_minor_arc_bound_is_finite(small_params):
    value = minor_arc_bound(Fraction(3, 7) + Fraction(1, 1000), small_params)
    assert math.isfinite(value) and value >= 0


def test_dirichlet_approximation():
    alpha = Fraction(1, 3) + Fraction(1, 10**6)
    assert dirichlet_approximation(alpha, 10) == (1, 3)
    a, q = dirichlet_approximation(0.7182818, 50)
    assert q <= 50
    assert abs(q * 0.7182818 - a) <= 0.5


def test_decay_report_fields(small_params):
    report = decay_sup(small_params)
    assert report.grid_factor == 16
    assert report.N == small_params.Nb
    assert report.sup_ratio >= 0
    nu = wtricked_majorant(small_params)
    expected = 2 * math.pi * float(nu.total_mass()) / (16 * small_params.Nb)
    assert report.bernstein_slack == pytest.approx(expected)


def test_decay_rejects_coarse_grid(small_params):
    with pytest.raises(PreconditionError):
        decay_sup(small_params, grid_factor=4)


def test_plain_majorant_has_no_decay():
    X = 50
    report = decay_sup_of(plain_majorant(X), X * X, 16)
    assert report.sup_ratio >= 0.4


def test_wtrick_beats_plain_majorant():
    X = 200
    plain = decay_sup_of(plain_majorant(X), X * X, 16)
    tricked = decay_sup(WParams.default(X, 3))
    assert tricked.sup_ratio < plain.sup_ratio


def test_arcs_decomposition():
    decomposition = arcs(10**6, 0.25)
    assert decomposition.Q == 31
    assert len(decomposition.arcs) == sum(int(totient(q)) for q in range(1, 32))
    assert decomposition.pairwise_disjoint()
    assert decomposition.total_measure_bound() == pytest.approx(2 * decomposition.radius * len(decomposition.arcs))
    located = decomposition.locate(Fraction(1, 3) + Fraction(1, 10**6))
    assert (located.q, located.a) == (3, 1)
    assert decomposition.locate(0.501) is None


def test_arcs_rejects_bad_tau():
    with pytest.raises(PreconditionError):
        arcs(1000, 0.6)
    assert arcs(1000, 0.01).Q == 1

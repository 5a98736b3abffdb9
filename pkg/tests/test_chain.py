import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ionbound.chain import (
    ChainSolverError,
    MAX_IONS,
    equilibrium_positions,
    fit_min_spacing,
    length_scale,
    min_spacing_meters,
    solve_chain_range,
)


@pytest.fixture(scope="module")
def small_sweep():
    # shared across tests; [2, 30] keeps this module fast
    return solve_chain_range(2, 30)


def test_two_ions_analytic():
    # force balance: u = 1/(2u)^2  =>  u = (1/4)^(1/3)
    sol = equilibrium_positions(2)
    expected = 0.25 ** (1.0 / 3.0)
    assert_allclose(np.asarray(sol.positions, dtype=float), [-expected, expected], rtol=1e-12)


def test_three_ions_analytic():
    # outer ions: u = 1/(2u)^2 + 1/u^2  =>  u = (5/4)^(1/3), center at 0
    sol = equilibrium_positions(3)
    expected = 1.25 ** (1.0 / 3.0)
    assert_allclose(
        np.asarray(sol.positions, dtype=float), [-expected, 0.0, expected], rtol=1e-12
    )
    assert float(sol.positions[1]) == 0.0


@pytest.mark.parametrize("n_ions", [4, 7, 12, 25])
def test_solution_structure(n_ions):
    sol = equilibrium_positions(n_ions)
    positions = np.asarray(sol.positions, dtype=float)
    assert sol.n_ions == n_ions
    assert positions.shape == (n_ions,)
    assert np.all(np.diff(positions) > 0)
    # default solve is exactly antisymmetric, so the center of charge is 0
    assert_allclose(positions + positions[::-1], np.zeros(n_ions), atol=0.0)
    assert sol.residual <= 1e-10
    assert sol.min_spacing == pytest.approx(float(np.min(np.diff(positions))))


def test_explicit_initial_guess_matches_default():
    base = np.asarray(equilibrium_positions(9).positions, dtype=float)
    # start from a deliberately lopsided but ordered configuration
    skewed = base * 1.3 + 0.25
    sol = equilibrium_positions(9, initial=skewed)
    assert_allclose(np.asarray(sol.positions, dtype=float), base, rtol=0, atol=1e-9)


def test_initial_guess_validation():
    with pytest.raises(ValueError, match="shape"):
        equilibrium_positions(5, initial=np.zeros(4))
    with pytest.raises(ValueError, match="increasing"):
        equilibrium_positions(3, initial=np.array([1.0, 0.0, 2.0]))


@pytest.mark.parametrize("bad", [1, 0, -3, MAX_IONS + 1])
def test_rejects_bad_lengths(bad):
    with pytest.raises(ValueError):
        equilibrium_positions(bad)


def test_rejects_non_integer_length():
    with pytest.raises(TypeError):
        equilibrium_positions(5.0)
    with pytest.raises(TypeError):
        equilibrium_positions(True)


def test_range_solver_matches_cold_starts(small_sweep):
    by_n = {s.n_ions: s for s in small_sweep}
    for n_ions in (17, 30):
        cold = equilibrium_positions(n_ions)
        assert_allclose(
            np.asarray(by_n[n_ions].positions, dtype=float),
            np.asarray(cold.positions, dtype=float),
            rtol=0,
            atol=1e-11,
        )


def test_range_solver_validation():
    with pytest.raises(ValueError):
        solve_chain_range(1, 5)
    with pytest.raises(ValueError):
        solve_chain_range(5, 4)


def test_min_spacing_decreases_with_length(small_sweep):
    gaps = [s.min_spacing for s in small_sweep]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_fit_min_spacing(small_sweep):
    fit = fit_min_spacing(2, 30, solutions=small_sweep)
    # narrower window than the headline fit, looser pins
    assert fit.coefficient == pytest.approx(2.0, abs=0.15)
    assert fit.exponent == pytest.approx(0.56, abs=0.05)
    assert fit.rms_log_error < 0.02
    predicted = fit.min_spacing(10)
    actual = next(s.min_spacing for s in small_sweep if s.n_ions == 10)
    assert predicted == pytest.approx(actual, rel=0.03)


def test_fit_requires_contiguous_coverage(small_sweep):
    with pytest.raises(ValueError, match="cover"):
        fit_min_spacing(2, 40, solutions=small_sweep)
    gappy = [s for s in small_sweep if s.n_ions != 7]
    with pytest.raises(ValueError, match="cover"):
        fit_min_spacing(2, 30, solutions=gappy)


def test_length_scale_oracle(registry):
    # Ca II in a 2*pi*500 kHz axial well; value frozen from a hand
    # evaluation of (Z^2 e^2 / (4 pi eps0 nu^2 M))^(1/3) with CODATA 2018
    ell = length_scale(registry.lookup("Ca II"), 2.0 * math.pi * 500e3)
    assert ell == pytest.approx(7.060212722888259e-6, rel=1e-12)


def test_length_scale_scaling(registry):
    ca = registry.lookup("Ca II")
    base = length_scale(ca, 1e6)
    assert length_scale(ca, 2e6) == pytest.approx(base / 2 ** (2.0 / 3.0), rel=1e-12)
    with pytest.raises(ValueError):
        length_scale(ca, 0.0)


def test_min_spacing_meters_composition(registry):
    ca = registry.lookup("Ca II")
    nu = 2.0 * math.pi * 500e3
    sol = equilibrium_positions(5)
    direct = min_spacing_meters(ca, nu, 5, solution=sol)
    assert direct == pytest.approx(length_scale(ca, nu) * sol.min_spacing, rel=1e-15)
    with pytest.raises(ValueError, match="match"):
        min_spacing_meters(ca, nu, 6, solution=sol)


def test_positions_are_read_only():
    sol = equilibrium_positions(4)
    with pytest.raises(ValueError):
        sol.positions[0] = 0.0

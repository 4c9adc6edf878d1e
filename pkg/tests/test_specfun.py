import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from logdelta.core import Grid
from logdelta.spectral import Parity, assemble_l, eigenvalues_bisection, sector_restrict
from logdelta.specfun import (
    MatchingProblem,
    gamma_fn,
    hyp1f1,
    matching_residual,
    merged_eigs,
    parabolic_u,
    parabolic_u_prime,
    rgamma,
    semianalytic_eigs,
)


def test_matching_problem_maps():
    p1 = MatchingProblem(1, 1.0)
    assert p1.a_of(-2.0) == -0.5
    assert MatchingProblem(2, 1.0).a_of(0.0) == -0.5
    assert p1.z0 == pytest.approx(1 / math.sqrt(2))
    assert MatchingProblem(1, 0.0, Parity.ODD).parity == "Odd"
    with pytest.raises(ValueError):
        MatchingProblem(3, 1.0)
    with pytest.raises(ValueError):
        MatchingProblem(1, 1.0, "Sideways")


@pytest.mark.parametrize("a,b", [(0.3, 0.5), (-2.5, 1.5), (4.0, 2.0)])
def test_hyp1f1_at_zero(a, b):
    assert hyp1f1(a, b, 0.0) == 1.0


def test_hyp1f1_identities():
    for z in np.linspace(-5, 5, 21):
        assert hyp1f1(1.0, 1.0, z) == pytest.approx(math.exp(z), rel=1e-12)
    assert hyp1f1(1.0, 2.0, 1.0) == pytest.approx(math.e - 1, abs=1e-12)


@given(st.floats(-6, 6), st.floats(0.1, 5), st.floats(-20, 20))
@settings(max_examples=60, deadline=None)
def test_hyp1f1_matches_mpmath(a, b, z):
    ref = float(mpmath.hyp1f1(a, b, z))
    assert hyp1f1(a, b, z) == pytest.approx(ref, rel=1e-9, abs=1e-12 * max(1.0, math.exp(abs(z))))


def test_hyp1f1_domain():
    with pytest.raises(ValueError):
        hyp1f1(1.0, -2.0, 1.0)
    with pytest.raises(ValueError):
        hyp1f1(1.0, 1.0, 100.0)


def test_gamma_values():
    assert gamma_fn(1.0) == pytest.approx(1.0, abs=1e-14)
    assert gamma_fn(5.0) == pytest.approx(24.0, rel=1e-14)
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), abs=1e-12)
    assert gamma_fn(-0.5) == pytest.approx(-2 * math.sqrt(math.pi), abs=1e-11)
    with pytest.raises(ValueError):
        gamma_fn(-3.0)
    assert rgamma(-3.0) == 0.0 and rgamma(0.0) == 0.0


@given(st.floats(-8.9, 30).filter(lambda x: abs(x - round(x)) > 1e-3 or x > 0.5))
def test_gamma_matches_math(x):
    assert gamma_fn(x) == pytest.approx(math.gamma(x), rel=1e-12)


def test_u_gaussian_case():
    for z in np.linspace(-4, 4, 33):
        assert parabolic_u(-0.5, z) == pytest.approx(math.exp(-z * z / 4), abs=1e-11)
    assert parabolic_u_prime(-0.5, 1.0) == pytest.approx(-0.5 * math.exp(-0.25), abs=1e-10)


@pytest.mark.parametrize("a", [-1.3, -0.2, 0.4, 2.1])
def test_u_at_origin(a):
    xi = 0.5 * a + 0.25
    expected = math.cos(xi * math.pi) * math.gamma(0.5 - xi) / (2**xi * math.sqrt(math.pi))
    assert parabolic_u(a, 0.0) == pytest.approx(expected, rel=1e-12)


@given(st.floats(-6, 6), st.floats(-5, 5))
@settings(max_examples=80, deadline=None)
def test_u_matches_scipy(a, z):
    # U(a, z) = D_{-a-1/2}(z)
    d, dp = special.pbdv(-a - 0.5, z)
    scale = 1.0 + abs(d)
    assert parabolic_u(a, z) == pytest.approx(d, abs=1e-9 * scale)
    assert parabolic_u_prime(a, z) == pytest.approx(dp, abs=1e-8 * (1.0 + abs(dp)))


def test_u_solves_weber_equation():
    rng = np.random.default_rng(11)
    h = 5e-3
    for a, z in zip(rng.uniform(-4, 4, 100), rng.uniform(-3, 3, 100)):
        u = parabolic_u(a, z)
        f = [parabolic_u(a, z + j * h) for j in (-2, -1, 1, 2)]
        # fourth-order central stencil
        upp = (-f[0] + 16 * f[1] - 30 * u + 16 * f[2] - f[3]) / (12 * h * h)
        assert abs(upp - (z * z / 4 + a) * u) <= 1e-6 * (1 + abs(u))


def test_u_argument_limit():
    with pytest.raises(ValueError):
        parabolic_u(0.0, 9.0)


def test_residual_vanishes_at_gausson_eigenvalues():
    for gamma in np.linspace(-3, 3, 25):
        assert abs(matching_residual(-2.0, MatchingProblem(1, gamma, "Even"))) <= 1e-9
        assert abs(matching_residual(0.0, MatchingProblem(2, gamma, "Even"))) <= 1e-9
    assert abs(matching_residual(0.0, MatchingProblem(1, 0.0, "Odd"))) <= 1e-9


def test_reference_spectrum_exact():
    assert np.allclose(merged_eigs(1, 0.0, 5), [-2, 0, 2, 4, 6], atol=1e-9, rtol=0)


def test_negative_roots_repulsive():
    lams = merged_eigs(1, -1.0, 4)
    assert int(np.sum(lams < 0)) == 2


@pytest.mark.parametrize("gamma", [-1.0, 0.5, 2.0])
@pytest.mark.parametrize("parity", ["Even", "Odd"])
def test_l1_l2_shift(gamma, parity):
    a = semianalytic_eigs(MatchingProblem(1, gamma, parity), 4)
    b = semianalytic_eigs(MatchingProblem(2, gamma, parity), 4)
    assert np.allclose(a, b - 2.0, atol=1e-10, rtol=0)


def test_matches_matrix_on_default_grid(grid):
    lams = eigenvalues_bisection(assemble_l(grid, 1.0, 1), 3)
    assert np.allclose(merged_eigs(1, 1.0, 3), lams, atol=2e-3, rtol=0)


@pytest.mark.parametrize("gamma", [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0])
def test_matches_matrix_fine_grid(gamma):
    g = Grid.from_spacing(12.0, 0.005)
    lams = eigenvalues_bisection(assemble_l(g, gamma, 1), 3)
    assert np.allclose(merged_eigs(1, gamma, 3), lams, atol=1e-4, rtol=0)


def test_even_sector_matches_matrix(grid):
    lams = eigenvalues_bisection(sector_restrict(grid, -1.0, 1, "Even"), 3)
    ref = semianalytic_eigs(MatchingProblem(1, -1.0, "Even"), 3)
    assert np.allclose(ref, lams, atol=2e-3, rtol=0)


def test_search_ceiling_reported():
    with pytest.raises(ValueError, match="found"):
        semianalytic_eigs(MatchingProblem(1, 1.0), 20, search_max=5.0)

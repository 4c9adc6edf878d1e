import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from logdelta import _tridiag
from logdelta.core import Grid, PhysParams, WaveField, charge, gausson, orbital_distance
from logdelta.evolution import (
    EvolutionConfig,
    clamp_log,
    cn_linear_step,
    evolve,
    free_evolution,
    free_propagator_ref,
    parity_defect,
    perturbation,
    repulsive_propagator_ref,
    strang_step,
)
from logdelta.spectral import TridiagOperator, assemble_h_delta


def test_clamp_log():
    assert clamp_log(1.0, 3.0) == 0.0
    assert clamp_log(math.exp(10), 5.0) == 5.0
    assert clamp_log(0.0, 7.0) == -7.0
    assert np.allclose(clamp_log(np.array([1e-40, 1.0, 2.0]), 50.0), [-50.0, 0.0, math.log(2.0)])


@given(st.floats(0, 1e6), st.floats(0.1, 100))
def test_clamp_log_bounded(s, n):
    assert -n <= clamp_log(s, n) <= n


def test_config_validation():
    assert EvolutionConfig(dt=1e-3, t_end=2.0).n_steps == 2000
    for bad in ({"dt": 0.0}, {"t_end": -1.0}, {"clamp_level": 0.0}, {"record_every": 0}):
        with pytest.raises(ValueError):
            EvolutionConfig(**bad)


def test_cn_zero_step_is_identity(small_grid):
    u = gausson(PhysParams(-1.0, 1.0), small_grid)
    op = assemble_h_delta(small_grid, 1.0)
    assert np.array_equal(cn_linear_step(u, op, 0.0).values, u.values)


def test_cn_bound_state_phase():
    g = Grid(20.0, 4001)
    op = assemble_h_delta(g, 2.0)
    x = g.nodes
    u = WaveField(g, np.exp(-np.abs(x)))
    dt = 0.01
    out = cn_linear_step(u, op, dt).values
    mu = -1.0
    rot = (1 - 0.5j * dt * mu) / (1 + 0.5j * dt * mu)
    assert np.max(np.abs(out - rot * u.values)) < 1e-3


def test_cn_unitary(small_grid):
    rng = np.random.default_rng(3)
    op = assemble_h_delta(small_grid, -0.7)
    u = WaveField(small_grid, rng.standard_normal(small_grid.n_points) + 1j * rng.standard_normal(small_grid.n_points))
    # interior nodes carry full trapezoid weight, so compare Euclidean norms
    v = cn_linear_step(u, op, 1e-3)
    assert np.linalg.norm(v.values) == pytest.approx(np.linalg.norm(u.values), rel=1e-13)


def _one_step_drift(gamma, n):
    g = Grid(12.0, n)
    phi = gausson(PhysParams(-1.0, gamma), g)
    return orbital_distance(strang_step(phi, assemble_h_delta(g, gamma), 1e-3), phi)


def test_strang_standing_wave_one_step():
    assert _one_step_drift(0.0, 2401) <= 1e-6


@pytest.mark.xfail(strict=True, reason="the lumped delta leaves a center-node defect of 7e-6 at h = 0.01")
def test_strang_standing_wave_one_step_with_delta():
    assert _one_step_drift(1.0, 2401) <= 1e-6


def test_strang_standing_wave_one_step_with_delta_converges():
    d = [_one_step_drift(1.0, n) for n in (1201, 2401, 4801)]
    assert d[1] < 1e-5
    assert d[0] / d[1] >= 3.5 and d[1] / d[2] >= 3.5


def test_nonlinear_substep_preserves_modulus(small_grid):
    n = small_grid.n_points
    zero = TridiagOperator(np.zeros(n), np.zeros(n - 1), small_grid, assemble_h_delta(small_grid, 0).kind, 0.0)
    rng = np.random.default_rng(5)
    u = WaveField(small_grid, rng.standard_normal(n) + 1j * rng.standard_normal(n))
    v = strang_step(u, zero, 0.3)
    assert np.allclose(np.abs(v.values), np.abs(u.values), rtol=1e-15, atol=0)


def _smooth_datum(g):
    return gausson(PhysParams(-1.0, 0.0), g) + perturbation(g, "mixed", 0.1, 0)


def test_strang_local_error_third_order():
    g = Grid(8.0, 1601)
    op = assemble_h_delta(g, 0.0)
    u = _smooth_datum(g)

    def loc(dt):
        one = strang_step(u, op, dt)
        two = strang_step(strang_step(u, op, dt / 2), op, dt / 2)
        return (one - two).l2_norm()

    errs = [loc(dt) for dt in (0.02, 0.01, 0.005)]
    assert errs[0] / errs[1] >= 3.5 and errs[1] / errs[2] >= 3.5


def strang_global_orders(gamma=0.0, eps=0.1):
    g = Grid(8.0, 1601)
    op = assemble_h_delta(g, gamma)
    u0 = gausson(PhysParams(-1.0, gamma), g) + perturbation(g, "mixed", eps, 0)

    def run(dt):
        v, _ = _tridiag.strang_steps(op.diag, op.offdiag, u0.values.copy(), dt, 50.0, int(round(1.0 / dt)))
        return v

    ref = run(1e-4)
    w = g.weights()
    errs = [math.sqrt(np.sum(w * np.abs(run(dt) - ref) ** 2)) for dt in (0.004, 0.002, 0.001)]
    return [math.log2(a / b) for a, b in zip(errs, errs[1:])]


def test_strang_global_second_order():
    assert min(strang_global_orders()) >= 1.9


def test_standing_wave_stays_put(grid):
    p = PhysParams(-1.0, 1.0)
    tr = evolve(gausson(p, grid), p, EvolutionConfig(dt=1e-3, t_end=20.0, record_every=500))
    assert not tr.failed
    assert np.max(tr.orbital_dist) <= 1e-4
    assert tr.times[0] == 0.0 and np.all(np.diff(tr.times) > 0)


def test_charge_conserved_any_data():
    g = Grid(4.0, 401)
    rng = np.random.default_rng(9)
    u0 = WaveField(g, rng.standard_normal(g.n_points) + 1j * rng.standard_normal(g.n_points))
    tr = evolve(u0, PhysParams(-1.0, 1.5), EvolutionConfig(dt=1e-3, t_end=10.0, record_every=1000))
    assert np.max(np.abs(tr.charge - tr.charge[0])) / tr.charge[0] <= 1e-10


def test_even_data_stay_even(small_grid):
    p = PhysParams(-1.0, -1.0)
    u0 = gausson(p, small_grid) + perturbation(small_grid, "even", 0.05, 1)
    tr = evolve(u0, p, EvolutionConfig(dt=1e-3, t_end=3.0, record_every=250))
    assert np.max(tr.parity_defect) <= 1e-10


def test_regularization_consistency():
    g = Grid(6.0, 1201)
    p = PhysParams(-1.0, 0.5)
    u0 = gausson(p, g) + perturbation(g, "mixed", 1e-2, 2)
    assert np.min(np.abs(u0.values)) > math.exp(-25)
    cfg = dict(dt=1e-3, t_end=1.0, record_every=100)
    a = evolve(u0, p, EvolutionConfig(clamp_level=50.0, **cfg))
    b = evolve(u0, p, EvolutionConfig(clamp_level=100.0, **cfg))
    for f in ("charge", "energy", "orbital_dist"):
        assert np.max(np.abs(getattr(a, f) - getattr(b, f))) <= 1e-8


def test_evolve_rejects_large_step(small_grid):
    p = PhysParams()
    with pytest.raises(ValueError):
        evolve(gausson(p, small_grid), p, EvolutionConfig(dt=0.01, t_end=1.0))


def test_evolve_flags_nonfinite():
    g = Grid(4.0, 201)
    v = np.exp(-g.nodes**2).astype(complex)
    v[50] = np.nan
    tr = evolve(WaveField(g, v), PhysParams(), EvolutionConfig(dt=1e-2, t_end=1.0, record_every=10))
    assert tr.failed and "non-finite" in tr.message
    assert len(tr.times) == 1


def test_perturbations(small_grid):
    x = small_grid.nodes
    odd = perturbation(small_grid, "odd", 1e-3).values
    assert np.array_equal(odd, -odd[::-1])
    even = perturbation(small_grid, "even", 1e-2, 4).values
    assert np.array_equal(even, even[::-1])
    assert np.allclose(np.abs(even), 1e-2 * np.exp(-x**2))
    m1 = perturbation(small_grid, "mixed", 1e-2, 4).values
    m2 = perturbation(small_grid, "mixed", 1e-2, 4).values
    assert np.array_equal(m1, m2)
    assert not np.array_equal(m1, perturbation(small_grid, "mixed", 1e-2, 5).values)
    assert np.all(perturbation(small_grid, "none", 1.0).values == 0)
    with pytest.raises(ValueError):
        perturbation(small_grid, "sideways", 1.0)


def test_parity_defect():
    g = Grid(4.0, 401)
    assert parity_defect(WaveField(g, np.exp(-g.nodes**2))) == 0.0
    assert parity_defect(WaveField(g, g.nodes * np.exp(-g.nodes**2))) > 0.1


def test_free_evolution_gaussian():
    g = Grid(20.0, 4001)
    x = g.nodes
    t = 0.7
    out = free_evolution(np.exp(-(x**2)).astype(complex), g.spacing, t)
    exact = np.exp(-(x**2) / (1 + 4j * t)) / np.sqrt(1 + 4j * t)
    assert np.max(np.abs(out - exact)) < 1e-12


def test_attractive_reference_identity_at_zero():
    g = Grid(12.0, 2401)
    u = WaveField(g, np.exp(-(g.nodes - 1.0) ** 2))
    assert np.array_equal(free_propagator_ref(u, 0.0, 1.0).values, u.values)


def test_attractive_reference_bound_state():
    g = Grid(24.0, 4801)
    gamma = 2.0
    b = WaveField(g, np.exp(-0.5 * gamma * np.abs(g.nodes)))
    b = b * (1 / b.l2_norm())
    t = 1.3
    out = free_propagator_ref(b, t, gamma)
    assert np.max(np.abs(out.values - np.exp(0.25j * t * gamma**2) * b.values)) < 1e-3


def test_attractive_reference_matches_cn():
    g = Grid(24.0, 4801)
    gamma = 1.0
    u = WaveField(g, np.exp(-(g.nodes - 1.0) ** 2))
    op = assemble_h_delta(g, gamma)
    v, _ = _tridiag.cayley_steps(op.diag, op.offdiag, u.values.copy(), 1e-3, 1000)
    ref = free_propagator_ref(u, 1.0, gamma)
    assert (ref - WaveField(g, v)).l2_norm() <= 5e-3


def test_attractive_reference_domain():
    g = Grid(4.0, 101)
    u = WaveField(g, np.exp(-g.nodes**2))
    with pytest.raises(ValueError):
        free_propagator_ref(u, 1.0, 0.0)
    with pytest.raises(ValueError):
        repulsive_propagator_ref(u, 1.0, 1.0)


def test_repulsive_reference_matches_cn():
    g = Grid(24.0, 4801)
    gamma = -1.0
    x = g.nodes
    u = WaveField(g, np.exp(-(x + 2.0) ** 2) * np.exp(1j * x))
    op = assemble_h_delta(g, gamma)
    v, _ = _tridiag.cayley_steps(op.diag, op.offdiag, u.values.copy(), 1e-3, 1000)
    ref = repulsive_propagator_ref(u, 1.0, gamma)
    assert (ref - WaveField(g, v)).l2_norm() <= 1e-3


def _literal_formula(u, t, gamma):
    """Transmitted/reflected representation with rho = -(gamma/2) e^{gamma x/2} on x <= 0."""
    g = u.grid
    x = g.nodes
    h = g.spacing
    rho = np.where(x < 0, -0.5 * gamma * np.exp(0.5 * gamma * np.minimum(x, 0.0)), 0.0)
    rho[g.center] = -0.25 * gamma  # mean of the one-sided limits
    conv = h * np.convolve(u.values, rho, mode="same")
    free_u = free_evolution(u.values, h, t)
    free_c = free_evolution(conv, h, t)
    right = free_u + free_c
    left = free_u + free_c[::-1]
    return np.where(x > 0, right, left), x


def test_literal_formula_is_repulsive_for_left_data():
    # for data supported in x <= 0 the formula with coupling a > 0 reproduces
    # the propagator of the repulsive interaction of strength a
    g = Grid(24.0, 4801)
    x = g.nodes
    u = WaveField(g, np.exp(-4 * (x + 3.0) ** 2) * np.exp(2j * x))
    a = 1.0
    lit, _ = _literal_formula(u, 0.8, a)
    ref = repulsive_propagator_ref(u, 0.8, -a)
    mask = x != 0
    assert np.max(np.abs(lit[mask] - ref.values[mask])) < 1e-3


def test_literal_formula_not_identity_for_two_sided_data():
    g = Grid(24.0, 4801)
    u = WaveField(g, np.exp(-(g.nodes**2)))
    lit, x = _literal_formula(u, 1e-9, 1.0)
    assert np.max(np.abs(lit - u.values)) > 0.1

import math

import numpy as np
import pytest

from conftest import random_field
from kgembed import (
    ComplexField,
    ConfigurationError,
    CoupledState,
    DiagonalState,
    IntegratorConfig,
    NumericalBlowupError,
    diagonalize,
    embed,
    norm_squared,
    recompose,
    run,
    step_exact,
    step_leapfrog,
    step_rk4,
)
from kgembed.evolution import leapfrog_bootstrap, leapfrog_stability_limit
from kgembed.initial import make_gaussian, make_plane_wave

SQRT2 = math.sqrt(2.0)


def max_abs(f):
    return np.abs(f.values).max()


class TestExact:
    def test_zero_step_is_identity(self, grid1d, sym1d, rng):
        d = DiagonalState(random_field(grid1d, rng), random_field(grid1d, rng))
        out = step_exact(d, 0.0, sym1d)
        assert np.abs(out.eta_plus.values - d.eta_plus.values).max() < 1e-13 * max_abs(d.eta_plus)

    def test_half_period_phase(self, small_grid, small_sym):
        psi, _ = make_plane_wave(small_grid, 1, "standing", small_sym)
        d = DiagonalState(psi, psi)
        out = step_exact(d, math.pi / SQRT2, small_sym)
        # forward phase exp(-i pi) and backward exp(+i pi) are both -1
        np.testing.assert_allclose(out.eta_plus.values, -psi.values, atol=1e-13)
        np.testing.assert_allclose(out.eta_minus.values, -psi.values, atol=1e-13)
        assert out.t == pytest.approx(math.pi / SQRT2)

    def test_directions(self, small_grid, small_sym):
        psi, _ = make_plane_wave(small_grid, 1, "standing", small_sym)
        out = step_exact(DiagonalState(psi, psi), 0.1, small_sym)
        np.testing.assert_allclose(out.eta_plus.values, np.exp(-0.1j * SQRT2) * psi.values, atol=1e-14)
        np.testing.assert_allclose(out.eta_minus.values, np.exp(0.1j * SQRT2) * psi.values, atol=1e-14)

    def test_norms_unchanged(self, grid1d, sym1d, rng):
        d = DiagonalState(random_field(grid1d, rng), random_field(grid1d, rng))
        out = step_exact(d, 13.7, sym1d)
        assert norm_squared(out.eta_plus) == pytest.approx(norm_squared(d.eta_plus), rel=1e-13)
        assert norm_squared(out.eta_minus) == pytest.approx(norm_squared(d.eta_minus), rel=1e-13)

    def test_group_property(self, grid1d, sym1d, rng):
        d = DiagonalState(random_field(grid1d, rng), random_field(grid1d, rng))
        a = step_exact(step_exact(d, 0.3, sym1d), 1.1, sym1d)
        b = step_exact(d, 1.4, sym1d)
        assert np.abs(a.eta_plus.values - b.eta_plus.values).max() < 1e-12 * max_abs(d.eta_plus)
        assert np.abs(a.eta_minus.values - b.eta_minus.values).max() < 1e-12 * max_abs(d.eta_minus)

    def test_reversible(self, grid1d, sym1d, rng):
        d = DiagonalState(random_field(grid1d, rng), random_field(grid1d, rng))
        back = step_exact(step_exact(d, 2.5, sym1d), -2.5, sym1d)
        assert np.abs(back.eta_plus.values - d.eta_plus.values).max() < 1e-12 * max_abs(d.eta_plus)
        assert back.t == pytest.approx(0.0, abs=1e-15)


def exact_state(state, t, sym):
    return recompose(step_exact(diagonalize(state), t, sym))


class TestRK4:
    def test_zero_step(self, grid1d, sym1d, rng):
        s = CoupledState(random_field(grid1d, rng), random_field(grid1d, rng))
        out = step_rk4(s, 0.0, sym1d)
        np.testing.assert_array_equal(out.psi.values, s.psi.values)

    def test_zero_state(self, grid1d, sym1d):
        z = ComplexField.zeros(grid1d)
        out = step_rk4(CoupledState(z, z), 0.1, sym1d)
        assert np.all(out.psi.values == 0) and np.all(out.chi.values == 0)

    def test_local_order(self, small_grid, small_sym):
        psi, dpsi = make_plane_wave(small_grid, 3, "standing", small_sym)
        state = embed(psi, dpsi, small_sym)
        errors = []
        for dt in (0.2, 0.1, 0.05):
            one = step_rk4(state, dt, small_sym)
            ref = exact_state(state, dt, small_sym)
            errors.append(math.sqrt(norm_squared(one.psi - ref.psi) + norm_squared(one.chi - ref.chi)))
        orders = [math.log2(errors[i] / errors[i + 1]) for i in range(2)]
        assert min(orders) >= 4.5

    def test_global_drift_is_fifth_order(self, grid1d, sym1d):
        # |R(i theta)|^2 = 1 - theta^6/72 + ..., so the norm drift after T/dt
        # steps scales as dt^5 (ratio 32 per halving).
        psi, dpsi = make_gaussian(grid1d, 31.4, 2.0, 0.5, "plus", sym1d)
        state = embed(psi, dpsi, sym1d)
        drifts = []
        for dt in (0.2, 0.1, 0.05):
            cfg = IntegratorConfig("rk4_coupled", dt, 10.0, 10**6)
            out = run(state, cfg, sym1d)
            drifts.append(abs(norm_squared(diagonalize(out).eta_plus) / 4.0 - 1.0))
        ratios = [drifts[i] / drifts[i + 1] for i in range(2)]
        assert all(28 < r < 36 for r in ratios), ratios


class TestLeapfrog:
    def test_zero(self, grid1d, sym1d):
        z = ComplexField.zeros(grid1d)
        assert np.all(step_leapfrog(z, z, 0.01, sym1d).values == 0)

    def test_stability_guard(self, grid1d, sym1d):
        z = ComplexField.zeros(grid1d)
        limit = leapfrog_stability_limit(sym1d)
        assert limit == pytest.approx(2.0 / sym1d.maximum)
        with pytest.raises(ConfigurationError):
            step_leapfrog(z, z, 1.05 * limit, sym1d)
        with pytest.raises(ConfigurationError):
            run(CoupledState(z, z), IntegratorConfig("leapfrog_kg", 1.05 * limit, 1.0), sym1d)

    def test_plane_wave_convergence(self, small_grid, small_sym):
        psi, dpsi = make_plane_wave(small_grid, 1, "plus", small_sym)
        t_final = 5.0
        exact = psi.values * np.exp(-1j * SQRT2 * t_final)
        errors = []
        for dt in (0.02, 0.01, 0.005):
            prev, curr = psi, leapfrog_bootstrap(psi, dpsi, dt, small_sym)
            for _ in range(int(round(t_final / dt)) - 1):
                prev, curr = curr, step_leapfrog(prev, curr, dt, small_sym)
            errors.append(np.abs(curr.values - exact).max())
        ratios = [errors[i] / errors[i + 1] for i in range(2)]
        assert all(3.5 <= r <= 4.5 for r in ratios), ratios

    def test_time_reversible(self, grid1d, sym1d, rng):
        psi, dpsi = random_field(grid1d, rng), random_field(grid1d, rng)
        dt = 0.01
        prev, curr = psi, leapfrog_bootstrap(psi, dpsi, dt, sym1d)
        history = [prev, curr]
        for _ in range(200):
            prev, curr = curr, step_leapfrog(prev, curr, dt, sym1d)
            history.append(curr)
        # swap roles and march back
        a, b = history[-1], history[-2]
        for _ in range(200):
            a, b = b, step_leapfrog(a, b, dt, sym1d)
        assert np.abs(b.values - history[0].values).max() < 1e-11 * max_abs(psi)


class TestRun:
    def test_zero_final_time(self, grid1d, sym1d, rng):
        s = embed(random_field(grid1d, rng), random_field(grid1d, rng), sym1d)
        for scheme in ("exact", "rk4_coupled", "leapfrog_kg"):
            records = []
            out = run(s, IntegratorConfig(scheme, 0.01, 0.0), sym1d, sink=records.append)
            assert len(records) == 1 and records[0].t == 0.0
            assert np.abs(out.psi.values - s.psi.values).max() < 1e-13 * max_abs(s.psi)

    def test_sampling_and_final_time(self, grid1d, sym1d):
        psi, dpsi = make_gaussian(grid1d, 31.4, 2.0, 0.5, "plus", sym1d)
        records = []
        out = run(embed(psi, dpsi, sym1d), IntegratorConfig("exact", 0.01, 10.0, 100), sym1d,
                  sink=records.append)
        assert len(records) == 11
        assert [r.t for r in records] == pytest.approx(np.arange(11.0))
        assert abs(out.t - 10.0) < 0.005

    def test_uneven_stride_emits_last(self, grid1d, sym1d):
        psi, dpsi = make_gaussian(grid1d, 31.4, 2.0, 0.5, "plus", sym1d)
        records = []
        run(embed(psi, dpsi, sym1d), IntegratorConfig("rk4_coupled", 0.1, 1.0, 3), sym1d, sink=records.append)
        assert [round(r.t, 10) for r in records] == [0.0, 0.3, 0.6, 0.9, 1.0]

    def test_diagonal_in_diagonal_out(self, grid1d, sym1d, rng):
        d = DiagonalState(random_field(grid1d, rng), random_field(grid1d, rng))
        out = run(d, IntegratorConfig("exact", 0.5, 2.0), sym1d)
        assert isinstance(out, DiagonalState)
        ref = step_exact(d, 2.0, sym1d)
        assert np.abs(out.eta_plus.values - ref.eta_plus.values).max() < 1e-12 * max_abs(d.eta_plus)
        assert not out.eta_plus.is_spectral

    def test_exact_conservation_long_run(self, grid1d, sym1d, rng):
        d = DiagonalState(random_field(grid1d, rng), random_field(grid1d, rng) * 0.3)
        records = []
        run(d, IntegratorConfig("exact", 0.01, 100.0, 1000), sym1d, sink=records.append)
        for name in ("norm_plus", "norm_minus"):
            v = np.array([getattr(r, name) for r in records])
            assert np.max(np.abs(v / v[0] - 1)) < 1e-12

    def test_snapshots(self, grid1d, sym1d):
        psi, dpsi = make_gaussian(grid1d, 31.4, 2.0, 0.5, "plus", sym1d)
        seen = []
        run(embed(psi, dpsi, sym1d), IntegratorConfig("exact", 0.1, 1.0), sym1d,
            snapshot=lambda s, n: seen.append((n, s)), snapshot_stride=4)
        assert [n for n, _ in seen] == [0, 4, 8, 10]
        assert all(isinstance(s, CoupledState) and not s.psi.is_spectral for _, s in seen)

    @pytest.mark.filterwarnings("ignore:overflow:RuntimeWarning")
    def test_blowup_detected(self, grid1d, sym1d, rng):
        # RK4 is unstable for E_max dt / hbar > 2.8; the growth overflows quickly
        f = random_field(grid1d, rng) * 1e200
        with pytest.raises(NumericalBlowupError):
            run(CoupledState(f, f), IntegratorConfig("rk4_coupled", 1.0, 1000.0), sym1d)

    def test_rk4_leapfrog_agree_on_gaussian(self, grid1d, sym1d):
        psi, dpsi = make_gaussian(grid1d, 31.4, 2.0, 0.5, "plus", sym1d)
        state = embed(psi, dpsi, sym1d)
        rk = run(state, IntegratorConfig("rk4_coupled", 1e-3, 10.0, 10**9), sym1d)
        lf = run(state, IntegratorConfig("leapfrog_kg", 1e-3, 10.0, 10**9), sym1d)
        assert math.sqrt(norm_squared(rk.psi - lf.psi)) < 1e-4


@pytest.mark.parametrize(
    "kw",
    [
        {"dt": 0.0},
        {"dt": -1.0},
        {"t_final": -1.0},
        {"t_final": 0.001, "dt": 0.01},
        {"sample_stride": 0},
        {"scheme": "euler"},
    ],
)
def test_integrator_config_rejects(kw):
    with pytest.raises(ConfigurationError):
        IntegratorConfig(**kw)


def test_oracle_errors_use_reached_time(grid1d, sym1d):
    from kgembed.initial import InitialConditionSpec, build_initial_state
    from kgembed.verification import oracle_errors

    state = build_initial_state(InitialConditionSpec(), grid1d, sym1d)
    # 5 / 0.016 = 312.5 steps, so the run stops short of t_final.
    coarse, fine = oracle_errors(state, [0.016, 0.008], 5.0, sym1d)
    assert 3.5 < coarse / fine < 4.5

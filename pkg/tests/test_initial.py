import math

import numpy as np
import pytest

from kgembed import (
    ConfigurationError,
    InitialConditionSpec,
    PhysicalParams,
    apply_Pi,
    build_initial_state,
    build_symbol,
    conserved_norms,
    diagonalize,
    embed,
    make_grid,
    norm_squared,
    step_exact,
)
from kgembed.diagnostics import centroid, fit_phase_frequency, fit_velocity
from kgembed.grid import inner
from kgembed.initial import gaussian_profile, make_gaussian, make_plane_wave, make_superposition

L = 20 * math.pi


def test_plane_wave_branches(grid1d, sym1d):
    psi, dpsi = make_plane_wave(grid1d, 7, "plus", sym1d)
    d = diagonalize(embed(psi, dpsi, sym1d))
    plus, minus = conserved_norms(d)
    assert minus < 1e-24 * plus
    psi, dpsi = make_plane_wave(grid1d, 7, "standing", sym1d)
    d = diagonalize(embed(psi, dpsi, sym1d))
    np.testing.assert_array_equal(d.eta_plus.values, psi.values)
    np.testing.assert_array_equal(d.eta_minus.values, psi.values)


def test_rest_mode_rotation(grid1d, sym1d):
    psi, dpsi = make_plane_wave(grid1d, 0, "plus", sym1d)
    np.testing.assert_allclose(dpsi.values, -1j * psi.values, atol=1e-15)


def test_plane_wave_index_out_of_range(grid1d, sym1d):
    with pytest.raises(ConfigurationError):
        make_plane_wave(grid1d, 128, "plus", sym1d)


def test_superposition(grid1d, sym1d):
    psi, dpsi = make_superposition(grid1d, [(1,), (-3,)], [1.0, 0.5j], "minus", sym1d)
    d = diagonalize(embed(psi, dpsi, sym1d))
    assert norm_squared(d.eta_plus) < 1e-24
    assert norm_squared(psi) == pytest.approx(L * 1.25, rel=1e-13)
    with pytest.raises(ConfigurationError):
        make_superposition(grid1d, [], [], "plus", sym1d)


class TestGaussian:
    def test_normalized(self, grid1d, sym1d):
        psi, _ = make_gaussian(grid1d, 20.0, 2.0, 0.5, "plus", sym1d)
        assert norm_squared(psi) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("branch, empty", [("plus", "minus"), ("minus", "plus")])
    def test_purity(self, grid1d, sym1d, branch, empty):
        psi, dpsi = make_gaussian(grid1d, 20.0, 2.0, 0.5, branch, sym1d)
        d = diagonalize(embed(psi, dpsi, sym1d))
        full = d.eta_plus if empty == "minus" else d.eta_minus
        zero = d.eta_minus if empty == "minus" else d.eta_plus
        assert math.sqrt(norm_squared(zero) / norm_squared(full)) < 1e-12

    def test_standing_balanced(self, grid1d, sym1d):
        psi, dpsi = make_gaussian(grid1d, 20.0, 2.0, 0.5, "standing", sym1d)
        plus, minus = conserved_norms(diagonalize(embed(psi, dpsi, sym1d)))
        assert plus == pytest.approx(minus, rel=1e-12)

    def test_projector_route_matches_branch(self, grid1d, sym1d):
        psi, dpsi = make_gaussian(grid1d, 20.0, 2.0, 0.5, "plus", sym1d)
        projected = apply_Pi(psi, dpsi, "+", sym1d)
        np.testing.assert_allclose(projected.values, 2 * psi.values, atol=1e-12)

    @pytest.mark.parametrize("width", [0.3, 8.0, 0.0])
    def test_width_bounds(self, grid1d, sym1d, width):
        # spacing ~0.245 so 2*dx ~0.49; L/8 ~7.85
        with pytest.raises(ConfigurationError):
            make_gaussian(grid1d, 20.0, width, 0.5, "plus", sym1d)

    def test_periodic_wrap_and_remainder(self, grid1d):
        width = L / 8
        # center at x=0 so half of the packet wraps around the boundary
        f = gaussian_profile(grid1d, 0.0, width, 0.0)
        (x,) = grid1d.axis_coordinates
        reflected = np.roll(f.values[::-1], 1)  # f(-x) on the periodic grid
        np.testing.assert_allclose(f.values, reflected, atol=1e-15)
        # first image beyond the 3 summed ones, relative to the peak
        remainder = math.exp(-((3.5 * L) ** 2) / (4 * width**2))
        assert remainder < 1e-14

    def test_wrapped_sum_matches_brute_force(self):
        g = make_grid(1, [64], [10.0])
        width, center, k0 = 1.2, 9.0, 0.77
        f = gaussian_profile(g, center, width, k0)
        (x,) = g.axis_coordinates
        brute = sum(
            np.exp(-((x + n * 10.0 - center) ** 2) / (4 * width**2) + 1j * k0 * (x + n * 10.0))
            for n in range(-20, 21)
        )
        brute /= math.sqrt(g.cell_volume * np.sum(np.abs(brute) ** 2))
        np.testing.assert_allclose(f.values, brute, atol=1e-14)

    def test_2d_packet(self):
        g = make_grid(2, [64, 32], [40.0, 20.0])
        sym = build_symbol(g, PhysicalParams())
        psi, dpsi = make_gaussian(g, (20.0, 10.0), 2.0, (0.5, -0.25), "plus", sym)
        assert norm_squared(psi) == pytest.approx(1.0)
        np.testing.assert_allclose(centroid(psi), [20.0, 10.0], atol=1e-9)


def test_rest_frequency_nonrelativistic():
    # large box so the momentum spread 1/(2 width) = 0.025 is << m c / hbar
    g = make_grid(1, [512], [200.0])
    sym = build_symbol(g, PhysicalParams())
    psi, dpsi = make_gaussian(g, 100.0, 20.0, 0.0, "plus", sym)
    d = diagonalize(embed(psi, dpsi, sym))
    times = np.linspace(0, 2.0, 41)
    amps = [inner(psi, step_exact(d, t, sym).eta_plus) for t in times]
    omega = fit_phase_frequency(times, amps)
    assert omega == pytest.approx(1.0, rel=1e-3)


def momentum_averaged_velocity(psi, sym):
    """<c^2 hbar k / E(k)> weighted by |psi_hat|^2 along the first axis."""
    p = sym.params
    weights = np.abs(psi.to_spectral().values) ** 2
    k = psi.grid.wavenumbers()[0]
    v = p.c**2 * p.hbar * k / sym.values
    return float(np.sum(weights * v) / np.sum(weights))


@pytest.mark.parametrize("k0, width", [(0.05, 7.5), (1.0, 7.5), (0.3, 6.0)])
def test_group_velocity(grid1d, sym1d, k0, width):
    psi, dpsi = make_gaussian(grid1d, L / 2, width, k0, "plus", sym1d)
    d = diagonalize(embed(psi, dpsi, sym1d))
    times = np.linspace(0, 10, 21)
    tracks = []
    for t in times:
        eta = step_exact(d, t, sym1d).eta_plus
        tracks.append(centroid(eta))
    v = fit_velocity(times, np.array(tracks), grid1d.lengths)[0]
    group = k0 / math.sqrt(1 + k0**2)
    assert v == pytest.approx(group, rel=1e-2)


def test_narrow_packet_moves_at_momentum_average(grid1d, sym1d):
    # width 2 has momentum spread 0.25, five times k0; the centroid then
    # follows the momentum-averaged velocity rather than v(k0)
    psi, dpsi = make_gaussian(grid1d, L / 2, 2.0, 0.05, "plus", sym1d)
    d = diagonalize(embed(psi, dpsi, sym1d))
    times = np.linspace(0, 1.0, 11)
    tracks = [centroid(step_exact(d, t, sym1d).eta_plus) for t in times]
    v = fit_velocity(times, np.array(tracks), grid1d.lengths)[0]
    assert v == pytest.approx(momentum_averaged_velocity(psi, sym1d), rel=1e-3)
    assert abs(v / (0.05 / math.sqrt(1.0025)) - 1) > 0.05


class TestSpec:
    def test_defaults_build(self, grid1d, sym1d):
        state = build_initial_state(InitialConditionSpec(), grid1d, sym1d)
        plus, minus = conserved_norms(diagonalize(state))
        assert plus == pytest.approx(4.0)
        assert minus < 1e-24

    @pytest.mark.parametrize("kind, nonzero", [("pure_plus", 0), ("pure_minus", 1)])
    def test_pure_kinds(self, grid1d, sym1d, kind, nonzero):
        state = build_initial_state(InitialConditionSpec(kind=kind), grid1d, sym1d)
        norms = conserved_norms(diagonalize(state))
        assert norms[nonzero] == pytest.approx(1.0)
        assert norms[1 - nonzero] < 1e-28

    def test_plane_wave_kind(self, grid1d, sym1d):
        spec = InitialConditionSpec(kind="plane_wave", modes=((2,),), branch="minus")
        state = build_initial_state(spec, grid1d, sym1d)
        assert conserved_norms(diagonalize(state))[0] < 1e-24

    @pytest.mark.parametrize(
        "kw",
        [
            {"kind": "vortex"},
            {"branch": "sideways"},
            {"width": -1.0},
            {"kind": "superposition"},
            {"kind": "plane_wave", "modes": ((1,), (2,))},
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ConfigurationError):
            InitialConditionSpec(**kw)

    def test_mode_out_of_grid(self, grid1d):
        spec = InitialConditionSpec(kind="plane_wave", modes=((500,),))
        with pytest.raises(ConfigurationError):
            spec.validate_for(grid1d)

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from hopfmono import monopole as mp
from hopfmono.coords import EulerCoords, R3Point, euler_arrays, euler_to_c2, hopf_arrays
from hopfmono.numerics import PoleProximityError
from hopfmono.operators import LAPLACE, V4, X3, L, V, X_, velocity
from hopfmono.symalg import ONE, R, Z1, Z2, Z2C, Sampler, SymFunc, SymTerm, approx_equal, evaluate, evaluate_arrays

GRID = [(k, d) for k in range(5) for d in range(-k, k + 1)]


def test_xi_trivial_sector_is_one():
    assert approx_equal(mp.xi_factor(0, 0), ONE)


def test_xi_semi_string_factor():
    half = Fraction(1, 2)
    assert mp.xi_factor(1, 1) == SymFunc.monomial(p2=half, q2=-half)
    assert approx_equal(mp.xi_factor(1, 1), (Z2 * Z2C**-1) ** half)


@pytest.mark.parametrize("phi0, gamma0", [(0.0, 0.0), (0.4, 1.1), (-2.0, 2.9)])
def test_xi_euler_form(phi0, gamma0):
    p = euler_to_c2(EulerCoords(1.0, math.pi / 2, phi0, gamma0))
    assert evaluate(mp.xi_factor(2, 0), p) == pytest.approx(cmath.exp(1j * gamma0), abs=1e-12)


def test_xi_rejects_non_integers():
    with pytest.raises(TypeError):
        mp.xi_factor(0.5, 0.5)
    assert mp.xi_factor(2.0, 0) == mp.xi_factor(2, 0)


@pytest.mark.parametrize("kappa, delta", GRID + [(-3, 1), (-2, -2)])
def test_xi_is_a_pure_phase(kappa, delta):
    z1, z2 = Sampler(n=200, seed=kappa + 10 * delta + 50).points()
    assert np.allclose(np.abs(evaluate_arrays(mp.xi_factor(kappa, delta), z1, z2)), 1.0, atol=1e-12)


def test_make_state():
    s = mp.make_state(ONE, 2, 0)
    assert s.mu == 1
    assert approx_equal(s.full, s.xi)
    s0 = mp.make_state(X3, 0, 0)
    assert approx_equal(s0.xi, ONE)
    assert approx_equal(s0.full, X3)
    with pytest.raises(mp.RestrictionError):
        mp.make_state(Z1, 1, 1)
    with pytest.raises(TypeError):
        mp.make_state(ONE, 1.5, 0)


@pytest.mark.parametrize("kappa, delta", GRID)
def test_single_valued_around_the_fibre(kappa, delta):
    r, theta, phi = mp.sample_off_pole(20, seed=3)
    gamma = np.linspace(-1, 1, 20)
    xi = mp.xi_factor(kappa, delta)
    a = mp.euler_eval(xi, r, theta, phi, gamma)
    b = mp.euler_eval(xi, r, theta, phi, gamma + 4 * math.pi)
    assert np.max(np.abs(a - b)) < 1e-12


def test_half_odd_charge_is_not_single_valued():
    # κ = δ = 1/2 built directly, bypassing the integer check
    q = Fraction(1, 4)
    xi = SymTerm(1.0, p2=q, q2=-q).as_func()
    r, theta, phi = mp.sample_off_pole(5, seed=4)
    a = mp.euler_eval(xi, r, theta, phi, 0.3)
    b = mp.euler_eval(xi, r, theta, phi, 0.3 + 4 * math.pi)
    assert np.allclose(b, -a, atol=1e-12)
    assert mp.monodromy(xi)[1] == pytest.approx(-1)


def test_continuity_on_c2_needs_equal_parity():
    # loops arg z_α += 2π are finer than γ += 4π
    assert mp.is_single_valued(2, 0)
    assert mp.is_single_valued(3, 1)
    assert not mp.is_single_valued(1, 0)
    with pytest.raises(ValueError):
        mp.monodromy(ONE + Z1)


@pytest.mark.parametrize(
    "kappa, delta, phi",
    [(0, 0, ONE), (2, 0, ONE), (4, 2, X3), (3, -1, R**2), (-2, 0, X3)],
)
def test_angular_shift(kappa, delta, phi):
    state = mp.make_state(phi, kappa, delta)
    assert mp.angular_shift_check(state) <= 1e-9


def test_angular_shift_detects_wrong_charge():
    state = mp.make_state(ONE, 2, 0)
    fake = mp.MonopoleState(state.phi, 4, 0, state.xi)
    with pytest.raises(ArithmeticError):
        mp.angular_shift_check(fake)


@pytest.mark.parametrize("kappa, delta", GRID)
def test_velocity_commutator(kappa, delta):
    for phi in (ONE, X3, R**2):
        state = mp.make_state(phi, kappa, delta)
        for i, j in ((1, 2), (2, 3), (3, 1)):
            assert mp.commutator_field_deviation(state, i, j) <= 1e-9


@pytest.mark.parametrize("phi, kappa, delta", [(ONE, 2, 0), (X3, 0, 0), (R**2, 3, 1), (X3, -1, 1)])
def test_measure_charge(phi, kappa, delta):
    assert mp.measure_charge(mp.make_state(phi, kappa, delta)) == kappa


def test_measure_charge_mismatch():
    state = mp.make_state(ONE, 2, 0)
    with pytest.raises(mp.ChargeMismatchError):
        mp.measure_charge(mp.MonopoleState(state.phi, 1, 0, state.xi))


@pytest.mark.parametrize("kappa, delta, r, theta, want", [(2, 0, 1.0, math.pi / 2, 0.0), (2, 0, 1.0, math.pi / 4, 1.0)])
def test_extracted_a_phi_examples(kappa, delta, r, theta, want):
    assert float(mp.gauge_potential(kappa, delta).a_phi(r, theta, 0.7).real) == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("kappa, delta", [(2, 0), (1, -1), (3, 1), (4, 4), (0, 2)])
def test_potential_is_azimuthal_and_matches_closed_form(kappa, delta):
    r, theta, phi = mp.sample_off_pole(100, seed=kappa + 7 * abs(delta))
    a_r, a_t, a_p = mp.gauge_potential(kappa, delta).spherical(r, theta, phi)
    assert np.max(np.abs(a_r)) < 1e-9
    assert np.max(np.abs(a_t)) < 1e-9
    closed = mp.a_phi_closed_form(kappa, delta, r, theta)
    assert np.max(np.abs(a_p - closed) / (1 + np.abs(closed))) < 1e-9


def test_partial_potential_misses_closed_form():
    r, theta, phi = mp.sample_off_pole(50, seed=2)
    a_p = mp.gauge_potential_partial(2, 0).spherical(r, theta, phi)[2]
    assert np.max(np.abs(a_p - mp.a_phi_closed_form(2, 0, r, theta))) > 1e-2


@pytest.mark.parametrize("kappa, delta, r, theta, want", [(0, 2, 1.0, math.pi / 2, 1.0), (2, 0, 2.0, math.pi / 2, 0.0)])
def test_a_phi_closed_form_examples(kappa, delta, r, theta, want):
    assert float(mp.a_phi_closed_form(kappa, delta, r, theta)) == pytest.approx(want, abs=1e-15)


def test_a_phi_split_sums_to_total(rng):
    r = rng.uniform(0.1, 5, 1000)
    theta = rng.uniform(0.01, math.pi - 0.01, 1000)
    pot = mp.gauge_potential(3, 1)
    total = mp.a_phi_closed_form(3, 1, r, theta)
    assert np.allclose(pot.a_kappa(r, theta) + pot.a_delta(r, theta), total, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("theta", [0.0, math.pi])
def test_a_phi_pole_error(theta):
    with pytest.raises(PoleProximityError):
        mp.a_phi_closed_form(2, 0, 1.0, theta)


def test_magnetic_field_examples():
    assert mp.magnetic_field(2, [0.0, 0.0, 1.0]) == pytest.approx([0, 0, -1])
    assert np.all(mp.magnetic_field(0, R3Point(1, 2, 3).as_array()) == 0)
    with pytest.raises(ValueError):
        mp.magnetic_field(1, [0.0, 0.0, 0.0])


def test_closed_form_flux_kappa_three():
    assert mp.closed_form_flux(3) == pytest.approx(-6 * math.pi, rel=1e-12)


def test_field_is_radial(rng):
    x = rng.normal(size=(50, 3))
    b = mp.magnetic_field(3, x)
    assert np.max(np.linalg.norm(np.cross(b, x), axis=-1)) < 1e-12


def test_curl_check_zero_sector():
    assert mp.curl_check(0, 0) == 0.0


@pytest.mark.parametrize("kappa, delta", [(2, 0), (2, 2), (3, -1), (1, 1)])
def test_curl_reproduces_field(kappa, delta):
    assert mp.curl_check(kappa, delta) < 1e-4


def test_field_is_independent_of_delta():
    r, theta, phi = mp.sample_off_pole(100, seed=5)
    ref = mp.curl_of_potential(mp.gauge_potential(2, 0), r, theta, phi)
    for delta in (-2, -1, 1, 2):
        b = mp.curl_of_potential(mp.gauge_potential(2, delta), r, theta, phi)
        assert mp._relative_error(b, ref) < 1e-4


@pytest.mark.parametrize("kappa", [1, 2, 3])
def test_numerical_flux(kappa):
    flux = mp.numerical_flux(kappa, kappa % 2)
    assert flux == pytest.approx(-2 * math.pi * kappa, rel=1e-3)


@pytest.mark.parametrize(
    "kappa, delta, want",
    [(2, 0, {"north", "south"}), (2, 2, {"north"}), (2, -2, {"south"}), (0, 0, set()), (3, 1, {"north", "south"})],
)
def test_string_singularities(kappa, delta, want):
    assert mp.string_singularities(kappa, delta) == want


def test_imaginary_gauge():
    g = mp.imaginary_gauge(2)
    x = mp.sample_r3_off_axis(50, seed=6)
    assert np.max(np.abs(g.im_potential_at(x) - g.minus_grad_log_xi_prime(x))) < 1e-5
    # just off the north pole at r = 1 the field is close to (0, 0, -1)
    b = mp.curl_of_potential(g.potential, np.array([1.0]), np.array([1e-3]), np.array([0.0]))
    assert b[0] == pytest.approx([0, 0, -1], abs=2e-3)
    assert approx_equal(g.gauged_factor, mp.xi_factor(2, 0))


def test_imaginary_gauge_same_field_as_phase():
    g = mp.imaginary_gauge(2)
    r, theta, phi = mp.sample_off_pole(100, seed=8)
    x = hopf_arrays(*euler_arrays(r, theta, phi, 0.0))
    b = mp.curl_of_potential(g.potential, r, theta, phi)
    assert mp._relative_error(b, mp.magnetic_field(2, x)) < 1e-4


def test_imaginary_gauge_trivial_sector():
    g = mp.imaginary_gauge(0)
    x = mp.sample_r3_off_axis(10, seed=9)
    assert np.max(np.abs(g.im_potential_at(x))) == 0.0


def test_restricted_sector_reduces_to_plain_operators():
    ops = [LAPLACE, V4, X_(1), V(2), L(3)]
    assert mp.restricted_reduction_deviation(X3 * R**-1, ops) == 0.0


def test_potential_from_velocity_action():
    xi = mp.xi_factor(3, 1)
    pot = mp.gauge_potential(3, 1)
    for j in (1, 2, 3):
        assert approx_equal(velocity(j, xi), pot.cartesian[j - 1] * xi)

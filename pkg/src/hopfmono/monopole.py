"""Generalised states Φ(x)·ξ_κ and the monopole fields they carry.

The factor

    ξ_κ = (z1/z1*)^{(κ-δ)/4} (z2/z2*)^{(κ+δ)/4} = exp(iκγ/2) exp(iδφ/2)

has unequal powers of z and z*, so states built from it depend on the
fibre angle γ.  The velocity operators then pick up a gauge potential
``A_j = V_j ξ_κ / ξ_κ`` whose curl is the Coulomb-like field
``B = -(κ/2) x / r³``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral
from typing import Iterable

import numpy as np

from . import numerics
from .coords import euler_arrays, hopf_arrays, r3_to_c2_arrays
from .operators import (
    PAULI,
    LinOp,
    V,
    X,
    angular_momentum,
    commutator,
    cross_xv,
    levi_civita,
    position,
    v4,
    velocity,
)
from .symalg import (
    ONE,
    R,
    Sampler,
    SymFunc,
    approx_equal,
    evaluate_arrays,
    max_deviation,
    mul,
    partial,
    reciprocal,
    scale,
    Z1,
    Z2,
)

STRING_THRESHOLD = 1e6


class RestrictionError(ValueError):
    """Φ has unequal total powers of z and z*, so it is not a function of x."""


class ChargeMismatchError(ArithmeticError):
    pass


def _as_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral):
        if isinstance(value, (float, Fraction)) and value == int(value):
            return int(value)
        raise TypeError(f"{name} must be an integer, got {value!r}")
    return int(value)


def xi_factor(kappa: int, delta: int) -> SymFunc:
    kappa, delta = _as_int(kappa, "kappa"), _as_int(delta, "delta")
    a = Fraction(kappa - delta, 4)
    b = Fraction(kappa + delta, 4)
    return SymFunc.monomial(1.0, 0, a, -a, b, -b)


def is_restricted(phi: SymFunc) -> bool:
    """Equal total powers of z and z* in every term (r powers are free)."""
    return all(p1 + p2 == q1 + q2 for (_s, p1, q1, p2, q2), _c in phi.items())


@dataclass(frozen=True)
class MonopoleState:
    phi: SymFunc
    kappa: int
    delta: int
    xi: SymFunc

    @property
    def mu(self) -> Fraction:
        """Magnetic charge κ/2."""
        return Fraction(self.kappa, 2)

    @property
    def full(self) -> SymFunc:
        return mul(self.phi, self.xi)


def make_state(phi: SymFunc, kappa: int, delta: int, sampler: Sampler | None = None) -> MonopoleState:
    kappa, delta = _as_int(kappa, "kappa"), _as_int(delta, "delta")
    if not is_restricted(phi):
        raise RestrictionError("phi must depend on z only through x = z̄σz")
    xi = xi_factor(kappa, delta)
    z1, z2 = (sampler or Sampler(n=10, seed=7)).points()
    if not np.allclose(np.abs(evaluate_arrays(xi, z1, z2)), 1.0, rtol=0, atol=1e-12):
        raise ArithmeticError("ξ_κ failed the unit-modulus check")
    return MonopoleState(phi, kappa, delta, xi)


def euler_eval(f: SymFunc, r, theta, phi, gamma) -> np.ndarray:
    """Evaluate along the Euler chart, continuing phases through the angles.

    Uses ``arg z1 = (γ - φ)/2`` and ``arg z2 = (γ + φ)/2`` unreduced, so a
    fractional power is followed continuously instead of jumping at the
    principal cut.  Raw angles are used; no reduction modulo 4π.
    """
    r, theta = np.asarray(r, dtype=float), np.asarray(theta, dtype=float)
    m1 = np.sqrt(r) * np.cos(theta / 2)
    m2 = np.sqrt(r) * np.sin(theta / 2)
    a1 = (np.asarray(gamma, dtype=float) - phi) / 2
    a2 = (np.asarray(gamma, dtype=float) + phi) / 2
    out = 0j
    for (s, p1, q1, p2, q2), c in f.items():
        mag = r ** float(s) * m1 ** float(p1 + q1) * m2 ** float(p2 + q2)
        out = out + c * mag * np.exp(1j * (float(p1 - q1) * a1 + float(p2 - q2) * a2))
    return np.asarray(out)


def monodromy(f: SymFunc) -> tuple[complex, complex]:
    """Phase picked up by each term around the loops ``arg z1 += 2π`` and ``arg z2 += 2π``.

    Returns the pair for a single-term function.  Both equal 1 exactly when
    the function is continuous (single-valued) on C² minus the axes.
    """
    if len(f) != 1:
        raise ValueError("monodromy is defined here for single-term functions")
    ((_s, p1, q1, p2, q2), _c), = f.items()
    return cmath.exp(2j * math.pi * float(p1 - q1)), cmath.exp(2j * math.pi * float(p2 - q2))


def is_single_valued(kappa: int, delta: int) -> bool:
    w1, w2 = monodromy(xi_factor(kappa, delta))
    return abs(w1 - 1) < 1e-12 and abs(w2 - 1) < 1e-12


# operator identities on states


def angular_shift_residuals(state: MonopoleState) -> tuple[SymFunc, SymFunc, SymFunc]:
    """``ε_ijk x_j V_k Φ_κ - L_i Φ_κ - (κ/2)(x_i/r) Φ_κ`` for i = 1, 2, 3."""
    f = state.full
    inv_r = reciprocal(R)
    out = []
    for i in (1, 2, 3):
        res = cross_xv(i, f) - angular_momentum(i, f) - scale(state.kappa / 2, mul(inv_r, position(i, f)))
        out.append(res)
    return tuple(out)  # type: ignore[return-value]


def angular_shift_check(state: MonopoleState, sampler: Sampler | None = None, tol: float = 1e-9) -> float:
    """Largest oracle deviation of the three residuals from zero."""
    zero = SymFunc()
    dev = max(max_deviation(res, zero, sampler) for res in angular_shift_residuals(state))
    if dev > tol:
        raise ArithmeticError(f"angular shift relation violated: deviation {dev:.3g}")
    return dev


def commutator_field_rhs(state: MonopoleState, i: int, j: int) -> SymFunc:
    """``(κ/2) i ε_ijk (x_k / r³) Φ_κ``."""
    f = state.full
    out = SymFunc()
    for k in (1, 2, 3):
        e = levi_civita(i, j, k)
        if e:
            out = out + scale(0.5j * state.kappa * e, mul(R**-3, position(k, f)))
    return out


def commutator_field_deviation(state: MonopoleState, i: int, j: int, sampler: Sampler | None = None) -> float:
    lhs = commutator(V(i), V(j), state.full)
    return max_deviation(lhs, commutator_field_rhs(state, i, j), sampler)


def measure_charge(state: MonopoleState, sampler: Sampler | None = None, tol: float = 1e-9) -> int:
    """Return κ after checking ``r · V_4 Φ_κ = (iκ/2) Φ_κ``."""
    f = state.full
    lhs = mul(R, v4(f))
    rhs = scale(0.5j * state.kappa, f)
    dev = max_deviation(lhs, rhs, sampler)
    if dev > tol:
        raise ChargeMismatchError(f"r·V4 Φ ≠ (iκ/2) Φ: deviation {dev:.3g}")
    return state.kappa


# gauge potential


def _potential_from_factor(xi: SymFunc, partial_only: bool = False) -> tuple[SymFunc, SymFunc, SymFunc]:
    inv = reciprocal(xi)
    if not partial_only:
        return tuple(mul(velocity(j, xi), inv) for j in (1, 2, 3))  # type: ignore[return-value]
    # only the z_δ ∂_{z_γ} part of V_j
    comps = []
    for j in range(3):
        acc = SymFunc()
        for g in range(2):
            dxi = partial(xi, ("z1", "z2")[g])
            for d in range(2):
                c = PAULI[j][g][d]
                if c:
                    acc = acc + scale(c, mul((Z1, Z2)[d], dxi))
        comps.append(scale(-0.5j, mul(R**-1, mul(acc, inv))))
    return tuple(comps)  # type: ignore[return-value]


@dataclass(frozen=True)
class GaugePotential:
    kappa: int
    delta: int
    cartesian: tuple[SymFunc, SymFunc, SymFunc]

    def cartesian_at(self, r, theta, phi) -> np.ndarray:
        """Cartesian components at spherical points, shape ``(..., 3)``."""
        z1, z2 = euler_arrays(r, theta, phi, 0.0)
        return np.stack([evaluate_arrays(a, z1, z2) for a in self.cartesian], axis=-1)

    def spherical(self, r, theta, phi):
        """Physical components ``(A_r, A_θ, A_φ)``: projections on the unit frame."""
        a = self.cartesian_at(r, theta, phi)
        e_r, e_t, e_p = numerics.spherical_frame(theta, phi)
        return (np.sum(a * e_r, -1), np.sum(a * e_t, -1), np.sum(a * e_p, -1))

    def a_phi(self, r, theta, phi=0.0):
        return self.spherical(r, theta, phi)[2]

    def a_kappa(self, r, theta):
        return a_phi_split(self.kappa, self.delta, r, theta)[0]

    def a_delta(self, r, theta):
        return a_phi_split(self.kappa, self.delta, r, theta)[1]


def gauge_potential(kappa: int, delta: int) -> GaugePotential:
    """A_j = V_j ξ_κ / ξ_κ from the full velocity operator."""
    xi = xi_factor(kappa, delta)
    return GaugePotential(kappa, delta, _potential_from_factor(xi))


def gauge_potential_partial(kappa: int, delta: int) -> GaugePotential:
    """Potential from the ``z ∂_z`` half of V_j alone, kept for comparison."""
    xi = xi_factor(kappa, delta)
    return GaugePotential(kappa, delta, _potential_from_factor(xi, partial_only=True))


def _check_off_pole(theta) -> None:
    t = np.asarray(theta, dtype=float)
    if np.any(np.sin(t) == 0.0) or np.any(t <= 0.0) or np.any(t >= math.pi):
        raise numerics.PoleProximityError("A_φ is singular at θ = 0, π")


def a_phi_closed_form(kappa, delta, r, theta):
    """(δ + κ cos θ) / (2 r sin θ)."""
    _check_off_pole(theta)
    r, theta = np.asarray(r, dtype=float), np.asarray(theta, dtype=float)
    return (delta + kappa * np.cos(theta)) / (2 * r * np.sin(theta))


def a_phi_split(kappa, delta, r, theta):
    """``(A_φ^κ, A_φ^δ) = ((κ/2r) cot θ, (δ/2r) csc θ)``."""
    _check_off_pole(theta)
    r, theta = np.asarray(r, dtype=float), np.asarray(theta, dtype=float)
    return kappa / (2 * r * np.tan(theta)), delta / (2 * r * np.sin(theta))


def magnetic_field(kappa, x) -> np.ndarray:
    """B = -(κ/2) x / |x|³ for points of shape ``(..., 3)``."""
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x, axis=-1, keepdims=True)
    if np.any(r == 0.0):
        raise ValueError("the field is undefined at the origin")
    return -0.5 * kappa * x / r**3


def curl_of_potential(pot: GaugePotential, r, theta, phi, h: float = 1e-5, real_part: bool = True) -> np.ndarray:
    """Cartesian rot A by spherical finite differences."""
    def comps(rr, tt, pp):
        c = pot.spherical(rr, tt, pp)
        return tuple(np.real(v) for v in c) if real_part else c

    b = numerics.spherical_curl(comps, r, theta, phi, h)
    return numerics.spherical_to_cartesian_vector(b, theta, phi)


def sample_off_pole(n: int, seed: int = 42, margin: float = 0.05, r_range=(0.5, 2.0)):
    """Random spherical points ``(r, θ, φ)`` with θ at least ``margin`` from the poles."""
    rng = np.random.default_rng(seed)
    r = rng.uniform(*r_range, n)
    theta = rng.uniform(margin, math.pi - margin, n)
    phi = rng.uniform(-math.pi, math.pi, n)
    return r, theta, phi


def _relative_error(got: np.ndarray, want: np.ndarray) -> float:
    diff = np.linalg.norm(got - want, axis=-1)
    scale_ = np.linalg.norm(want, axis=-1)
    rel = np.where(scale_ > 0, diff / np.where(scale_ > 0, scale_, 1.0), diff)
    return float(np.max(rel)) if rel.size else 0.0


def curl_check(kappa: int, delta: int, points=None, h: float = 1e-5) -> float:
    """Max relative deviation of the FD curl of the extracted A from the closed-form B."""
    pot = gauge_potential(kappa, delta)
    r, theta, phi = points if points is not None else sample_off_pole(100)
    b_num = curl_of_potential(pot, r, theta, phi, h)
    x = hopf_arrays(*euler_arrays(r, theta, phi, 0.0))
    return _relative_error(b_num, magnetic_field(kappa, x))


def numerical_flux(kappa: int, delta: int, radius: float = 1.0, h: float = 1e-5, n_theta: int = 24) -> float:
    """∮ rot A · dS over a sphere, rot A by finite differences."""
    pot = gauge_potential(kappa, delta)

    def radial(r, theta, phi):
        b = numerics.spherical_curl(
            lambda rr, tt, pp: tuple(np.real(v) for v in pot.spherical(rr, tt, pp)), r, theta, phi, h
        )
        return b[0]

    return numerics.sphere_flux(radial, radius, n_theta=n_theta)


def closed_form_flux(kappa, radius: float = 1.0, n_theta: int = 24) -> float:
    def radial(r, theta, phi):
        x = hopf_arrays(*euler_arrays(r, theta, phi, 0.0))
        b = magnetic_field(kappa, x)
        e_r = numerics.spherical_frame(theta, phi)[0]
        return np.sum(b * e_r, -1)

    return numerics.sphere_flux(radial, radius, n_theta=n_theta)


def string_singularities(kappa: int, delta: int, phi: float = 0.3, threshold: float = STRING_THRESHOLD) -> frozenset[str]:
    """Poles where |A_φ| of the extracted potential diverges.

    Scans θ = 10^-2 ... 10^-9 towards each pole at r = 1; a pole is singular
    if |A_φ| grows along the scan and exceeds ``threshold``.
    """
    pot = gauge_potential(kappa, delta)
    eps = 10.0 ** -np.arange(2, 10)
    found = set()
    for name, thetas in (("north", eps), ("south", math.pi - eps)):
        vals = np.abs(pot.a_phi(np.ones_like(thetas), thetas, phi))
        if vals[-1] > threshold and vals[-1] > vals[0]:
            found.add(name)
    return frozenset(found)


# complex (non-phase) factor


def xi_nonphase(kappa: int) -> SymFunc:
    """ξ = (z1 z2)^{κ/2}."""
    kappa = _as_int(kappa, "kappa")
    k = Fraction(kappa, 2)
    return SymFunc.monomial(1.0, 0, k, 0, k, 0)


def xi_modulus(kappa: int) -> SymFunc:
    """ξ' = |z1 z2|^{κ/2} = (z1 z1* z2 z2*)^{κ/4}, the (r, θ, φ) part of (z1 z2)^{κ/2}."""
    k = Fraction(_as_int(kappa, "kappa"), 4)
    return SymFunc.monomial(1.0, 0, k, k, k, k)


@dataclass(frozen=True)
class ImaginaryGauge:
    kappa: int
    xi: SymFunc
    potential: GaugePotential
    xi_prime: SymFunc
    gauged_factor: SymFunc

    def im_potential_at(self, x) -> np.ndarray:
        z1, z2 = r3_to_c2_arrays(x)
        return np.stack([evaluate_arrays(a, z1, z2).imag for a in self.potential.cartesian], axis=-1)

    def minus_grad_log_xi_prime(self, x, h: float = 1e-5) -> np.ndarray:
        """-∇ log ξ' by central differences of |ξ| pulled back to R³."""
        def log_mod(y):
            z1, z2 = r3_to_c2_arrays(y)
            return np.log(np.abs(evaluate_arrays(self.xi, z1, z2)))

        return -numerics.fd_gradient(log_mod, x, h)


def imaginary_gauge(kappa: int) -> ImaginaryGauge:
    xi = xi_nonphase(kappa)
    pot = GaugePotential(kappa, 0, _potential_from_factor(xi))
    xi_p = xi_modulus(kappa)
    return ImaginaryGauge(kappa, xi, pot, xi_p, mul(xi, reciprocal(xi_p)))


def sample_r3_off_axis(n: int, seed: int = 42):
    r, theta, phi = sample_off_pole(n, seed, margin=0.2)
    return hopf_arrays(*euler_arrays(r, theta, phi, 0.0))


def restricted_reduction_deviation(phi: SymFunc, ops: Iterable[LinOp], sampler: Sampler | None = None) -> float:
    """For κ = 0 the state equals Φ itself; compare each operator on Φ and on the state."""
    state = make_state(phi, 0, 0)
    return max(max_deviation(op(phi), op(state.full), sampler) for op in ops)


__all__ = [
    "GaugePotential", "ImaginaryGauge", "MonopoleState", "RestrictionError", "ChargeMismatchError",
    "a_phi_closed_form", "a_phi_split", "angular_shift_check", "angular_shift_residuals",
    "closed_form_flux", "commutator_field_deviation", "commutator_field_rhs", "curl_check",
    "curl_of_potential", "euler_eval", "gauge_potential", "gauge_potential_partial", "imaginary_gauge",
    "is_restricted", "is_single_valued", "magnetic_field", "make_state", "measure_charge", "monodromy",
    "numerical_flux", "sample_off_pole", "sample_r3_off_axis", "string_singularities", "xi_factor",
    "xi_modulus", "xi_nonphase", "ONE", "X", "approx_equal",
]

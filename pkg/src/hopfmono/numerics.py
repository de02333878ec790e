"""Numerical oracles: finite differences, spherical curl, Monte-Carlo norms.

These routines know nothing about the symbolic layer beyond calling a
function on arrays of points, so they stay independent of the code paths
they are used to check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .coords import hopf_arrays


class PoleProximityError(ValueError):
    pass


class DivergentIntegralError(ArithmeticError):
    pass


@dataclass(frozen=True)
class QuadratureConfig:
    n_samples: int = 100_000
    seed: int = 42
    r_min: float = 0.0
    r_max: float = 30.0
    fd_step: float = 1e-5
    # rate of the exponential radial proposal
    radial_rate: float = 1.0
    max_rel_stderr: float = 0.25

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be positive")
        if not 1e-7 <= self.fd_step <= 1e-3:
            raise ValueError(f"fd_step must lie in [1e-7, 1e-3], got {self.fd_step}")
        if not 0.0 <= self.r_min < self.r_max:
            raise ValueError("need 0 <= r_min < r_max")
        if self.radial_rate <= 0:
            raise ValueError("radial_rate must be positive")


# finite differences


def fd_partial(f: Callable, point, direction, h: float = 1e-5):
    """Central difference ``(f(p + h d) - f(p - h d)) / 2h``.

    ``point`` may carry leading batch dimensions; ``direction`` broadcasts
    against it.
    """
    p = np.asarray(point, dtype=float)
    d = np.asarray(direction, dtype=float)
    return (f(p + h * d) - f(p - h * d)) / (2 * h)


def fd_gradient(f: Callable, point, h: float = 1e-5) -> np.ndarray:
    p = np.asarray(point, dtype=float)
    n = p.shape[-1]
    return np.stack([fd_partial(f, p, np.eye(n)[k], h) for k in range(n)], axis=-1)


def fd_laplacian(f: Callable, point, h: float = 1e-3):
    """Fourth-order central stencil summed over axes."""
    p = np.asarray(point, dtype=float)
    f0 = f(p)
    total = 0.0
    for k in range(p.shape[-1]):
        e = np.eye(p.shape[-1])[k] * h
        total = total + (-f(p + 2 * e) + 16 * f(p + e) - 30 * f0 + 16 * f(p - e) - f(p - 2 * e))
    return total / (12 * h * h)


# spherical curl


def spherical_curl(A: Callable, r, theta, phi, h: float = 1e-5):
    """Curl of a field given by physical spherical components.

    ``A(r, θ, φ)`` returns ``(A_r, A_θ, A_φ)``.  Returns the physical
    components ``(B_r, B_θ, B_φ)`` of ``rot A`` by central differences.
    """
    r, theta, phi = (np.asarray(v, dtype=float) for v in (r, theta, phi))
    if np.any(theta < 10 * h) or np.any(math.pi - theta < 10 * h):
        raise PoleProximityError("curl evaluated within 10 h of a pole")
    if np.any(r <= h):
        raise PoleProximityError("curl evaluated too close to the origin")

    def shifted(axis):
        shift = [np.zeros_like(r), np.zeros_like(r), np.zeros_like(r)]
        shift[axis] = h
        hi = A(r + shift[0], theta + shift[1], phi + shift[2])
        lo = A(r - shift[0], theta - shift[1], phi - shift[2])
        return hi, lo

    (ar_hi, at_hi, ap_hi), (ar_lo, at_lo, ap_lo) = shifted(0)
    dr_rAt = ((r + h) * at_hi - (r - h) * at_lo) / (2 * h)
    dr_rAp = ((r + h) * ap_hi - (r - h) * ap_lo) / (2 * h)

    (ar_hi, at_hi, ap_hi), (ar_lo, at_lo, ap_lo) = shifted(1)
    dth_sinAp = (np.sin(theta + h) * ap_hi - np.sin(theta - h) * ap_lo) / (2 * h)
    dth_Ar = (ar_hi - ar_lo) / (2 * h)

    (ar_hi, at_hi, ap_hi), (ar_lo, at_lo, ap_lo) = shifted(2)
    dph_At = (at_hi - at_lo) / (2 * h)
    dph_Ar = (ar_hi - ar_lo) / (2 * h)

    sin = np.sin(theta)
    b_r = (dth_sinAp - dph_At) / (r * sin)
    b_t = (dph_Ar / sin - dr_rAp) / r
    b_p = (dr_rAt - dth_Ar) / r
    return b_r, b_t, b_p


def spherical_frame(theta, phi):
    """Unit vectors ``(ê_r, ê_θ, ê_φ)``, each of shape ``(..., 3)``."""
    theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    st, ct, sp, cp = np.sin(theta), np.cos(theta), np.sin(phi), np.cos(phi)
    e_r = np.stack([st * cp, st * sp, ct], axis=-1)
    e_t = np.stack([ct * cp, ct * sp, -st], axis=-1)
    e_p = np.stack([-sp, cp, np.zeros_like(st)], axis=-1)
    return e_r, e_t, e_p


def spherical_to_cartesian_vector(components, theta, phi) -> np.ndarray:
    e_r, e_t, e_p = spherical_frame(theta, phi)
    c_r, c_t, c_p = (np.asarray(c)[..., None] for c in components)
    return c_r * e_r + c_t * e_t + c_p * e_p


def sphere_flux(radial: Callable, radius: float = 1.0, n_theta: int = 24, n_phi: int = 32) -> float:
    """∮ F·dS over a sphere from the radial component ``radial(r, θ, φ)``.

    Gauss-Legendre in cos θ (no nodes on the poles), trapezoid in φ.
    """
    u, w = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(u)
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    T, P = np.meshgrid(theta, phi, indexing="ij")
    vals = np.asarray(radial(np.full(T.shape, radius), T, P))
    weights = (w[:, None] * np.full(T.shape, 2 * math.pi / n_phi)) * radius**2
    return math.fsum((weights * vals).ravel())


# Monte-Carlo norms


def _radial_samples(rng: np.random.Generator, cfg: QuadratureConfig):
    """Truncated exponential radii on [r_min, r_max] and their density."""
    lam = cfg.radial_rate
    lo, hi = math.exp(-lam * cfg.r_min), math.exp(-lam * cfg.r_max)
    u = rng.uniform(size=cfg.n_samples)
    r = -np.log(lo - u * (lo - hi)) / lam
    pdf = lam * np.exp(-lam * r) / (lo - hi)
    return r, pdf


def _unit_sphere(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    v = rng.normal(size=(n, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _mean_stderr(samples: np.ndarray, cfg: QuadratureConfig) -> tuple[float, float]:
    if not np.all(np.isfinite(samples)):
        raise DivergentIntegralError("non-finite integrand sample")
    n = samples.size
    mean = math.fsum(samples) / n
    var = math.fsum((samples - mean) ** 2) / max(n - 1, 1)
    stderr = math.sqrt(var / n)
    if mean != 0.0 and stderr > cfg.max_rel_stderr * abs(mean):
        raise DivergentIntegralError(f"runaway variance: stderr {stderr:.3g} vs estimate {mean:.3g}")
    return mean, stderr


# Lebesgue d⁴z weight making ∫ w(r) F(x(z)) d⁴z = ∫ F(x) d³x; equals 2r/π against dz dz̄ = 2 d⁴z
C2_LEBESGUE_WEIGHT = 4.0 / math.pi


def mc_norm_c2(f: Callable, cfg: QuadratureConfig | None = None, envelope: Callable | None = None):
    """Estimate ∫ (2r/π) |f|² dz dz̄ over C², returning ``(estimate, stderr)``.

    ``f(z1, z2)`` is evaluated on arrays (a :class:`~hopfmono.symalg.SymFunc`
    can be passed through :func:`hopfmono.symalg.evaluate_arrays`).  The
    optional ``envelope(r)`` multiplies ``f`` and supplies the decay the
    state itself may lack.  Radii are importance-sampled from a truncated
    exponential, directions uniformly on S³.
    """
    cfg = cfg or QuadratureConfig()
    rng = np.random.default_rng(cfg.seed)
    r, pdf = _radial_samples(rng, cfg)
    n = _unit_sphere(rng, cfg.n_samples, 4)
    sr = np.sqrt(r)
    z1 = sr * (n[:, 0] + 1j * n[:, 1])
    z2 = sr * (n[:, 2] + 1j * n[:, 3])
    vals = np.asarray(f(z1, z2), dtype=complex)
    if envelope is not None:
        vals = vals * envelope(r)
    # density of z w.r.t. d⁴z is pdf(r) / (π² r)
    samples = C2_LEBESGUE_WEIGHT * r * np.abs(vals) ** 2 * (math.pi**2 * r) / pdf
    return _mean_stderr(samples, cfg)


def mc_norm_r3(g: Callable, cfg: QuadratureConfig | None = None, envelope: Callable | None = None):
    """Estimate ∫ |g|² d³x, returning ``(estimate, stderr)``.  ``g(x)`` takes ``(..., 3)`` arrays."""
    cfg = cfg or QuadratureConfig()
    rng = np.random.default_rng(cfg.seed)
    r, pdf = _radial_samples(rng, cfg)
    x = r[:, None] * _unit_sphere(rng, cfg.n_samples, 3)
    vals = np.asarray(g(x), dtype=complex)
    if envelope is not None:
        vals = vals * envelope(r)
    samples = np.abs(vals) ** 2 * (4 * math.pi * r**2) / pdf
    return _mean_stderr(samples, cfg)


def lift_r3_function(g: Callable) -> Callable:
    """Pull an R³ function back to C² along the Hopf map."""
    return lambda z1, z2: g(hopf_arrays(z1, z2))

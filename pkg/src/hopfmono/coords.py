"""Maps between Euler angles on C², points of C² and points of R³.

The Hopf map sends ``z = (z1, z2)`` to ``x^i = z̄ σ^i z``::

    x1 = 2 Re(z̄1 z2),  x2 = 2 Im(z̄1 z2),  x3 = |z1|² - |z2|²

so that ``|x| = |z1|² + |z2|² = r``.  The Euler parametrisation

    z1 = √r cos(θ/2) exp(i(-φ + γ)/2)
    z2 = √r sin(θ/2) exp(i( φ + γ)/2)

puts ``x`` in ordinary spherical coordinates ``(r, θ, φ)``; the angle ``γ``
runs along the fibre and drops out.

All complex arguments use the principal branch ``arg ∈ (-π, π]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

FOUR_PI = 4.0 * math.pi


class DomainError(ValueError):
    """Raised for points outside C² \\ {0} or non-positive radii."""


def principal_arg(z):
    """Argument in ``(-π, π]``; works on scalars and arrays.

    ``numpy.angle`` returns ``-π`` for negative reals with a signed zero
    imaginary part, which would put ``z`` and ``conj(z)`` on the same side
    of the cut.
    """
    a = np.angle(z)
    if np.ndim(a) == 0:
        return math.pi if a == -math.pi else float(a)
    return np.where(a == -np.pi, np.pi, a)


@dataclass(frozen=True)
class CPoint:
    z1: complex
    z2: complex

    def __post_init__(self):
        object.__setattr__(self, "z1", complex(self.z1))
        object.__setattr__(self, "z2", complex(self.z2))
        if self.r <= 0.0:
            raise DomainError("the origin of C² is excluded")

    @property
    def r(self) -> float:
        return abs(self.z1) ** 2 + abs(self.z2) ** 2

    def as_arrays(self):
        return np.array([self.z1]), np.array([self.z2])


@dataclass(frozen=True)
class EulerCoords:
    """Euler angles ``(r, θ, φ, γ)``; ``φ`` and ``γ`` are stored modulo 4π.

    ``degenerate`` marks a canonical representative returned by
    :func:`c2_to_euler` at ``θ = 0`` or ``θ = π``, where one of ``φ ± γ``
    is undetermined.
    """

    r: float
    theta: float
    phi: float = 0.0
    gamma: float = 0.0
    degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not self.r > 0.0:
            raise DomainError(f"Euler radius must be positive, got {self.r!r}")
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError(f"theta must lie in [0, pi], got {self.theta!r}")
        object.__setattr__(self, "phi", math.fmod(self.phi, FOUR_PI) % FOUR_PI)
        object.__setattr__(self, "gamma", math.fmod(self.gamma, FOUR_PI) % FOUR_PI)


@dataclass(frozen=True)
class R3Point:
    x1: float
    x2: float
    x3: float

    @property
    def norm(self) -> float:
        return math.sqrt(self.x1**2 + self.x2**2 + self.x3**2)

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])

    def spherical(self) -> tuple[float, float, float]:
        """Return ``(r, θ, φ)`` with ``φ`` in ``(-π, π]``."""
        r = self.norm
        if r == 0.0:
            raise DomainError("spherical angles are undefined at the origin")
        theta = math.acos(max(-1.0, min(1.0, self.x3 / r)))
        return r, theta, math.atan2(self.x2, self.x1)


def euler_arrays(r, theta, phi, gamma=0.0):
    """Vectorised Euler map; returns ``(z1, z2)`` arrays.  No reduction of angles."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("Euler radius must be positive")
    sr = np.sqrt(r)
    theta = np.asarray(theta, dtype=float)
    z1 = sr * np.cos(theta / 2) * np.exp(0.5j * (-np.asarray(phi) + gamma))
    z2 = sr * np.sin(theta / 2) * np.exp(0.5j * (np.asarray(phi) + gamma))
    return z1, z2


def euler_to_c2(e: EulerCoords) -> CPoint:
    z1, z2 = euler_arrays(e.r, e.theta, e.phi, e.gamma)
    return CPoint(complex(z1), complex(z2))


def hopf_arrays(z1, z2) -> np.ndarray:
    """Vectorised Hopf map; returns an array of shape ``(..., 3)``."""
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    w = np.conj(z1) * z2
    return np.stack([2 * w.real, 2 * w.imag, np.abs(z1) ** 2 - np.abs(z2) ** 2], axis=-1)


def hopf_map(p: CPoint) -> R3Point:
    x = hopf_arrays(p.z1, p.z2)
    return R3Point(float(x[0]), float(x[1]), float(x[2]))


def c2_to_euler(p: CPoint) -> EulerCoords:
    """Invert the Euler map.

    At ``z2 = 0`` (``θ = 0``) the combination ``φ + γ`` is set to 0, at
    ``z1 = 0`` (``θ = π``) ``φ - γ`` is set to 0, and the result is flagged
    ``degenerate``.
    """
    a1, a2 = abs(p.z1), abs(p.z2)
    theta = 2.0 * math.atan2(a2, a1)
    if a2 == 0.0:
        arg1 = principal_arg(p.z1)
        return EulerCoords(p.r, theta, -arg1, arg1, degenerate=True)
    if a1 == 0.0:
        arg2 = principal_arg(p.z2)
        return EulerCoords(p.r, theta, arg2, arg2, degenerate=True)
    arg1, arg2 = principal_arg(p.z1), principal_arg(p.z2)
    return EulerCoords(p.r, theta, arg2 - arg1, arg1 + arg2)


def r3_to_c2_arrays(x):
    """A preimage of ``x`` under the Hopf map (the ``γ = 0`` section)."""
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x, axis=-1)
    theta = np.arccos(np.clip(x[..., 2] / r, -1.0, 1.0))
    phi = np.arctan2(x[..., 1], x[..., 0])
    return euler_arrays(r, theta, phi, 0.0)


def r3_to_c2(x: R3Point) -> CPoint:
    z1, z2 = r3_to_c2_arrays(x.as_array())
    return CPoint(complex(z1), complex(z2))

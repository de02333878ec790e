"""Operators on functions of C² \\ {0}.

Axes are numbered 1, 2, 3.  With ``ħ = m = 1``:

* ``laplace``          Δ = (1/r) Σ_α ∂_{z_α} ∂_{z*_α}
* ``position``         multiplication by x_i = z̄ σ^i z
* ``velocity``         V_i = -(i/2r) σ^i_{αβ} (z*_α ∂_{z*_β} + z_β ∂_{z_α})
* ``angular_momentum`` L_i = (i/2) {x_i, ·}
* ``v4``               V_4 = (1/r) ∂_γ = -(i/2r)(z*_α ∂_{z*_α} - z_α ∂_{z_α})

On restricted states Φ(x) these reduce to the Cartesian ∂_i∂_i, x_i,
-i∂_i and -i ε_ijk x_j ∂_k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .symalg import ONE, R, ZERO, Z1, Z1C, Z2, Z2C, SymFunc, mul, partial, poisson, reciprocal, scale

# PAULI[i][a][b] = σ^{i+1}_{ab}
PAULI = (
    ((0, 1), (1, 0)),
    ((0, -1j), (1j, 0)),
    ((1, 0), (0, -1)),
)

_Z = (Z1, Z2)
_ZC = (Z1C, Z2C)
_DZ = ("z1", "z2")
_DZC = ("z1*", "z2*")
_INV_R = reciprocal(R)


def levi_civita(i: int, j: int, k: int) -> int:
    """ε_ijk for 1-based indices."""
    return (i - j) * (j - k) * (k - i) // 2


def check_pauli_algebra() -> None:
    """Assert σ^i σ^j = δ_ij I + i ε_ijk σ^k."""
    s = np.array(PAULI, dtype=complex)
    eye = np.eye(2)
    for i, j in itertools.product(range(3), repeat=2):
        rhs = (i == j) * eye + sum(1j * levi_civita(i + 1, j + 1, k + 1) * s[k] for k in range(3))
        if not np.array_equal(s[i] @ s[j], rhs):
            raise AssertionError(f"Pauli algebra fails for i={i + 1}, j={j + 1}")


check_pauli_algebra()


def _axis(i: int) -> int:
    if i not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {i!r}")
    return i - 1


def hopf_symbol(i: int) -> SymFunc:
    """x_i = Σ_{αβ} z*_α σ^i_{αβ} z_β as a SymFunc."""
    sigma = PAULI[_axis(i)]
    out = ZERO
    for a, b in itertools.product(range(2), repeat=2):
        if sigma[a][b]:
            out = out + scale(sigma[a][b], mul(_ZC[a], _Z[b]))
    return out


X1, X2, X3 = (hopf_symbol(i) for i in (1, 2, 3))
X = (X1, X2, X3)


def laplace(f: SymFunc) -> SymFunc:
    out = ZERO
    for dz, dzc in zip(_DZ, _DZC):
        out = out + partial(partial(f, dzc), dz)
    return mul(_INV_R, out)


def laplace_nested(f: SymFunc) -> SymFunc:
    """The bracket form (1/r) {z*_α, {z_α, f}}; equal to :func:`laplace`."""
    out = ZERO
    for z, zc in zip(_Z, _ZC):
        out = out + poisson(zc, poisson(z, f))
    return mul(_INV_R, out)


def position(i: int, f: SymFunc) -> SymFunc:
    return mul(X[_axis(i)], f)


def velocity(i: int, f: SymFunc) -> SymFunc:
    sigma = PAULI[_axis(i)]
    out = ZERO
    for a, b in itertools.product(range(2), repeat=2):
        c = sigma[a][b]
        if not c:
            continue
        out = out + scale(c, mul(_ZC[a], partial(f, _DZC[b])) + mul(_Z[b], partial(f, _DZ[a])))
    return scale(-0.5j, mul(_INV_R, out))


def angular_momentum(i: int, f: SymFunc) -> SymFunc:
    return scale(0.5j, poisson(X[_axis(i)], f))


def v4(f: SymFunc) -> SymFunc:
    """Fibre velocity (1/r) ∂_γ; ``r · v4`` has eigenvalue ``iκ/2`` on ξ_κ."""
    out = ZERO
    for a in range(2):
        out = out + mul(_ZC[a], partial(f, _DZC[a])) - mul(_Z[a], partial(f, _DZ[a]))
    return scale(-0.5j, mul(_INV_R, out))


def cross_xv(i: int, f: SymFunc) -> SymFunc:
    """ε_ijk x_j V_k f, the orbital form of angular momentum."""
    out = ZERO
    for j, k in itertools.permutations((1, 2, 3), 2):
        e = levi_civita(i, j, k)
        if e:
            out = out + scale(e, position(j, velocity(k, f)))
    return out


@dataclass(frozen=True)
class LinOp:
    """A named linear map SymFunc -> SymFunc."""

    name: str
    fn: Callable[[SymFunc], SymFunc] = field(compare=False, repr=False)

    def __call__(self, f: SymFunc) -> SymFunc:
        return self.fn(f)

    def __matmul__(self, other: "LinOp") -> "LinOp":
        return LinOp(f"{self.name}∘{other.name}", lambda f: self(other(f)))


def commutator(a: LinOp, b: LinOp, f: SymFunc) -> SymFunc:
    return a(b(f)) - b(a(f))


def commutator_op(a: LinOp, b: LinOp) -> LinOp:
    return LinOp(f"[{a.name},{b.name}]", lambda f: commutator(a, b, f))


LAPLACE = LinOp("Δ", laplace)
V4 = LinOp("V4", v4)


def X_(i: int) -> LinOp:
    _axis(i)
    return LinOp(f"x{i}", lambda f: position(i, f))


def V(i: int) -> LinOp:
    _axis(i)
    return LinOp(f"V{i}", lambda f: velocity(i, f))


def L(i: int) -> LinOp:
    _axis(i)
    return LinOp(f"L{i}", lambda f: angular_momentum(i, f))


def half_commutator_velocity(i: int, f: SymFunc) -> SymFunc:
    """-(i/2) [Δ, x_i] f; coincides with :func:`velocity` on every SymFunc."""
    return scale(-0.5j, commutator(LAPLACE, X_(i), f))


class XPoly:
    """A restricted function Σ c · x1^a x2^b x3^c r^d with integer exponents.

    Holds both the lifted SymFunc and a direct R³ evaluator, so it can feed
    symbolic and Cartesian finite-difference checks alike.
    """

    def __init__(self, terms: dict[tuple[int, int, int, int], complex]):
        self.terms = {tuple(int(e) for e in k): complex(v) for k, v in terms.items() if v != 0}
        for (a, b, c, _d) in self.terms:
            if min(a, b, c) < 0:
                raise ValueError("powers of x1, x2, x3 must be non-negative")

    def __repr__(self):
        return f"XPoly({self.terms!r})"

    def to_symfunc(self) -> SymFunc:
        out = ZERO
        for (a, b, c, d), coeff in self.terms.items():
            out = out + scale(coeff, X1**a * X2**b * X3**c * R**d)
        return out

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x, axis=-1)
        out = np.zeros(x.shape[:-1], dtype=complex)
        for (a, b, c, d), coeff in self.terms.items():
            out = out + coeff * x[..., 0] ** a * x[..., 1] ** b * x[..., 2] ** c * r**float(d)
        return out


def random_xpoly(rng: np.random.Generator, max_degree: int = 3, max_inv_r: int = 2, n_terms: int = 3) -> XPoly:
    """Random polynomial in x of degree ≤ ``max_degree``, optionally times r^-k."""
    terms = {}
    for _ in range(n_terms):
        deg = rng.integers(0, max_degree + 1)
        split = np.sort(rng.integers(0, deg + 1, size=2))
        a, b, c = split[0], split[1] - split[0], deg - split[1]
        d = -int(rng.integers(0, max_inv_r + 1))
        coeff = complex(rng.normal(), rng.normal())
        key = (int(a), int(b), int(c), d)
        terms[key] = terms.get(key, 0) + coeff
    return XPoly(terms)


__all__ = [
    "PAULI", "X", "X1", "X2", "X3", "ONE", "LinOp", "LAPLACE", "V4", "XPoly",
    "angular_momentum", "check_pauli_algebra", "commutator", "commutator_op", "cross_xv",
    "half_commutator_velocity", "hopf_symbol", "laplace", "laplace_nested", "levi_civita",
    "position", "random_xpoly", "v4", "velocity", "L", "V", "X_",
]

"""Exact symbolic algebra over sums of monomials

    c · r^s · z1^p1 · z1*^q1 · z2^p2 · z2*^q2

with exponents on the quarter-integer lattice.  ``r`` is kept as an
independent symbol obeying ``∂_{z_α} r = z*_α`` and ``∂_{z*_α} r = z_α``;
it is never expanded into ``z̄z``.  Representations are therefore not
unique and equality of two functions is decided numerically by
:func:`approx_equal`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .coords import CPoint, principal_arg

# exponent tuple layout: (s, p1, q1, p2, q2)
VARIABLES = ("z1", "z1*", "z2", "z2*")
_VAR_SLOT = {name: k + 1 for k, name in enumerate(VARIABLES)}
_LATTICE = 4

Exponents = tuple[Fraction, Fraction, Fraction, Fraction, Fraction]


class BranchPointError(ValueError):
    """Evaluation of a negative or fractional power at a zero coordinate."""


class LatticeError(ValueError):
    """An exponent whose denominator does not divide 4."""


def _frac(value) -> Fraction:
    f = Fraction(value).limit_denominator(1_000_000) if isinstance(value, float) else Fraction(value)
    if _LATTICE % f.denominator:
        raise LatticeError(f"exponent {f} is off the quarter-integer lattice")
    return f


def _exponents(values: Iterable) -> Exponents:
    ex = tuple(_frac(v) for v in values)
    if len(ex) != 5:
        raise ValueError("need five exponents (s, p1, q1, p2, q2)")
    return ex  # type: ignore[return-value]


_ZERO: Exponents = (Fraction(0),) * 5  # type: ignore[assignment]


@dataclass(frozen=True)
class SymTerm:
    coeff: complex
    s: Fraction = Fraction(0)
    p1: Fraction = Fraction(0)
    q1: Fraction = Fraction(0)
    p2: Fraction = Fraction(0)
    q2: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))
        for name in ("s", "p1", "q1", "p2", "q2"):
            object.__setattr__(self, name, _frac(getattr(self, name)))

    @property
    def exponents(self) -> Exponents:
        return (self.s, self.p1, self.q1, self.p2, self.q2)

    def as_func(self) -> "SymFunc":
        return SymFunc({self.exponents: self.coeff})


class SymFunc:
    """Immutable normalised sum of :class:`SymTerm`.

    Like terms are merged on construction and exact zeros are dropped.
    ``==`` compares the normalised term lists exactly; use
    :func:`approx_equal` for mathematical equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponents, complex] | Iterable[SymTerm] = ()):
        acc: dict[Exponents, complex] = {}
        items = terms.items() if isinstance(terms, Mapping) else ((t.exponents, t.coeff) for t in terms)
        for ex, c in items:
            ex = _exponents(ex)
            acc[ex] = acc.get(ex, 0j) + complex(c)
        self._terms = {ex: c for ex, c in sorted(acc.items()) if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, acc: dict[Exponents, complex]) -> "SymFunc":
        # trusted constructor: exponents already validated
        obj = cls.__new__(cls)
        obj._terms = {ex: c for ex, c in sorted(acc.items()) if c != 0}
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: complex) -> "SymFunc":
        return cls._raw({_ZERO: complex(c)})

    @classmethod
    def monomial(cls, coeff=1.0, s=0, p1=0, q1=0, p2=0, q2=0) -> "SymFunc":
        return cls({(s, p1, q1, p2, q2): coeff})

    @property
    def terms(self) -> tuple[SymTerm, ...]:
        return tuple(SymTerm(c, *ex) for ex, c in self._terms.items())

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = SymFunc.const(other)
        if not isinstance(other, SymFunc):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        if not self._terms:
            return "SymFunc(0)"
        return "SymFunc(" + " + ".join(_term_str(ex, c) for ex, c in self._terms.items()) + ")"

    # ring operations

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return scale(-1, self)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return add(self, scale(-1, other))

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return add(other, scale(-1, self))

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, Fraction)):
            return scale(other, self)
        if not isinstance(other, SymFunc):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, Fraction)):
            return scale(1 / complex(other), self)
        if not isinstance(other, SymFunc):
            return NotImplemented
        return mul(self, reciprocal(other))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            if len(self._terms) == 1:
                return power(self, n)
            raise TypeError("only single-term functions have fractional powers")
        if n < 0:
            return reciprocal(self) ** (-n)
        out = ONE
        for _ in range(n):
            out = mul(out, self)
        return out

    def __call__(self, p: CPoint) -> complex:
        return evaluate(self, p)

    def conjugate(self) -> "SymFunc":
        """Complex conjugate: swap z ↔ z* exponents and conjugate coefficients."""
        return SymFunc._raw({(s, q1, p1, q2, p2): c.conjugate() for (s, p1, q1, p2, q2), c in self._terms.items()})


def _coerce(x) -> SymFunc | None:
    if isinstance(x, SymFunc):
        return x
    if isinstance(x, (int, float, complex, Fraction)):
        return SymFunc.const(complex(x))
    return None


def _term_str(ex: Exponents, c: complex) -> str:
    parts = [f"({c.real:.6g}{c.imag:+.6g}j)"]
    for name, e in zip(("r",) + VARIABLES, ex):
        if e:
            parts.append(name if e == 1 else f"{name}^{e}")
    return "·".join(parts)


def add(f: SymFunc, g: SymFunc) -> SymFunc:
    acc = dict(f._terms)
    for ex, c in g._terms.items():
        acc[ex] = acc.get(ex, 0j) + c
    return SymFunc._raw(acc)


def scale(c, f: SymFunc) -> SymFunc:
    c = complex(c)
    return SymFunc._raw({ex: c * v for ex, v in f._terms.items()})


def mul(f: SymFunc, g: SymFunc) -> SymFunc:
    acc: dict[Exponents, complex] = {}
    for ea, ca in f._terms.items():
        for eb, cb in g._terms.items():
            ex = tuple(a + b for a, b in zip(ea, eb))
            acc[ex] = acc.get(ex, 0j) + ca * cb
    return SymFunc._raw(acc)  # type: ignore[arg-type]


def power(f: SymFunc, k) -> SymFunc:
    """``f**k`` for a single-term ``f`` with unit coefficient (or integer ``k``)."""
    if len(f) != 1:
        raise ValueError("power() needs a single-term function")
    ((ex, c),) = f._terms.items()
    k = Fraction(k)
    if k.denominator != 1 and c != 1:
        raise ValueError("fractional power of a non-unit coefficient is ambiguous")
    return SymFunc({tuple(e * k for e in ex): c ** int(k) if k.denominator == 1 else 1.0})


def reciprocal(f: SymFunc) -> SymFunc:
    """``1/f`` for a single-term ``f``."""
    if len(f) != 1:
        raise ValueError("only single-term functions have a reciprocal in this class")
    ((ex, c),) = f._terms.items()
    return SymFunc._raw({tuple(-e for e in ex): 1 / c})  # type: ignore[dict-item]


def partial(f: SymFunc, which: str) -> SymFunc:
    """Wirtinger derivative with respect to one of ``z1, z1*, z2, z2*``.

    The ``r`` factor contributes ``s r^{s-1}`` times the conjugate partner
    of ``which``.
    """
    try:
        slot = _VAR_SLOT[which]
    except KeyError:
        raise ValueError(f"unknown variable {which!r}; expected one of {VARIABLES}") from None
    partner = slot + 1 if slot % 2 == 1 else slot - 1
    acc: dict[Exponents, complex] = {}
    for ex, c in f._terms.items():
        s = ex[0]
        if s:
            new = list(ex)
            new[0] -= 1
            new[partner] += 1
            key = tuple(new)
            acc[key] = acc.get(key, 0j) + c * s
        p = ex[slot]
        if p:
            new = list(ex)
            new[slot] -= 1
            key = tuple(new)
            acc[key] = acc.get(key, 0j) + c * p
    return SymFunc._raw(acc)  # type: ignore[arg-type]


def poisson(f: SymFunc, g: SymFunc) -> SymFunc:
    """``{f, g} = -i Σ_α (∂_{z_α} f ∂_{z*_α} g - ∂_{z*_α} f ∂_{z_α} g)``."""
    out = ZERO
    for z, zc in (("z1", "z1*"), ("z2", "z2*")):
        out = out + mul(partial(f, z), partial(g, zc)) - mul(partial(f, zc), partial(g, z))
    return scale(-1j, out)


def _power(absval, argval, e: Fraction, name: str):
    if e == 0:
        return 1.0
    if e.denominator == 1 and e > 0:
        return None  # caller uses plain integer power
    if np.any(absval == 0.0):
        raise BranchPointError(f"{name}^{e} evaluated at {name} = 0")
    return absval ** float(e) * np.exp(1j * float(e) * argval)


def evaluate_arrays(f: SymFunc, z1, z2) -> np.ndarray:
    """Evaluate at arrays of points using principal branches for every factor."""
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    z1c, z2c = np.conj(z1), np.conj(z2)
    values = (z1, z1c, z2, z2c)
    absv = [np.abs(v) for v in values]
    argv = [principal_arg(v) for v in values]
    r = absv[0] ** 2 + absv[2] ** 2
    out = np.zeros(np.broadcast(z1, z2).shape, dtype=complex)
    for ex, c in f._terms.items():
        term = np.full(out.shape, c, dtype=complex)
        s = ex[0]
        if s:
            if np.any(r == 0.0):
                raise BranchPointError("power of r evaluated at the origin")
            term = term * r ** float(s)
        for k, (e, name) in enumerate(zip(ex[1:], VARIABLES)):
            factor = _power(absv[k], argv[k], e, name)
            if factor is None:
                factor = values[k] ** int(e)
            term = term * factor
        out += term
    return out


def evaluate(f: SymFunc, p: CPoint) -> complex:
    return complex(evaluate_arrays(f, p.z1, p.z2))


class Sampler:
    """Deterministic random points with ``|z1|, |z2|`` in ``[lo, hi]``.

    Real and imaginary parts are drawn uniformly from ``[-hi, hi]`` and
    filtered by modulus.
    """

    def __init__(self, n: int = 64, seed: int = 42, lo: float = 0.2, hi: float = 2.0):
        self.n, self.seed, self.lo, self.hi = n, seed, lo, hi
        self._cache = None

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        if self._cache is None:
            rng = np.random.default_rng(self.seed)
            cols = []
            for _ in range(2):
                got = np.empty(0, dtype=complex)
                while got.size < self.n:
                    w = rng.uniform(-self.hi, self.hi, (2, 4 * self.n))
                    z = w[0] + 1j * w[1]
                    z = z[(np.abs(z) >= self.lo) & (np.abs(z) <= self.hi)]
                    got = np.concatenate([got, z])
                cols.append(got[: self.n])
            self._cache = (cols[0], cols[1])
        return self._cache


DEFAULT_SAMPLER = Sampler()


def max_deviation(f: SymFunc, g: SymFunc, sampler: Sampler | None = None) -> float:
    """``max |f - g| / (1 + |f|)`` over the sample points."""
    z1, z2 = (sampler or DEFAULT_SAMPLER).points()
    a = evaluate_arrays(f, z1, z2)
    b = evaluate_arrays(g, z1, z2)
    return float(np.max(np.abs(a - b) / (1.0 + np.abs(a))))


def approx_equal(f: SymFunc, g: SymFunc, sampler: Sampler | None = None, tol: float = 1e-9) -> bool:
    return max_deviation(f, g, sampler) <= tol


# serialisation


def to_json_obj(f: SymFunc) -> dict:
    return {
        "terms": [
            {
                "re": c.real,
                "im": c.imag,
                "exponents": [[e.numerator, e.denominator] for e in ex],
            }
            for ex, c in f._terms.items()
        ]
    }


def from_json_obj(obj: dict) -> SymFunc:
    acc = {}
    for t in obj["terms"]:
        ex = tuple(Fraction(n, d) for n, d in t["exponents"])
        acc[ex] = acc.get(ex, 0j) + complex(t["re"], t["im"])
    return SymFunc(acc)


def dumps(f: SymFunc) -> str:
    return json.dumps(to_json_obj(f), sort_keys=True)


def loads(text: str) -> SymFunc:
    return from_json_obj(json.loads(text))


ZERO = SymFunc()
ONE = SymFunc.const(1.0)
Z1 = SymFunc.monomial(p1=1)
Z1C = SymFunc.monomial(q1=1)
Z2 = SymFunc.monomial(p2=1)
Z2C = SymFunc.monomial(q2=1)
R = SymFunc.monomial(s=1)

SYMBOLS = {"z1": Z1, "z1*": Z1C, "z2": Z2, "z2*": Z2C, "r": R}

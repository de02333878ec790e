"""The identity suite behind ``hopfmono verify``.

Each check produces one :class:`Record`; the report passes iff every
record passes.  Records are sorted by (name, κ, δ) so the JSON output is
byte-identical for identical inputs.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import monopole as mp
from . import numerics
from .coords import euler_arrays, hopf_arrays, r3_to_c2_arrays
from .operators import (
    L,
    X3,
    angular_momentum,
    commutator,
    cross_xv,
    half_commutator_velocity,
    laplace,
    random_xpoly,
    velocity,
)
from .symalg import ONE, R, Sampler, SymFunc, evaluate_arrays, max_deviation, scale

LAPLACIAN_STEP = 1e-3
N_RANDOM_PHI = 20


@dataclass(frozen=True)
class Tolerances:
    symbolic: float = 1e-9
    fd: float = 1e-5
    curl: float = 1e-4
    flux: float = 1e-3
    mc_sigmas: float = 3.0


@dataclass(frozen=True)
class Record:
    name: str
    eq: str
    kappa: int
    delta: int
    max_dev: float
    tol: float
    passed: bool

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


@dataclass
class VerifyReport:
    seed: int
    records: list[Record] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def verdict(self) -> str:
        return "pass" if all(r.passed for r in self.records) else "fail"

    def sorted_records(self) -> list[Record]:
        return sorted(self.records, key=lambda r: (r.name, r.kappa, r.delta))

    def to_json(self) -> str:
        payload = {
            "verdict": self.verdict,
            "seed": self.seed,
            "records": [r.to_json() for r in self.sorted_records()],
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = []
        for r in self.sorted_records():
            mark = "PASS" if r.passed else "FAIL"
            lines.append(f"{mark}  {r.name:<28} k={r.kappa:+d} d={r.delta:+d}  dev={r.max_dev:.3e}  tol={r.tol:.1e}")
        lines.append(f"verdict: {self.verdict}  ({len(self.records)} checks, seed {self.seed}, {self.elapsed:.1f}s)")
        return "\n".join(lines)


def _rec(report, name, eq, kappa, delta, dev, tol):
    dev = float(dev)
    report.records.append(Record(name, eq, int(kappa), int(delta), dev, float(tol), bool(dev <= tol)))


def _mixed_rel(a, b) -> float:
    return float(np.max(np.abs(a - b) / (1.0 + np.abs(b))))


def _random_r3(rng, n):
    r = rng.uniform(0.5, 2.0, n)
    theta = rng.uniform(0.3, math.pi - 0.3, n)
    phi = rng.uniform(-math.pi, math.pi, n)
    return hopf_arrays(*euler_arrays(r, theta, phi, 0.0))


def check_restricted(report: VerifyReport, seed: int, tol: Tolerances, sampler: Sampler, h: float) -> None:
    rng = np.random.default_rng(seed)
    dev_lap = dev_vel = dev_ang = dev_cross = 0.0
    for _ in range(N_RANDOM_PHI):
        poly = random_xpoly(rng)
        phi = poly.to_symfunc()
        x = _random_r3(rng, 8)
        z1, z2 = r3_to_c2_arrays(x)

        sym = evaluate_arrays(laplace(phi), z1, z2)
        dev_lap = max(dev_lap, _mixed_rel(sym, numerics.fd_laplacian(poly, x, LAPLACIAN_STEP)))

        grad = numerics.fd_gradient(poly, x, h)
        for i in (1, 2, 3):
            sym = evaluate_arrays(velocity(i, phi), z1, z2)
            dev_vel = max(dev_vel, _mixed_rel(sym, -1j * grad[:, i - 1]))
            j, k = i % 3, (i + 1) % 3
            orbital = -1j * (x[:, j] * grad[:, k] - x[:, k] * grad[:, j])
            sym = evaluate_arrays(angular_momentum(i, phi), z1, z2)
            dev_ang = max(dev_ang, _mixed_rel(sym, orbital))
            dev_cross = max(dev_cross, max_deviation(angular_momentum(i, phi), cross_xv(i, phi), sampler))

    _rec(report, "restricted_laplace_fd", "Δ Φ(x) = ∂_i∂_i Φ", 0, 0, dev_lap, tol.fd)
    _rec(report, "restricted_velocity_fd", "V_i Φ(x) = -i ∂_i Φ", 0, 0, dev_vel, tol.fd)
    _rec(report, "restricted_angular_fd", "L_i Φ(x) = -i ε_ijk x_j ∂_k Φ", 0, 0, dev_ang, tol.fd)
    _rec(report, "restricted_L_eq_xV", "(i/2){x_i,Φ} = ε_ijk x_j V_k Φ", 0, 0, dev_cross, tol.symbolic)

    phi = random_xpoly(rng).to_symfunc()
    dev = 0.0
    for i, j, k in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        dev = max(dev, max_deviation(commutator(L(i), L(j), phi), scale(1j, angular_momentum(k, phi)), sampler))
    _rec(report, "su2_angular_momentum", "[L_i, L_j] = i ε_ijk L_k", 0, 0, dev, tol.symbolic)


PHI_SET = {"1": ONE, "x3": X3, "r^2": R**2}


def check_state_identities(report, kappa, delta, tol: Tolerances, sampler: Sampler) -> None:
    dev_half = dev_comm = dev_shift = dev_charge = 0.0
    for phi in PHI_SET.values():
        state = mp.make_state(phi, kappa, delta)
        f = state.full
        for i in (1, 2, 3):
            dev_half = max(dev_half, max_deviation(velocity(i, f), half_commutator_velocity(i, f), sampler))
        for i, j in ((1, 2), (2, 3), (3, 1)):
            dev_comm = max(dev_comm, mp.commutator_field_deviation(state, i, j, sampler))
        zero = SymFunc()
        for res in mp.angular_shift_residuals(state):
            dev_shift = max(dev_shift, max_deviation(res, zero, sampler))
        dev_charge = max(dev_charge, max_deviation(R * mp.v4(f), scale(0.5j * kappa, f), sampler))
    _rec(report, "half_commutator", "V_i = -(i/2)[Δ, x_i]", kappa, delta, dev_half, tol.symbolic)
    _rec(report, "velocity_commutator", "[V_i,V_j]Φ_κ = (κ/2) i ε_ijk x_k/r³ Φ_κ", kappa, delta, dev_comm, tol.symbolic)
    _rec(report, "angular_shift", "ε_ijk x_j V_k Φ_κ = (L_i + (κ/2) x_i/r) Φ_κ", kappa, delta, dev_shift, tol.symbolic)
    _rec(report, "charge_v4", "r V_4 Φ_κ = (iκ/2) Φ_κ", kappa, delta, dev_charge, tol.symbolic)


def check_fields(report, kappa, delta, seed, tol: Tolerances, h: float) -> None:
    pot = mp.gauge_potential(kappa, delta)
    r, theta, phi = mp.sample_off_pole(100, seed)
    a_r, a_t, a_p = pot.spherical(r, theta, phi)
    closed = mp.a_phi_closed_form(kappa, delta, r, theta)
    dev = max(_mixed_rel(a_p, closed), float(np.max(np.abs(a_r))), float(np.max(np.abs(a_t))))
    _rec(report, "gauge_potential", "A_φ = (δ + κ cos θ)/(2 r sin θ), A_r = A_θ = 0", kappa, delta, dev, tol.symbolic)

    _rec(report, "curl_field", "rot A = -(κ/2) x/r³", kappa, delta, mp.curl_check(kappa, delta, (r, theta, phi), h), tol.curl)

    b_delta = mp.curl_of_potential(pot, r, theta, phi, h)
    b_zero = mp.curl_of_potential(mp.gauge_potential(kappa, 0), r, theta, phi, h)
    _rec(report, "field_delta_independent", "rot A^(κ,δ) = rot A^(κ,0)", kappa, delta, mp._relative_error(b_delta, b_zero), tol.curl)

    flux = mp.numerical_flux(kappa, delta, 1.0, h)
    want = -2 * math.pi * kappa
    dev = abs(flux - want) / abs(want) if kappa else abs(flux)
    _rec(report, "flux_unit_sphere", "∮ rot A·dS = -2πκ", kappa, delta, dev, tol.flux)

    if kappa or delta:
        found = mp.string_singularities(kappa, delta)
        if kappa != 0 and delta == kappa:
            expected = {"north"}
        elif kappa != 0 and delta == -kappa:
            expected = {"south"}
        else:
            expected = {"north", "south"}
        _rec(report, "dirac_strings", "δ=0: both poles; δ=±κ: one pole", kappa, delta, float(found != expected), 0.5)


def check_norms(report, seed: int, n: int, tol: Tolerances) -> None:
    cfg_a = numerics.QuadratureConfig(n_samples=n, seed=seed)
    cfg_b = numerics.QuadratureConfig(n_samples=n, seed=seed + 1)
    envelope = lambda r: np.exp(-r)  # noqa: E731
    kappa = 2
    for name, phi in PHI_SET.items():
        state = mp.make_state(phi, kappa, 0)
        na, sa = numerics.mc_norm_c2(lambda z1, z2: evaluate_arrays(state.full, z1, z2), cfg_a, envelope)
        nb, sb = numerics.mc_norm_c2(lambda z1, z2: evaluate_arrays(phi, z1, z2), cfg_b, envelope)
        dev = abs(na - nb) / math.hypot(sa, sb)
        _rec(report, f"norm_preserved[{name}]", "‖Φ ξ_κ‖ = ‖Φ‖", kappa, 0, dev, tol.mc_sigmas)

    gauss = lambda x: np.exp(-np.sum(x * x, axis=-1) / 2)  # noqa: E731
    est, err = numerics.mc_norm_c2(numerics.lift_r3_function(gauss), cfg_a)
    _rec(report, "weight_c2_gaussian", "∫(2r/π)|g(x(z))|² dz dz̄ = π^{3/2}", 0, 0, abs(est - math.pi**1.5) / err, tol.mc_sigmas)
    est3, err3 = numerics.mc_norm_r3(gauss, cfg_b)
    _rec(report, "weight_r3_gaussian", "∫|g|² d³x = π^{3/2}", 0, 0, abs(est3 - math.pi**1.5) / err3, tol.mc_sigmas)


def check_imaginary_gauge(report, seed: int, tol: Tolerances, h: float, sampler: Sampler, kappa: int = 2) -> None:
    g = mp.imaginary_gauge(kappa)
    x = mp.sample_r3_off_axis(50, seed)
    dev = float(np.max(np.abs(g.im_potential_at(x) - g.minus_grad_log_xi_prime(x, h))))
    _rec(report, "imaginary_gauge_im", "Im A_i = -∂_i log ξ'", kappa, 0, dev, tol.fd)

    r, theta, phi = mp.sample_off_pole(100, seed)
    b = mp.curl_of_potential(g.potential, r, theta, phi, h, real_part=True)
    want = mp.magnetic_field(kappa, hopf_arrays(*euler_arrays(r, theta, phi, 0.0)))
    _rec(report, "imaginary_gauge_re_field", "rot Re A = -(κ/2) x/r³", kappa, 0, mp._relative_error(b, want), tol.curl)

    dev = max_deviation(g.gauged_factor, mp.xi_factor(kappa, 0), sampler)
    _rec(report, "imaginary_gauge_removal", "e^{-log ξ'} ξ = ξ''(γ)", kappa, 0, dev, tol.symbolic)


def run_verification(
    kappa_max: int = 4,
    deltas: list[int] | None = None,
    seed: int = 42,
    tol: Tolerances | None = None,
    fd_step: float = 1e-5,
    samples: int = 100_000,
) -> VerifyReport:
    if kappa_max < 0:
        raise ValueError("kappa_max must be non-negative")
    tol = tol or Tolerances()
    start = time.perf_counter()
    report = VerifyReport(seed)
    sampler = Sampler(n=64, seed=seed)

    check_restricted(report, seed, tol, sampler, fd_step)
    for kappa in range(kappa_max + 1):
        for delta in (deltas if deltas is not None else range(-kappa, kappa + 1)):
            check_state_identities(report, kappa, delta, tol, sampler)
            check_fields(report, kappa, delta, seed, tol, fd_step)
    check_norms(report, seed, samples, tol)
    if kappa_max >= 2:
        check_imaginary_gauge(report, seed, tol, fd_step, sampler)
    report.elapsed = time.perf_counter() - start
    return report

"""Command line: ``hopfmono verify | field | state``.

Exit codes: 0 pass, 1 identity failure or I/O error, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys

import numpy as np

from . import monopole as mp
from .coords import euler_arrays, hopf_arrays
from .operators import XPoly
from .symalg import evaluate_arrays
from .verify import Tolerances, run_verification


class PhiParseError(ValueError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?j?)|(?P<name>x1|x2|x3|r)|(?P<op>[-+*^]))"
)


def _tokens(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PhiParseError(f"unexpected input at column {pos}: {text[pos:]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


def parse_phi(text: str) -> XPoly:
    """Parse sums of ``c * x1^a x2^b x3^c r^d`` (integer powers, ``d`` may be negative).

    Juxtaposition multiplies, so ``2 x1^2 r^-1`` and ``2*x1^2*r^-1`` agree.
    """
    toks = _tokens(text)
    if not toks:
        raise PhiParseError("empty expression")
    terms: dict[tuple[int, int, int, int], complex] = {}
    i = 0
    while i < len(toks):
        sign = 1
        while i < len(toks) and toks[i] in (("op", "+"), ("op", "-")):
            sign = -sign if toks[i][1] == "-" else sign
            i += 1
        coeff = complex(sign)
        powers = [0, 0, 0, 0]
        seen = False
        while i < len(toks) and not (toks[i][0] == "op" and toks[i][1] in "+-"):
            kind, val = toks[i]
            if kind == "op" and val == "*":
                i += 1
                continue
            if kind == "num":
                coeff *= complex(val)
                i += 1
            elif kind == "name":
                i += 1
                exp = 1
                if i < len(toks) and toks[i] == ("op", "^"):
                    i += 1
                    neg = False
                    if i < len(toks) and toks[i] == ("op", "-"):
                        neg, i = True, i + 1
                    if i >= len(toks) or toks[i][0] != "num" or not toks[i][1].isdigit():
                        raise PhiParseError(f"expected an integer exponent after {val}^")
                    exp = -int(toks[i][1]) if neg else int(toks[i][1])
                    i += 1
                slot = ("x1", "x2", "x3", "r").index(val)
                if exp < 0 and slot < 3:
                    raise PhiParseError(f"negative power of {val}; only r may carry one")
                powers[slot] += exp
            else:
                raise PhiParseError(f"unexpected {val!r}")
            seen = True
        if not seen:
            raise PhiParseError("dangling sign")
        key = tuple(powers)
        terms[key] = terms.get(key, 0) + coeff
    return XPoly(terms)


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopfmono", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the identity suite")
    v.add_argument("--kappa-max", type=int, default=4)
    v.add_argument("--delta", type=_int_list, default=None, help="δ values (default: -κ..κ for each κ)")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--tol", type=_positive_float, default=1e-9, help="tolerance of symbolic identities")
    v.add_argument("--fd-tol", type=_positive_float, default=1e-5)
    v.add_argument("--curl-tol", type=_positive_float, default=1e-4)
    v.add_argument("--flux-tol", type=_positive_float, default=1e-3)
    v.add_argument("--mc-sigmas", type=_positive_float, default=3.0)
    v.add_argument("--fd-step", type=_positive_float, default=1e-5)
    v.add_argument("--samples", type=int, default=100_000, help="Monte-Carlo sample count")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--out", help="also write the JSON report here")

    f = sub.add_parser("field", help="export x, A, B on a spherical shell")
    f.add_argument("--kappa", type=int, required=True)
    f.add_argument("--delta", type=int, default=0)
    f.add_argument("--radius", type=_positive_float, default=1.0)
    f.add_argument("--n-theta", type=int, default=10)
    f.add_argument("--n-phi", type=int, default=10)
    f.add_argument("--format", choices=("csv", "json"), default="csv")
    f.add_argument("--out", help="output file (default stdout)")

    s = sub.add_parser("state", help="evaluate Φ(x)·ξ_κ at points")
    s.add_argument("--phi", required=True, help='e.g. "x3", "2*x1^2 - r^-1"')
    s.add_argument("--kappa", type=int, default=0)
    s.add_argument("--delta", type=int, default=0)
    s.add_argument(
        "--point", action="append", default=None, metavar="R,THETA,PHI[,GAMMA]", help="Euler point; repeatable"
    )
    return p


def field_rows(kappa: int, delta: int, radius: float, n_theta: int, n_phi: int) -> np.ndarray:
    """Rows ``x1 x2 x3 A1 A2 A3 B1 B2 B3`` on a (θ, φ) grid that avoids the poles."""
    theta = (np.arange(n_theta) + 0.5) * math.pi / n_theta
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    T, P = (a.ravel() for a in np.meshgrid(theta, phi, indexing="ij"))
    Rr = np.full(T.shape, radius)
    x = hopf_arrays(*euler_arrays(Rr, T, P, 0.0))
    a = mp.gauge_potential(kappa, delta).cartesian_at(Rr, T, P).real
    b = mp.magnetic_field(kappa, x)
    return np.concatenate([x, a, b], axis=1)


COLUMNS = ("x1", "x2", "x3", "A1", "A2", "A3", "B1", "B2", "B3")


def format_rows(rows: np.ndarray, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(COLUMNS, map(float, row))) for row in rows], indent=1)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow([f"{v:.17g}" for v in row])
    return buf.getvalue()


def _parse_point(text: str):
    vals = [float(v) for v in text.split(",")]
    if len(vals) not in (3, 4):
        raise ValueError(f"point needs 3 or 4 numbers, got {text!r}")
    return vals + [0.0] * (4 - len(vals))


def cmd_verify(args) -> int:
    tol = Tolerances(args.tol, args.fd_tol, args.curl_tol, args.flux_tol, args.mc_sigmas)
    report = run_verification(args.kappa_max, args.delta, args.seed, tol, args.fd_step, args.samples)
    text = report.to_json()
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    print(text if args.format == "json" else report.to_text())
    return 0 if report.verdict == "pass" else 1


def cmd_field(args) -> int:
    rows = field_rows(args.kappa, args.delta, args.radius, args.n_theta, args.n_phi)
    text = format_rows(rows, args.format)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 0


def cmd_state(args) -> int:
    poly = parse_phi(args.phi)
    state = mp.make_state(poly.to_symfunc(), args.kappa, args.delta)
    points = [_parse_point(p) for p in (args.point or ["1,0.7,0.3,0.0"])]
    ok = True
    print("r,theta,phi,gamma,re,im,density,density_k0")
    for r, theta, phi, gamma in points:
        z1, z2 = euler_arrays(r, theta, phi, gamma)
        val = complex(evaluate_arrays(state.full, z1, z2))
        base = complex(evaluate_arrays(state.phi, z1, z2))
        dens, dens0 = abs(val) ** 2, abs(base) ** 2
        ok &= math.isclose(dens, dens0, rel_tol=1e-10, abs_tol=1e-300)
        print(f"{r:.17g},{theta:.17g},{phi:.17g},{gamma:.17g},{val.real:.17g},{val.imag:.17g},{dens:.17g},{dens0:.17g}")
    return 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.kappa_max < 0:
        parser.error("--kappa-max must be non-negative")
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "field":
            return cmd_field(args)
        return cmd_state(args)
    except (PhiParseError, mp.RestrictionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Closed-form roots of polynomials of degree <= 3 with Newton polishing.

Three real roots come from the trigonometric form of the depressed cubic, a single
real root from Cardano's formula; every real root is then refined by Newton's method
on the monic cubic. Complex pairs are read off the quadratic left after deflating the
polished real root.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParameterError, RootPolishError

LEADING_TOL = 1e-13
MERGE_TOL = 1e-10
# a double root is only resolved to ~sqrt(eps); near-coincident roots are merged when
# the discriminant also vanishes to rounding
CLUSTER_TOL = 1e-6
DISC_TOL = 1e-12
POLISH_TOL = 1e-10
POLISH_MAXITER = 50
_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class CubicCoefficients:
    """Coefficients of ``a3 x^3 + a2 x^2 + a1 x + a0``."""

    a0: float
    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        vals = self.as_tuple()
        if not all(math.isfinite(v) for v in vals):
            raise InvalidParameterError(f"cubic coefficients must be finite, got {vals}")
        if not any(vals):
            raise InvalidParameterError("cubic coefficients are all zero")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a0, self.a1, self.a2, self.a3)

    def __call__(self, x):
        return ((self.a3 * x + self.a2) * x + self.a1) * x + self.a0


@dataclass(frozen=True)
class PolyRoots:
    real: tuple[float, ...]          # ascending, near-duplicates merged
    complex: tuple[complex, ...]     # conjugate pairs, positive imaginary part first
    repeated: tuple[float, ...] = ()  # entries of ``real`` that absorbed a merged neighbour

    @property
    def degenerate(self) -> bool:
        return bool(self.repeated)

    def all(self) -> list[complex]:
        return [complex(x) for x in self.real] + list(self.complex)


def _horner(coeffs_desc, x):
    acc = 0.0
    for c in coeffs_desc:
        acc = acc * x + c
    return acc


def _polish(x: float, coeffs_desc: tuple[float, ...]) -> float:
    """Newton on the monic polynomial; raises when the residual cannot be driven down."""
    n = len(coeffs_desc) - 1
    dcoeffs = tuple(c * (n - k) for k, c in enumerate(coeffs_desc[:-1]))
    fx = _horner(coeffs_desc, x)
    for _ in range(POLISH_MAXITER):
        if fx == 0.0:
            break
        dfx = _horner(dcoeffs, x)
        if dfx == 0.0:
            break
        x_new = x - fx / dfx
        f_new = _horner(coeffs_desc, x_new)
        if abs(f_new) >= abs(fx):
            break
        step = abs(x_new - x)
        x, fx = x_new, f_new
        if step <= 4 * _EPS * max(abs(x), 1e-300):
            break
    # rounding floor of the evaluation itself
    floor = 64 * _EPS * sum(abs(c) * abs(x) ** (n - k) for k, c in enumerate(coeffs_desc))
    if abs(fx) > max(POLISH_TOL, floor):
        raise RootPolishError(f"Newton polishing stalled at x={x!r} with residual {fx!r}")
    return x


def _merge(roots: list[float], singular: bool = False) -> tuple[tuple[float, ...], tuple[float, ...]]:
    groups: list[list[float]] = []
    for x in sorted(roots):
        gap = abs(x - groups[-1][-1]) if groups else math.inf
        if gap < MERGE_TOL or (singular and gap < CLUSTER_TOL * max(1.0, abs(x))):
            groups[-1].append(x)
        else:
            groups.append([x])
    real = tuple(sum(g) / len(g) for g in groups)
    return real, tuple(x for x, g in zip(real, groups) if len(g) > 1)


def solve_linear(a0: float, a1: float) -> PolyRoots:
    if abs(a1) < LEADING_TOL:
        return PolyRoots((), ())
    return PolyRoots((-a0 / a1,), ())


def solve_quadratic(a0: float, a1: float, a2: float) -> PolyRoots:
    if abs(a2) < LEADING_TOL:
        return solve_linear(a0, a1)
    disc = a1 * a1 - 4.0 * a2 * a0
    if disc < 0.0:
        re = -a1 / (2.0 * a2)
        im = math.sqrt(-disc) / (2.0 * abs(a2))
        return PolyRoots((), (complex(re, im), complex(re, -im)))
    sq = math.sqrt(disc)
    q = -0.5 * (a1 + math.copysign(sq, a1))
    if q == 0.0:
        return PolyRoots((0.0,), (), (0.0,))
    desc = (1.0, a1 / a2, a0 / a2)
    real, rep = _merge([_polish(x, desc) for x in (q / a2, a0 / q)])
    return PolyRoots(real, (), rep)


def _near_singular(b: float, c: float, d: float) -> bool:
    """Discriminant of ``x^3 + b x^2 + c x + d`` is zero up to rounding."""
    disc = 18 * b * c * d - 4 * b ** 3 * d + b * b * c * c - 4 * c ** 3 - 27 * d * d
    scale = max(abs(b), math.sqrt(abs(c)), abs(d) ** (1.0 / 3.0)) ** 6
    return scale > 0.0 and abs(disc) <= DISC_TOL * scale


def solve_cubic(a0: float, a1: float, a2: float, a3: float) -> PolyRoots:
    """All roots of ``a3 x^3 + a2 x^2 + a1 x + a0``; drops to a quadratic when ``|a3| < 1e-13``."""
    if not any((a0, a1, a2, a3)):
        raise InvalidParameterError("cubic coefficients are all zero")
    if abs(a3) < LEADING_TOL:
        return solve_quadratic(a0, a1, a2)
    b, c, d = a2 / a3, a1 / a3, a0 / a3
    desc = (1.0, b, c, d)
    singular = _near_singular(b, c, d)
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    half_q = q / 2.0
    third_p = p / 3.0
    disc = half_q * half_q + third_p ** 3

    if disc < 0.0:
        # three distinct real roots; p < 0 here
        m = 2.0 * math.sqrt(-third_p)
        arg = max(-1.0, min(1.0, 3.0 * q / (p * m)))
        ang = math.acos(arg) / 3.0
        ts = [m * math.cos(ang - 2.0 * math.pi * k / 3.0) for k in range(3)]
        real, rep = _merge([_polish(t - shift, desc) for t in ts], singular)
        return PolyRoots(real, (), rep)

    sq = math.sqrt(disc)
    big = -math.copysign(1.0, half_q) * (abs(half_q) + sq) ** (1.0 / 3.0)
    small = -third_p / big if big != 0.0 else 0.0
    x1 = _polish(big + small - shift, desc)

    # deflate: x^3 + b x^2 + c x + d = (x - x1)(x^2 + e x + f)
    e = b + x1
    f = c + x1 * e
    rest = solve_quadratic(f, e, 1.0)
    if rest.complex:
        z = rest.complex[0]
        if not (singular and abs(z.imag) < CLUSTER_TOL * max(1.0, abs(z.real))):
            return PolyRoots((x1,), rest.complex)
        # rounding split a real double root into a conjugate pair
        rest = PolyRoots((z.real,), ())
    others = [_polish(x, desc) for x in rest.real]
    if len(others) == 1:
        # deflated quadratic had a double root
        others *= 2
    real, rep = _merge([x1] + others, singular)
    return PolyRoots(real, (), rep)


def eigenvalues_3x3(m) -> list[complex]:
    """Eigenvalues of a 3x3 matrix from its characteristic cubic, solved in closed form."""
    scale = max(abs(m[i][j]) for i in range(3) for j in range(3))
    if scale == 0.0:
        return [0j, 0j, 0j]
    a = [[m[i][j] / scale for j in range(3)] for i in range(3)]
    tr = a[0][0] + a[1][1] + a[2][2]
    minors = (a[0][0] * a[1][1] - a[0][1] * a[1][0]
              + a[0][0] * a[2][2] - a[0][2] * a[2][0]
              + a[1][1] * a[2][2] - a[1][2] * a[2][1])
    det = (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
           - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
           + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
    # lambda^3 - tr lambda^2 + minors lambda - det
    roots = solve_cubic(-det, minors, -tr, 1.0)
    vals = roots.all()
    # merged repeated roots come back once; the trace fixes the missing copies
    missing = 3 - len(vals)
    if missing:
        fill = (tr - sum(vals)) / missing
        vals += [complex(fill.real, 0.0)] * missing
    return [v * scale for v in vals]

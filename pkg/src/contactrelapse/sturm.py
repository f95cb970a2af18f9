"""Real-root counting with Sturm chains built from successive derivatives.

For a polynomial ``p`` of degree ``n`` the chain ``[p, p', ..., p^(n)]`` is a Sturm chain
on ``[a, b]`` whenever, at every root ``x`` of an interior member ``p^(k)`` lying in
``[a, b]``, the neighbours ``p^(k-1)(x)`` and ``p^(k+1)(x)`` have opposite signs. This
always holds when ``p`` has ``n`` distinct real roots. On such an interval the number
of distinct roots of ``p`` in ``[a, b]`` is ``V(a) - V(b)``, where ``V`` counts sign
changes along the chain.

:func:`count_roots` checks that property on the requested interval and, when it
fails, counts with the Euclidean remainder chain instead, which is a Sturm chain for
any squarefree polynomial.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import (EndpointRootError, InvalidParameterError, RepeatedRootError,
                     UnresolvedPoleError)

MAX_DEGREE = 16
SQUAREFREE_TOL = 1e-12
ENDPOINT_TOL = 1e-13
POLE_SPACING = 1e-12


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial with ascending-degree coefficients."""

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Iterable[float]):
        cs = [float(c) for c in coeffs]
        if not all(math.isfinite(c) for c in cs):
            raise InvalidParameterError(f"polynomial coefficients must be finite, got {cs}")
        while len(cs) > 1 and cs[-1] == 0.0:
            cs.pop()
        if not cs:
            cs = [0.0]
        if len(cs) - 1 > MAX_DEGREE:
            raise InvalidParameterError(f"degree {len(cs) - 1} exceeds the supported {MAX_DEGREE}")
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        if len(self.coeffs) == 1 and self.coeffs[0] == 0.0:
            return -1
        return len(self.coeffs) - 1

    @property
    def leading(self) -> float:
        return self.coeffs[-1]

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:] or [0.0])

    def monic(self) -> "Polynomial":
        if self.degree < 0:
            return self
        return Polynomial([c / self.leading for c in self.coeffs])

    def scaled(self, k: float) -> "Polynomial":
        return Polynomial([k * c for c in self.coeffs])

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.degree < 0:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = self.degree - other.degree
        if dq < 0:
            return Polynomial([0.0]), self
        quot = [0.0] * (dq + 1)
        for k in range(dq, -1, -1):
            f = rem[k + other.degree] / other.leading
            quot[k] = f
            for j, c in enumerate(other.coeffs):
                rem[k + j] -= f * c
            rem[k + other.degree] = 0.0
        return Polynomial(quot), Polynomial(rem[:other.degree] or [0.0])

    def truncated(self, tol: float) -> "Polynomial":
        return Polynomial([0.0 if abs(c) <= tol else c for c in self.coeffs])


@dataclass(frozen=True)
class SignSequence:
    signs: tuple[int, ...]
    variations: int

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "SignSequence":
        signs = tuple((v > 0) - (v < 0) for v in values)
        nz = [s for s in signs if s != 0]
        return cls(signs, sum(1 for u, v in zip(nz, nz[1:]) if u * v < 0))


@dataclass(frozen=True)
class SturmChain:
    polys: tuple[Polynomial, ...]

    def variations(self, x: float) -> int:
        return sign_variations(self, x).variations

    def has_sturm_property(self, a: float, b: float) -> bool:
        """Check that every interior member's roots in [a, b] separate opposite-signed neighbours."""
        n = len(self.polys) - 1
        for k in range(1, n):
            for x in real_roots_in(self.polys[k], a, b):
                if not self.polys[k - 1](x) * self.polys[k + 1](x) < 0.0:
                    return False
        return True


def derivative_chain(p: Polynomial) -> SturmChain:
    if p.degree < 1:
        raise InvalidParameterError("derivative chains need degree >= 1")
    polys = [p]
    for _ in range(p.degree):
        polys.append(polys[-1].derivative())
    return SturmChain(tuple(polys))


def remainder_chain(p: Polynomial) -> SturmChain:
    """Classical chain ``p, p', -rem(p, p'), ...`` for squarefree ``p``."""
    polys = [p, p.derivative()]
    while polys[-1].degree > 0:
        _, r = polys[-2].divmod(polys[-1])
        r = r.truncated(SQUAREFREE_TOL * max(1.0, max(abs(c) for c in polys[-2].coeffs)))
        if r.degree < 0:
            break
        polys.append(r.scaled(-1.0))
    return SturmChain(tuple(polys))


def sign_variations(chain: SturmChain, x: float) -> SignSequence:
    return SignSequence.from_values(q(x) for q in chain.polys)


def gcd(p: Polynomial, q: Polynomial, tol: float = SQUAREFREE_TOL) -> Polynomial:
    """Monic gcd with remainders truncated at ``tol`` (relative to the dividend's size)."""
    a, b = p.monic(), q.monic()
    if b.degree < 0:
        return a
    while True:
        _, r = a.divmod(b)
        r = r.truncated(tol * max(1.0, max(abs(c) for c in a.coeffs)))
        if r.degree < 0:
            return b
        a, b = b, r.monic()


def is_squarefree(p: Polynomial) -> bool:
    return gcd(p, p.derivative()).degree < 1


def count_roots(p: Polynomial, a: float, b: float) -> int:
    """Number of distinct real roots of ``p`` in ``[a, b]``."""
    if not a < b:
        raise InvalidParameterError(f"interval endpoints must satisfy a < b, got [{a}, {b}]")
    if p.degree < 1:
        raise InvalidParameterError("count_roots needs a polynomial of degree >= 1")
    if abs(p(a)) < ENDPOINT_TOL or abs(p(b)) < ENDPOINT_TOL:
        raise EndpointRootError(f"p has a root at (or numerically at) an endpoint of [{a}, {b}]")
    if not is_squarefree(p):
        raise RepeatedRootError("polynomial has a repeated root (gcd(p, p') is non-constant)")
    chain = derivative_chain(p)
    if not chain.has_sturm_property(a, b):
        chain = remainder_chain(p)
    return chain.variations(a) - chain.variations(b)


def _bisect(p: Polynomial, lo: float, hi: float, flo: float) -> float:
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = p(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def real_roots_in(p: Polynomial, a: float, b: float, tol: float = 0.0) -> list[float]:
    """Isolate the real roots of ``p`` in ``[a, b]``.

    The roots of ``p'`` (found recursively) split the interval into pieces on which ``p``
    is monotone; each sign change is bisected down to machine resolution. Critical
    points where ``|p| <= tol`` are reported as (even-multiplicity) roots.
    """
    if p.degree < 1:
        return []
    if p.degree == 1:
        x = -p.coeffs[0] / p.coeffs[1]
        return [x] if a <= x <= b else []
    crit = [c for c in real_roots_in(p.derivative(), a, b, tol) if a < c < b]
    knots = [a] + crit + [b]
    roots: list[float] = []
    for lo, hi in zip(knots, knots[1:]):
        flo, fhi = p(lo), p(hi)
        if flo == 0.0:
            roots.append(lo)
            continue
        if lo in crit and abs(flo) <= tol:
            roots.append(lo)
            continue
        if fhi != 0.0 and (flo < 0.0) != (fhi < 0.0):
            roots.append(_bisect(p, lo, hi, flo))
    if p(b) == 0.0:
        roots.append(b)
    out: list[float] = []
    for x in sorted(roots):
        if not out or x != out[-1]:
            out.append(x)
    return out


def cauchy_index(num: Polynomial, den: Polynomial, a: float, b: float) -> float:
    """Cauchy index of ``num/den`` over ``[a, b]``: jumps across poles plus endpoint halves."""
    if not a < b:
        raise InvalidParameterError(f"interval endpoints must satisfy a < b, got [{a}, {b}]")
    if den.degree < 0:
        raise ZeroDivisionError("denominator is the zero polynomial")
    scale = max(abs(c) for c in den.coeffs)
    poles = real_roots_in(den, a, b, tol=ENDPOINT_TOL * scale)
    for x, y in zip(poles, poles[1:]):
        if y - x < POLE_SPACING:
            raise UnresolvedPoleError(f"poles at {x!r} and {y!r} cannot be separated")
    if abs(den(a)) < ENDPOINT_TOL * scale and (not poles or poles[0] - a > POLE_SPACING):
        poles.insert(0, a)
    if abs(den(b)) < ENDPOINT_TOL * scale and (not poles or b - poles[-1] > POLE_SPACING):
        poles.append(b)

    total = 0.0
    for k, x in enumerate(poles):
        left_gap = x - (poles[k - 1] if k else a)
        right_gap = (poles[k + 1] if k + 1 < len(poles) else b) - x
        delta = 1e-7 * max(1.0, abs(x))

        def side(direction: int, gap: float) -> int:
            h = min(delta, 0.5 * gap)
            y = x + direction * h
            v = num(y) * den(y)
            return (v > 0) - (v < 0)

        at_a = x - a <= POLE_SPACING
        at_b = b - x <= POLE_SPACING
        if not at_b:
            total += 0.5 * side(+1, right_gap)
        if not at_a:
            total -= 0.5 * side(-1, left_gap)
    return total


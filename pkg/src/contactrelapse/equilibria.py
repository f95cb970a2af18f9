"""Disease-free and endemic equilibria.

At an endemic equilibrium ``r* = gamma i* / (phi i* + mu)`` and ``s* = 1 - i* - r*``,
and ``i*`` is a root of ``a3 X^3 + a2 X^2 + a1 X + a0`` whose coefficients depend only on
``R0, R_mu, R_phi`` and the contact ratios ``kappa, theta``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (DFE, ContactProfile, DerivedRates, EpiState, ModelParams, derived_rates, rhs)
from .cubic import CubicCoefficients, solve_cubic
from .errors import InvalidParameterError
from .stability import MARGINAL, UNCLASSIFIED, classify_state, dfe_stability

RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class EquilibriumPoint:
    state: EpiState
    i_star: float
    stability: str = UNCLASSIFIED
    degenerate: bool = False


@dataclass(frozen=True)
class EquilibriumSet:
    dfe: EquilibriumPoint
    endemic: tuple[EquilibriumPoint, ...]
    rejected: tuple[float, ...] = ()   # real roots in (0, 1] that gave no admissible state
    degenerate: bool = False           # two roots of the cubic were merged

    @property
    def points(self) -> tuple[EquilibriumPoint, ...]:
        """DFE at index 0, then endemic points by increasing ``i*``."""
        return (self.dfe,) + self.endemic

    @property
    def i_stars(self) -> list[float]:
        return [e.i_star for e in self.endemic]


def coefficients_from_ratios(r0: float, r_mu: float, r_phi: float, kappa: float,
                             theta: float) -> CubicCoefficients:
    if kappa < 0 or theta < 0:
        raise InvalidParameterError("kappa and theta must be non-negative")
    k1 = 1.0 - kappa
    t1 = 1.0 - theta
    a3 = r_phi ** 2 * r0 - r_mu * r_phi ** 2 * k1
    a2 = r_phi * (r0 * (1.0 - r_phi) + r_mu * (r0 + r_phi) - r_mu * (1.0 - r_mu) * t1
                  - r_mu * (1.0 + r_mu) * k1)
    a1 = r_mu * (r0 * (1.0 - r_phi) + r_phi * (1.0 - r0) - (1.0 - r_mu) * t1 + r_mu * r_phi
                 - r_mu * k1)
    a0 = r_mu ** 2 * (1.0 - r0)
    return CubicCoefficients(a0, a1, a2, a3)


def cubic_coefficients(d: DerivedRates, kappa: float, theta: float) -> CubicCoefficients:
    return coefficients_from_ratios(d.r0, d.r_mu, d.r_phi, kappa, theta)


def lift(i_star: float, p: ModelParams) -> tuple[float, float, float]:
    """Full equilibrium ``(s, i, r)`` for a given infected proportion (``s`` may be negative)."""
    r = p.gamma * i_star / (p.phi * i_star + p.mu)
    return 1.0 - i_star - r, i_star, r


def disease_free(p: ModelParams, c: ContactProfile) -> EquilibriumPoint:
    return EquilibriumPoint(DFE, 0.0, dfe_stability(p, c).label)


def endemic_equilibria(p: ModelParams, c: ContactProfile, classify: bool = True) -> EquilibriumSet:
    d = derived_rates(p, c)
    roots = solve_cubic(*cubic_coefficients(d, c.kappa, c.theta).as_tuple())
    endemic, rejected = [], []
    for x in roots.real:
        if x <= 0.0 or x > 1.0:
            # roots in (-1e-10, 0] are the DFE itself, the rest lie off the simplex
            continue
        s, i, r = lift(x, p)
        if s < -1e-12 or not 0.0 <= r <= 1.0:
            rejected.append(x)
            continue
        state = EpiState(max(s, 0.0), i, r, renormalize=True)
        if max(abs(v) for v in rhs(state, p, c)) >= RESIDUAL_TOL:
            rejected.append(x)
            continue
        endemic.append(state)
    points = []
    for state in endemic:
        # a merged (fold) root is structurally marginal
        deg = any(abs(state.i - y) < 1e-12 for y in roots.repeated)
        if deg:
            label = MARGINAL
        else:
            label = classify_state(state, p, c).label if classify else UNCLASSIFIED
        points.append(EquilibriumPoint(state, state.i, label, deg))
    dfe = disease_free(p, c) if classify else EquilibriumPoint(DFE, 0.0)
    return EquilibriumSet(dfe, tuple(points), tuple(rejected), roots.degenerate)


def count_endemic_roots(r0: float, r_mu: float, r_phi: float, kappa: float, theta: float) -> int:
    """Number of distinct real roots of the equilibrium cubic in (0, 1]."""
    cf = coefficients_from_ratios(r0, r_mu, r_phi, kappa, theta)
    return sum(1 for x in solve_cubic(*cf.as_tuple()).real if 0.0 < x <= 1.0)


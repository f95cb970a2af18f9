"""Sufficient conditions for three endemic equilibria near ``R0 = 1``.

At ``R0 = 1`` the conditions ``a2 < 0``, ``a3 > 0`` and ``a2 + a3 > 0`` become three
linear inequalities in ``(kappa, theta)`` whose slopes and intercepts are the constants
``A..K`` below (functions of ``R_mu`` and ``R_phi`` only). Their intersections with
``kappa`` fixed give the thresholds ``theta*_1..3``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import ModelParams
from .cubic import CubicCoefficients
from .equilibria import coefficients_from_ratios, count_endemic_roots
from .errors import InvalidParameterError

SCAN_STEP = 1e-4
WINDOW_RESOLUTION = 1e-6
SCAN_LIMIT = 10.0   # give up scanning past R0 = 1 + SCAN_LIMIT


@dataclass(frozen=True)
class TheoremConstants:
    A: float
    B: float
    C: float
    D: float
    E: float
    F: float
    G: float
    H: float
    I: float
    J: float
    K: float

    def as_dict(self) -> dict[str, float]:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ThetaThresholds:
    theta1_star: float
    theta2_star: float
    theta3_star: float

    @property
    def lower(self) -> float:
        """Bottom of the admissible band ``(max(theta2*, theta3*), theta1*)``."""
        return max(self.theta2_star, self.theta3_star)


@dataclass(frozen=True)
class RegionWindow:
    r0_max: float
    kappa: float
    theta: float

    @property
    def length(self) -> float:
        return self.r0_max - 1.0


def _bound(r_mu: float) -> float:
    return (1.0 + r_mu * r_mu) / (1.0 - r_mu) ** 2


def inequality_holds(p: ModelParams) -> bool:
    """``R_phi > (1 + R_mu^2) / (1 - R_mu)^2``."""
    if not 0.0 < p.r_mu < 1.0:
        raise InvalidParameterError(f"R_mu must lie in (0, 1), got {p.r_mu}")
    return p.r_phi > _bound(p.r_mu)


def theorem_constants(p: ModelParams) -> TheoremConstants:
    m, f = p.r_mu, p.r_phi
    return TheoremConstants(
        A=f * f,
        B=m * f * f,
        C=f * f * m,
        D=f * (1.0 - f) + f * m,
        E=f * m * (1.0 + m),
        F=f * m * (1.0 - m),
        G=f * m * (1.0 + m),
        H=m * (1.0 - f) - m * f,
        I=m * m,
        J=m * (1.0 - m),
        K=m * m,
    )


def theta_stars(p: ModelParams, kappa: float) -> ThetaThresholds:
    k = theorem_constants(p)
    if not (k.F > 0.0 and k.J > 0.0):
        raise InvalidParameterError("theta thresholds need R_phi > 0 and R_mu in (0, 1)")
    t1 = 1.0 - (k.C + k.D) / k.F + (k.E / k.F) * (1.0 - kappa)
    t2 = t1 + (k.B * (1.0 - kappa) - k.A) / k.F
    t3 = 1.0 - (k.G + k.H) / k.J + (k.I / k.J) * (1.0 - kappa)
    return ThetaThresholds(t1, t2, t3)


def sign_conditions(c: CubicCoefficients) -> bool:
    """Coefficient signs that force three roots of the cubic into ``[0, 1]``."""
    return c.a0 < 0.0 and c.a2 < 0.0 and c.a3 > 0.0 and c.a0 + c.a1 > 0.0 and c.a2 + c.a3 > 0.0


def _count(p: ModelParams, r0: float, kappa: float, theta: float) -> int:
    return count_endemic_roots(r0, p.r_mu, p.r_phi, kappa, theta)


def r0_window(p: ModelParams, kappa: float, theta: float) -> RegionWindow:
    """Largest ``R0 >= 1`` up to which the cubic keeps three distinct roots in ``(0, 1]``.

    The three-root set, when present, starts at ``R0 = 1``. It is probed just above 1,
    bracketed by stepping ``1e-4`` upward, and the exit is bisected to ``1e-6``.
    """
    if kappa < 0 or theta < 0:
        raise InvalidParameterError("kappa and theta must be non-negative")
    lo = 1.0 + WINDOW_RESOLUTION
    if _count(p, lo, kappa, theta) != 3:
        return RegionWindow(1.0, kappa, theta)
    hi = lo + SCAN_STEP
    while _count(p, hi, kappa, theta) == 3:
        lo = hi
        hi += SCAN_STEP
        if hi > 1.0 + SCAN_LIMIT:
            return RegionWindow(hi, kappa, theta)
    while hi - lo > WINDOW_RESOLUTION:
        mid = 0.5 * (lo + hi)
        if _count(p, mid, kappa, theta) == 3:
            lo = mid
        else:
            hi = mid
    return RegionWindow(lo, kappa, theta)


def theta_onset(p: ModelParams, kappas: Sequence[float], lo: float = 0.5, hi: float = 5.0,
                step: float = 0.05, tol: float = 1e-4) -> float:
    """Smallest ``theta`` in ``[lo, hi]`` whose three-root window is open for every ``kappa``.

    The windows close again for large ``theta``, so the first open ``theta`` is
    bracketed by a forward scan of width ``step`` before bisecting.
    """
    def all_open(theta: float) -> bool:
        return all(r0_window(p, k, theta).length > 0.0 for k in kappas)

    if all_open(lo):
        return lo
    prev, t = lo, lo + step
    while not all_open(t):
        prev, t = t, t + step
        if t > hi:
            raise InvalidParameterError(f"no theta in [{lo}, {hi}] opens the window for every kappa")
    lo, hi = prev, t
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if all_open(mid):
            hi = mid
        else:
            lo = mid
    return hi


def coefficients_at(p: ModelParams, r0: float, kappa: float, theta: float) -> CubicCoefficients:
    """Cubic for the relapse and turnover ratios of ``p`` but an arbitrary ``R0``."""
    return coefficients_from_ratios(r0, p.r_mu, p.r_phi, kappa, theta)

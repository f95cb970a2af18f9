"""Model parameters, the contact-disaggregated incidence and the rescaled SIR-with-relapse vector field.

The state is the vector of proportions ``(s, i, r)`` on the unit simplex. With constant
contact rates ``c_s, c_i, c_r`` the incidence multiplier is::

    g(s, i, r) = c_s * c_i / (s * c_s + i * c_i + r * c_r)

and the dynamics are::

    ds/dt = -g * beta * s * i + mu - mu * s
    di/dt =  g * beta * s * i + phi * r * i - (gamma + mu) * i
    dr/dt =  gamma * i - phi * r * i - mu * r
"""
from __future__ import annotations

import math
from dataclasses import InitVar, dataclass
from typing import Any, Mapping

from .errors import InvalidParameterError, SingularDenominatorError

SIMPLEX_TOL = 1e-9
SINGULAR_TOL = 1e-14


@dataclass(frozen=True)
class ModelParams:
    """Disease rates, all per unit time except the dimensionless ``beta``."""

    beta: float   # infection probability per contact, in (0, 1]
    gamma: float  # recovery rate
    phi: float    # relapse rate
    mu: float     # demographic turnover rate

    def __post_init__(self):
        for name in ("beta", "gamma", "phi", "mu"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise InvalidParameterError(f"{name} must be a finite number, got {v!r}")
        if not 0.0 < self.beta <= 1.0:
            raise InvalidParameterError(f"beta must lie in (0, 1], got {self.beta}")
        if self.gamma <= 0.0:
            raise InvalidParameterError(f"gamma must be positive, got {self.gamma}")
        if self.mu <= 0.0:
            raise InvalidParameterError(f"mu must be positive, got {self.mu}")
        if self.phi < 0.0:
            raise InvalidParameterError(f"phi must be non-negative, got {self.phi}")

    @property
    def r_mu(self) -> float:
        return self.mu / (self.mu + self.gamma)

    @property
    def r_phi(self) -> float:
        return self.phi / (self.mu + self.gamma)

    def replace(self, **changes) -> "ModelParams":
        return ModelParams(**{**self.__dict__, **changes})


@dataclass(frozen=True)
class ContactProfile:
    """Constant mean contact rates for susceptible, infected and recovered individuals."""

    c_s: float
    c_i: float
    c_r: float

    def __post_init__(self):
        for name in ("c_s", "c_i", "c_r"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise InvalidParameterError(f"{name} must be a finite number, got {v!r}")
        if self.c_s <= 0.0:
            raise InvalidParameterError(f"c_s must be positive, got {self.c_s}")
        if self.c_i < 0.0 or self.c_r < 0.0:
            raise InvalidParameterError("c_i and c_r must be non-negative")

    @classmethod
    def from_ratios(cls, c_i: float, kappa: float, theta: float) -> "ContactProfile":
        """Build ``c_s = c_i / kappa`` and ``c_r = theta * c_s``; requires ``kappa > 0``."""
        if not kappa > 0.0:
            raise InvalidParameterError(f"kappa must be positive to recover c_s, got {kappa}")
        if theta < 0.0:
            raise InvalidParameterError(f"theta must be non-negative, got {theta}")
        c_s = c_i / kappa
        return cls(c_s=c_s, c_i=c_i, c_r=theta * c_s)

    @property
    def kappa(self) -> float:
        return self.c_i / self.c_s

    @property
    def theta(self) -> float:
        return self.c_r / self.c_s


@dataclass(frozen=True)
class EpiState:
    """Population proportions on the unit simplex.

    Pass ``renormalize=True`` to divide by ``s + i + r`` instead of rejecting
    states whose sum drifted away from one.
    """

    s: float
    i: float
    r: float
    renormalize: InitVar[bool] = False

    def __post_init__(self, renormalize: bool):
        vals = (self.s, self.i, self.r)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidParameterError(f"state components must be finite, got {vals}")
        if min(vals) < -SIMPLEX_TOL:
            raise InvalidParameterError(f"state components must be non-negative, got {vals}")
        total = self.s + self.i + self.r
        if renormalize:
            if total <= 0.0:
                raise InvalidParameterError("cannot renormalize a state with zero mass")
            object.__setattr__(self, "s", max(self.s, 0.0) / total)
            object.__setattr__(self, "i", max(self.i, 0.0) / total)
            object.__setattr__(self, "r", max(self.r, 0.0) / total)
        elif abs(total - 1.0) > SIMPLEX_TOL:
            raise InvalidParameterError(f"state must sum to 1 (got {total!r})")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.s, self.i, self.r)


@dataclass(frozen=True)
class DerivedRates:
    r0: float
    r_mu: float
    r_phi: float
    c0: float


DFE = EpiState(1.0, 0.0, 0.0)


def derived_rates(p: ModelParams, c: ContactProfile) -> DerivedRates:
    """R0 and the dimensionless rate ratios.

    For constant contacts the incidence tends to ``c_i`` at the disease-free state,
    so ``R0 = beta * c_i / (gamma + mu)``.
    """
    c0 = c.c_i
    return DerivedRates(r0=p.beta * c0 / (p.gamma + p.mu), r_mu=p.r_mu, r_phi=p.r_phi, c0=c0)


def _activity(s: float, i: float, r: float, c: ContactProfile) -> float:
    d = s * c.c_s + i * c.c_i + r * c.c_r
    if d <= SINGULAR_TOL:
        raise SingularDenominatorError(
            f"total contact activity {d!r} at state ({s}, {i}, {r}) is not positive")
    return d


def incidence_g(state: EpiState, c: ContactProfile) -> float:
    return c.c_s * c.c_i / _activity(state.s, state.i, state.r, c)


def incidence_partials(state: EpiState, c: ContactProfile) -> tuple[float, float, float, float]:
    """Return ``(g, dg/ds, dg/di, dg/dr)``; each partial is ``-g**2 * c_h / (c_s * c_i)``."""
    d = _activity(state.s, state.i, state.r, c)
    g = c.c_s * c.c_i / d
    # -g^2 c_h / (c_s c_i) == -c_s c_i c_h / d^2, which stays finite when c_i = 0
    k = -c.c_s * c.c_i / (d * d)
    return g, k * c.c_s, k * c.c_i, k * c.c_r


def rhs(state: EpiState, p: ModelParams, c: ContactProfile) -> tuple[float, float, float]:
    s, i, r = state.s, state.i, state.r
    g = c.c_s * c.c_i / _activity(s, i, r, c)
    infection = g * p.beta * s * i
    relapse = p.phi * r * i
    ds = -infection + p.mu - p.mu * s
    di = infection + relapse - (p.gamma + p.mu) * i
    dr = p.gamma * i - relapse - p.mu * r
    return ds, di, dr


def rescale_absolute(S: float, I: float, R: float, N: float) -> EpiState:
    """Convert compartment counts to proportions of a population of size ``N``."""
    if N <= 0:
        raise InvalidParameterError(f"population size must be positive, got {N}")
    if min(S, I, R) < 0:
        raise InvalidParameterError("compartment counts must be non-negative")
    if abs(S + I + R - N) > 1e-9 * N:
        raise InvalidParameterError(f"S + I + R = {S + I + R} does not match N = {N}")
    return EpiState(S / N, I / N, R / N, renormalize=True)


def params_from_mapping(cfg: Mapping[str, Any]) -> tuple[ModelParams, ContactProfile]:
    """Read ``beta, gamma, phi, mu`` plus either explicit contacts or ``c_i, kappa, theta``."""
    try:
        p = ModelParams(beta=float(cfg["beta"]), gamma=float(cfg["gamma"]),
                        phi=float(cfg.get("phi", 0.0)), mu=float(cfg["mu"]))
    except KeyError as exc:
        raise InvalidParameterError(f"missing parameter {exc.args[0]!r}") from None
    explicit = all(k in cfg for k in ("c_s", "c_r"))
    ratios = any(k in cfg for k in ("kappa", "theta"))
    if explicit == ratios:
        raise InvalidParameterError(
            "provide exactly one of explicit contacts {c_s, c_i, c_r} or ratios {c_i, kappa, theta}")
    if "c_i" not in cfg:
        raise InvalidParameterError("missing parameter 'c_i'")
    if explicit:
        c = ContactProfile(c_s=float(cfg["c_s"]), c_i=float(cfg["c_i"]), c_r=float(cfg["c_r"]))
    else:
        try:
            c = ContactProfile.from_ratios(float(cfg["c_i"]), float(cfg["kappa"]), float(cfg["theta"]))
        except KeyError as exc:
            raise InvalidParameterError(f"missing parameter {exc.args[0]!r}") from None
    return p, c

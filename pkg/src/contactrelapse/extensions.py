"""Contact-disaggregated incidence beyond the three-compartment model.

Includes a no-relapse influenza scenario scored by peak prevalence, a general builder
for incidence terms over arbitrary compartments, and a host-vector model whose two
incidence multipliers share one total-activity denominator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .core import ContactProfile, EpiState, ModelParams
from .errors import InvalidParameterError, SingularDenominatorError
from .parallel import pmap
from .simulate import ScenarioSpec, Trajectory, dopri5, integrate
from .sweep import DEFAULT_RESOLUTION, SweepGrid, _axes

# influenza transmission without relapse
FLU_BETA = 0.07943065
FLU_GAMMA = 1.0 / 4.1
FLU_MU = 0.0005
FLU_C_I = 5.0
FLU_I0 = 0.001
FLU_HORIZON = 365.0
FLU_STRIDE = 0.25


def influenza_params() -> ModelParams:
    return ModelParams(beta=FLU_BETA, gamma=FLU_GAMMA, phi=0.0, mu=FLU_MU)


def immunized_r0(r0: float, p: float) -> float:
    """Effective reproduction number when a fraction ``p`` is immune beforehand."""
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"immunized fraction must lie in [0, 1], got {p}")
    return r0 * (1.0 - p)


def influenza_scenario(kappa: float = 1.0, theta: float = 1.0, i0: float = FLU_I0,
                       horizon: float = FLU_HORIZON, stride: float = FLU_STRIDE,
                       c_i: float = FLU_C_I) -> ScenarioSpec:
    """Seeded outbreak ``(1 - i0, i0, 0)`` in a fully susceptible population."""
    return ScenarioSpec(influenza_params(), ContactProfile.from_ratios(c_i, kappa, theta),
                        EpiState(1.0 - i0, i0, 0.0), horizon, stride)


def peak_prevalence(traj: Trajectory) -> tuple[float, float]:
    """``(t_peak, i_peak)`` at the first maximum of ``i(t)``."""
    if len(traj) == 0:
        raise InvalidParameterError("empty trajectory")
    k = int(np.argmax(traj.i))
    return float(traj.times[k]), float(traj.i[k])


def _peak_cell(args) -> float:
    kappa, theta, i0, horizon, stride, c_i = args
    spec = influenza_scenario(kappa, theta, i0, horizon, stride, c_i)
    return peak_prevalence(integrate(spec, stop_on_convergence=False))[1]


def peak_prevalence_surface(kappa_range: tuple[float, float] = (0.5, 1.5),
                            theta_range: tuple[float, float] = (0.5, 2.0),
                            resolution: tuple[int, int] = DEFAULT_RESOLUTION,
                            i0: float = FLU_I0, horizon: float = FLU_HORIZON,
                            stride: float = FLU_STRIDE, c_i: float = FLU_C_I,
                            workers: Optional[int] = 1) -> SweepGrid:
    ks, ts = _axes(kappa_range, theta_range, resolution)
    jobs = [(float(k), float(t), i0, horizon, stride, c_i) for k in ks for t in ts]
    vals = pmap(_peak_cell, jobs, workers)
    return SweepGrid(ks, ts, np.array(vals).reshape(len(ks), len(ts)))


@dataclass(frozen=True)
class GeneralizedCompartments:
    """Compartment sizes with their contact rates and infectivity weights."""

    labels: tuple[str, ...]
    sizes: tuple[float, ...]
    contacts: tuple[float, ...]
    weights: tuple[float, ...] = ()   # empty means weight 1 everywhere

    def __post_init__(self):
        n = len(self.labels)
        w = self.weights or (1.0,) * n
        object.__setattr__(self, "weights", tuple(float(x) for x in w))
        if not (len(self.sizes) == len(self.contacts) == len(self.weights) == n):
            raise InvalidParameterError("labels, sizes, contacts and weights must have equal length")
        if len(set(self.labels)) != n:
            raise InvalidParameterError("compartment labels must be unique")
        if any(x < 0 for x in self.sizes) or any(x < 0 for x in self.contacts):
            raise InvalidParameterError("sizes and contact rates must be non-negative")

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidParameterError(f"unknown compartment {label!r}") from None

    @property
    def activity(self) -> float:
        return sum(c * x for c, x in zip(self.contacts, self.sizes))


def generalized_incidence(g: GeneralizedCompartments, susceptible_label: str,
                          source_labels: Sequence[str], epsilon: float = 1.0) -> float:
    """``epsilon * C^sus * sum_src(w_src C^src X_src) / sum_h(C^h X_h)``.

    ``epsilon`` scales the susceptible side, e.g. a reduced chance of infection for a
    cautious subgroup.
    """
    act = g.activity
    if act <= 0.0:
        raise SingularDenominatorError("total contact activity is zero")
    sus = g.contacts[g.index(susceptible_label)]
    src = 0.0
    for lab in source_labels:
        k = g.index(lab)
        src += g.weights[k] * g.contacts[k] * g.sizes[k]
    return epsilon * sus * src / act


VECTOR_LABELS = ("S_h", "E_h", "I_h", "R_h", "S_v", "E_v", "I_v")
POPULATION, COMPARTMENT = "population", "compartment"


@dataclass(frozen=True)
class VectorBorneParams:
    """Host-vector rates, population sizes and one contact rate per compartment."""

    beta: float       # vector-to-host transmission
    beta_v: float     # host-to-vector transmission
    gamma: float
    mu_h: float
    alpha_h: float
    mu_v: float
    alpha_v: float
    n_h: float
    n_v: float
    contacts: Mapping[str, float] = field(default_factory=lambda: {k: 1.0 for k in VECTOR_LABELS})
    numerator: str = POPULATION
    constant_incidence: bool = False   # force g_h = g_v = 1

    def __post_init__(self):
        for name in ("beta", "beta_v", "gamma", "mu_h", "alpha_h", "mu_v", "alpha_v"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise InvalidParameterError(f"{name} must be a non-negative finite number, got {v}")
        if not (self.n_h > 0 and self.n_v > 0):
            raise InvalidParameterError("population sizes must be positive")
        missing = set(VECTOR_LABELS) - set(self.contacts)
        if missing:
            raise InvalidParameterError(f"missing contact rates for {sorted(missing)}")
        if any(self.contacts[k] < 0 for k in VECTOR_LABELS):
            raise InvalidParameterError("contact rates must be non-negative")
        if self.numerator not in (POPULATION, COMPARTMENT):
            raise InvalidParameterError(f"numerator must be {POPULATION!r} or {COMPARTMENT!r}")


def vector_incidence(state: Sequence[float], vp: VectorBorneParams) -> tuple[float, float]:
    """``(g_h, g_v)``.

    With the ``population`` numerator the source activity is ``C^S C^I N`` (``N`` the
    combined host and vector count), so unit contacts give ``g = 1``; ``compartment``
    uses the infectious class size instead.
    """
    if vp.constant_incidence:
        return 1.0, 1.0
    c = vp.contacts
    act = sum(c[k] * x for k, x in zip(VECTOR_LABELS, state))
    if act <= 0.0:
        raise SingularDenominatorError("total host-vector contact activity is zero")
    i_h, i_v = state[2], state[6]
    if vp.numerator == POPULATION:
        src_h = src_v = vp.n_h + vp.n_v
    else:
        src_h, src_v = i_v, i_h
    return c["S_h"] * c["I_v"] * src_h / act, c["S_v"] * c["I_h"] * src_v / act


def vector_borne_rhs(state: Sequence[float], vp: VectorBorneParams,
                     check_totals: bool = True) -> np.ndarray:
    """Time derivatives of ``(S_h, E_h, I_h, R_h, S_v, E_v, I_v)``."""
    if len(state) != 7:
        raise InvalidParameterError("host-vector state has seven compartments")
    s_h, e_h, i_h, r_h, s_v, e_v, i_v = state
    if check_totals:
        if abs(s_h + e_h + i_h + r_h - vp.n_h) > 1e-9 * max(1.0, vp.n_h):
            raise InvalidParameterError("host compartments do not sum to N_h")
        if abs(s_v + e_v + i_v - vp.n_v) > 1e-9 * max(1.0, vp.n_v):
            raise InvalidParameterError("vector compartments do not sum to N_v")
    g_h, g_v = vector_incidence(state, vp)
    inf_h = vp.beta * g_h * s_h * i_v / vp.n_v
    inf_v = vp.beta_v * g_v * s_v * i_h / vp.n_h
    return np.array([
        vp.mu_h * vp.n_h - inf_h - vp.mu_h * s_h,
        inf_h - (vp.mu_h + vp.alpha_h) * e_h,
        vp.alpha_h * e_h - (vp.mu_h + vp.gamma) * i_h,
        vp.gamma * i_h - vp.mu_h * r_h,
        vp.mu_v * vp.n_v - inf_v - vp.mu_v * s_v,
        inf_v - (vp.mu_v + vp.alpha_v) * e_v,
        vp.alpha_v * e_v - vp.mu_v * i_v,
    ])


@dataclass(frozen=True)
class VectorTrajectory:
    times: np.ndarray
    states: np.ndarray   # shape (n, 7) in VECTOR_LABELS order


def integrate_vector(vp: VectorBorneParams, initial: Sequence[float], horizon: float,
                     stride: float = 1.0) -> VectorTrajectory:
    """Integrate the host-vector model; each population is rescaled to its total after
    every accepted step."""
    if len(initial) != 7:
        raise InvalidParameterError("host-vector state has seven compartments")

    def project(y):
        out = y.copy()
        out[:4] *= vp.n_h / y[:4].sum()
        out[4:] *= vp.n_v / y[4:].sum()
        return out

    def f(_t, y):
        return vector_borne_rhs(y, vp, check_totals=False)

    y0 = project(np.array(initial, dtype=float))
    ts, ys = [], []
    for t, y in dopri5(f, y0, 0.0, horizon, stride, project=project):
        ts.append(t)
        ys.append(y)
    return VectorTrajectory(np.array(ts), np.array(ys))

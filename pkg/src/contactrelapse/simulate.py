"""Trajectories of the rescaled model, convergence detection and basin probing."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .core import ContactProfile, EpiState, ModelParams, SINGULAR_TOL
from .equilibria import EquilibriumSet, endemic_equilibria
from .errors import InvalidParameterError, SingularDenominatorError, StepSizeUnderflowError
from .parallel import pmap

RTOL = 1e-9
ATOL = 1e-12
MIN_STEP = 1e-14
DEFAULT_HORIZON = 1e6
DEFAULT_STRIDE = 100.0
CONVERGENCE_TOL = 1e-12
CONVERGENCE_RUN = 10
MATCH_TOL = 1e-3

# Dormand-Prince 5(4) tableau and Hairer's dense-output coefficients
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)
_D = (-12715105075 / 11282082432, 0.0, 87487479700 / 32700410799, -10690763975 / 1880347072,
      701980252875 / 199316789632, -1453857185 / 822651844, 69997945 / 29380423)
_A_ROWS = tuple(np.array(row) for row in _A)
_E_VEC = np.array(_E)
_D_VEC = np.array(_D)
_PI_BETA = 0.04
_EXPO = 0.2 - 0.75 * _PI_BETA


def _initial_step(f, t0, y0, f0, rtol, atol, order=5):
    scale = atol + np.abs(y0) * rtol
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = y0 + h0 * f0
    d2 = np.sqrt(np.mean(((f(t0 + h0, y1) - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / (order + 1))
    return min(100 * h0, h1)


def dopri5(f: Callable[[float, np.ndarray], np.ndarray], y0: Sequence[float], t0: float,
           t_end: float, stride: float, rtol: float = RTOL, atol: float = ATOL,
           project: Optional[Callable[[np.ndarray], np.ndarray]] = None,
           on_step: Optional[Callable[[np.ndarray, np.ndarray], None]] = None,
           max_step: Optional[float] = None) -> Iterator[tuple[float, np.ndarray]]:
    """Adaptive Dormand-Prince 5(4) integration yielding dense output every ``stride``.

    ``project`` is applied to each accepted state (e.g. renormalization onto the
    simplex); ``on_step(y_raw, y_projected)`` observes accepted steps before projection
    takes effect. Steps never exceed ``max_step`` (the stride by default): near an
    attracting equilibrium an uncapped controller parks the step on the explicit
    method's stability boundary, where errors of size ``rtol`` stop decaying.
    """
    h_max = stride if max_step is None else max_step
    y = np.array(y0, dtype=float)
    t = float(t0)
    k1 = f(t, y)
    h = min(h_max, _initial_step(f, t, y, k1, rtol, atol))
    yield t, y.copy()
    n_out = 1
    t_next = t0 + stride
    ks = np.empty((7, y.size))
    err_old = 1e-4
    while t_next <= t_end + 1e-9 * stride:
        h = min(h, t_end - t)
        if h < MIN_STEP:
            raise StepSizeUnderflowError(f"step size {h!r} underflowed at t={t!r}")
        ks[0] = k1
        for i in range(1, 7):
            yi = y + h * (_A_ROWS[i] @ ks[:i])
            ks[i] = f(t + _C[i] * h, yi)
        y_new = yi  # the last stage is evaluated at the 5th-order solution
        err_vec = h * (_E_VEC @ ks)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = math.sqrt(float(np.mean((err_vec / scale) ** 2)))
        if not math.isfinite(err):
            h *= 0.2
            continue
        if err > 1.0:
            h *= max(0.2, 0.9 * err ** -_EXPO)
            continue

        t_new = t + h
        # dense output on [t, t_new]
        while t_next <= t_new + 1e-12 * max(1.0, abs(t_new)) and t_next <= t_end + 1e-9 * stride:
            theta = min(1.0, (t_next - t) / h)
            ydiff = y_new - y
            bspl = h * ks[0] - ydiff
            r4 = ydiff - h * ks[6] - bspl
            r5 = h * (_D_VEC @ ks)
            th1 = 1.0 - theta
            y_out = y + theta * (ydiff + th1 * (bspl + theta * (r4 + th1 * r5)))
            if project is not None:
                y_out = project(y_out)
            yield t_next, y_out
            n_out += 1
            t_next = t0 + n_out * stride
        if project is not None:
            y_proj = project(y_new)
            if on_step is not None:
                on_step(y_new, y_proj)
            if not np.array_equal(y_proj, y_new):
                y_new = y_proj
                ks[6] = f(t_new, y_new)  # keep FSAL consistent with the projected state
        elif on_step is not None:
            on_step(y_new, y_new)
        t, y, k1 = t_new, y_new, ks[6].copy()
        # PI controller: damps step-size oscillation at the stability boundary
        fac = 0.9 * max(err, 1e-10) ** -_EXPO * err_old ** _PI_BETA
        h = min(h_max, h * min(10.0, max(0.2, fac)))
        err_old = max(err, 1e-4)


@dataclass(frozen=True)
class ScenarioSpec:
    params: ModelParams
    contacts: ContactProfile
    initial: EpiState
    horizon: float = DEFAULT_HORIZON
    stride: float = DEFAULT_STRIDE

    def __post_init__(self):
        if not self.horizon > 0:
            raise InvalidParameterError(f"horizon must be positive, got {self.horizon}")
        if not self.stride > 0:
            raise InvalidParameterError(f"stride must be positive, got {self.stride}")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray   # shape (n, 3): columns s, i, r
    max_drift: float = 0.0     # largest pre-renormalization |s + i + r - 1|
    min_component: float = 0.0  # most negative component over accepted steps

    def __len__(self) -> int:
        return len(self.times)

    def state(self, k: int) -> EpiState:
        s, i, r = self.states[k]
        return EpiState(float(s), float(i), float(r), renormalize=True)

    @property
    def i(self) -> np.ndarray:
        return self.states[:, 1]


@dataclass(frozen=True)
class ConvergenceReport:
    converged: bool
    limit_state: EpiState
    attained_at: Optional[float]
    matched_equilibrium: Optional[int]   # index into EquilibriumSet.points (0 is the DFE)


def _field(p: ModelParams, c: ContactProfile):
    beta, gamma, phi, mu = p.beta, p.gamma, p.phi, p.mu
    cs, ci, cr = c.c_s, c.c_i, c.c_r

    def f(t, y):
        s, i, r = y
        d = s * cs + i * ci + r * cr
        if d <= SINGULAR_TOL:
            raise SingularDenominatorError(f"total contact activity {d!r} vanished at t={t}")
        inf = cs * ci / d * beta * s * i
        rel = phi * r * i
        return np.array([-inf + mu - mu * s, inf + rel - (gamma + mu) * i, gamma * i - rel - mu * r])

    return f


def _to_simplex(y: np.ndarray) -> np.ndarray:
    return y / y.sum()


def _stride_converged(prev: np.ndarray, cur: np.ndarray) -> bool:
    return float(np.max(np.abs(cur - prev))) < CONVERGENCE_TOL


def integrate(spec: ScenarioSpec, rtol: float = RTOL, atol: float = ATOL,
              stop_on_convergence: bool = True) -> Trajectory:
    """Integrate from ``spec.initial`` to ``spec.horizon``, sampling every ``spec.stride``.

    With ``stop_on_convergence`` the run ends once successive samples differ by less
    than 1e-12 (max norm) for 10 consecutive strides.
    """
    f = _field(spec.params, spec.contacts)
    stats = {"drift": 0.0, "min": 0.0}

    def watch(raw, _proj):
        stats["drift"] = max(stats["drift"], abs(float(raw.sum()) - 1.0))
        stats["min"] = min(stats["min"], float(raw.min()))

    times, states = [], []
    run = 0
    for t, y in dopri5(f, spec.initial.as_tuple(), 0.0, spec.horizon, spec.stride, rtol, atol,
                       project=_to_simplex, on_step=watch):
        if states and stop_on_convergence:
            run = run + 1 if _stride_converged(states[-1], y) else 0
        times.append(t)
        states.append(y)
        if run >= CONVERGENCE_RUN:
            break
    return Trajectory(np.array(times), np.array(states), stats["drift"], stats["min"])


def _nearest(state: np.ndarray, eq: EquilibriumSet) -> Optional[int]:
    best, best_d = None, math.inf
    for k, pt in enumerate(eq.points):
        d = float(np.max(np.abs(state - np.array(pt.state.as_tuple()))))
        if d < best_d:
            best, best_d = k, d
    return best if best_d < MATCH_TOL else None


def detect_convergence(traj: Trajectory, eq: EquilibriumSet) -> ConvergenceReport:
    """Report whether (and when) the run settled, and which equilibrium it sits at.

    The match uses the final state whether or not the strict stride criterion was met,
    since approach to a weakly attracting point can be slower than the horizon.
    """
    if len(traj) == 0:
        raise InvalidParameterError("empty trajectory")
    run = 0
    attained = None
    for k in range(1, len(traj)):
        run = run + 1 if _stride_converged(traj.states[k - 1], traj.states[k]) else 0
        if run >= CONVERGENCE_RUN:
            attained = float(traj.times[k])
            break
    last = traj.states[-1]
    return ConvergenceReport(attained is not None, traj.state(len(traj) - 1), attained,
                             _nearest(last, eq))


@dataclass(frozen=True)
class BasinResult:
    rho: float
    i_limit: float
    matched_index: Optional[int]
    converged: bool


def initial_from_rho(rho: float, N: float = 10_000, recovered: float = 10) -> EpiState:
    """Initial proportions ``(1 - rho - R0/N, rho, R0/N)`` with ``R0`` recovered individuals."""
    if not 0.0 <= rho <= 1.0 - recovered / N:
        raise InvalidParameterError(f"rho={rho} leaves no room for {recovered} recovered of {N}")
    return EpiState(1.0 - rho - recovered / N, rho, recovered / N, renormalize=True)


def _probe_one(args) -> BasinResult:
    p, c, rho, N, recovered, horizon, stride, eq = args
    traj = integrate(ScenarioSpec(p, c, initial_from_rho(rho, N, recovered), horizon, stride))
    rep = detect_convergence(traj, eq)
    return BasinResult(rho, rep.limit_state.i, rep.matched_equilibrium, rep.converged)


def basin_probe(p: ModelParams, c: ContactProfile, rho_grid: Sequence[float], N: float = 10_000,
                recovered: float = 10, horizon: float = DEFAULT_HORIZON,
                stride: float = DEFAULT_STRIDE, workers: int = 1) -> list[BasinResult]:
    eq = endemic_equilibria(p, c)
    jobs = [(p, c, float(rho), N, recovered, horizon, stride, eq) for rho in rho_grid]
    return pmap(_probe_one, jobs, workers)

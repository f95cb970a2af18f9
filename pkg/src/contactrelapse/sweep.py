"""Bifurcation diagrams in ``R0`` and maps over the contact ratios ``(kappa, theta)``.

``R0`` is moved by rescaling all contact rates together: ``c_i = R0 (gamma + mu) / beta``
with ``c_s = c_i / kappa`` and ``c_r = theta c_s``, so the ratios stay fixed.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .core import ContactProfile, ModelParams
from .equilibria import count_endemic_roots, endemic_equilibria
from .errors import InvalidParameterError, ModelError
from .parallel import pmap
from .simulate import DEFAULT_HORIZON, DEFAULT_STRIDE, ScenarioSpec, initial_from_rho, integrate
from .stability import STABLE, UNSTABLE
from .theorem import r0_window

R1, R2, R3, R4, UNCLASSIFIED_REGION = "R1", "R2", "R3", "R4", "unclassified"
BOUNDARY_TOL = 1e-9
DEFAULT_STEPS = 300
DEFAULT_RESOLUTION = (50, 50)
HEATMAP_C_I = 3.0


@dataclass(frozen=True)
class BranchPoint:
    r0: float
    i_star: float
    stability: str


@dataclass
class BifurcationBranch:
    points: list[BranchPoint] = field(default_factory=list)

    @property
    def stability(self) -> str:
        return self.points[0].stability if self.points else ""


@dataclass(frozen=True)
class SweepCell:
    """Endemic equilibria found at one ``R0`` grid point (ascending ``i*``)."""

    r0: float
    endemic: tuple[tuple[float, str], ...]
    dfe_stability: str
    degenerate: bool = False


@dataclass(frozen=True)
class BifurcationDiagram:
    kappa: float
    theta: float
    cells: tuple[SweepCell, ...]
    branches: tuple[BifurcationBranch, ...]
    region_boundaries: tuple[float, ...]

    @property
    def r0_values(self) -> np.ndarray:
        return np.array([c.r0 for c in self.cells])


@dataclass(frozen=True)
class SweepGrid:
    kappas: np.ndarray
    thetas: np.ndarray
    payload: np.ndarray            # shape (len(kappas), len(thetas)); NaN marks a failed cell
    missing: tuple[tuple[int, int, str], ...] = ()

    def __post_init__(self):
        if self.payload.shape != (len(self.kappas), len(self.thetas)):
            raise InvalidParameterError("payload shape does not match the grid axes")


def contacts_for_r0(p: ModelParams, r0: float, kappa: float, theta: float) -> ContactProfile:
    c_i = r0 * (p.gamma + p.mu) / p.beta
    return ContactProfile.from_ratios(c_i, kappa, theta)


def _root_count(p: ModelParams, r0: float, kappa: float, theta: float) -> int:
    return count_endemic_roots(r0, p.r_mu, p.r_phi, kappa, theta)


def _refine_boundary(p, kappa, theta, lo, hi, n_lo):
    while hi - lo > BOUNDARY_TOL * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if _root_count(p, mid, kappa, theta) == n_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _cell(args) -> SweepCell:
    p, r0, kappa, theta = args
    eq = endemic_equilibria(p, contacts_for_r0(p, r0, kappa, theta))
    return SweepCell(r0, tuple((e.i_star, e.stability) for e in eq.endemic), eq.dfe.stability,
                     eq.degenerate)


def _track(cells: Sequence[SweepCell]) -> list[BifurcationBranch]:
    """Chain equilibria across neighbouring grid points by stability and proximity."""
    done: list[BifurcationBranch] = []
    live: list[BifurcationBranch] = []
    for cell in cells:
        pts = [BranchPoint(cell.r0, x, lab) for x, lab in cell.endemic]
        pairs = sorted((abs(b.points[-1].i_star - pt.i_star), bi, pi)
                       for bi, b in enumerate(live) for pi, pt in enumerate(pts)
                       if b.stability == pt.stability)
        owner: dict[int, BifurcationBranch] = {}
        used: set[int] = set()
        for _, bi, pi in pairs:
            if bi in used or pi in owner:
                continue
            used.add(bi)
            owner[pi] = live[bi]
        nxt = []
        for pi, pt in enumerate(pts):
            b = owner.get(pi) or BifurcationBranch()
            b.points.append(pt)
            nxt.append(b)
        free = [b for bi, b in enumerate(live) if bi not in used]
        done.extend(free)
        live = nxt
    done.extend(live)
    done.sort(key=lambda b: (b.points[0].r0, b.points[0].i_star))
    return done


def branch_sweep(p: ModelParams, kappa: float, theta: float,
                 r0_range: tuple[float, float] = (0.5, 1.5), steps: int = DEFAULT_STEPS,
                 workers: Optional[int] = 1) -> BifurcationDiagram:
    """Equilibria with stability labels on an ``R0`` grid, plus the ``R0`` values where
    the number of endemic roots changes (located by bisection between grid points)."""
    if steps < 2:
        raise InvalidParameterError("steps must be >= 2")
    lo, hi = r0_range
    if not 0.0 < lo < hi:
        raise InvalidParameterError(f"need 0 < r0_min < r0_max, got {r0_range}")
    if kappa <= 0.0:
        raise InvalidParameterError("kappa must be positive to realise c_s = c_i / kappa")
    grid = np.linspace(lo, hi, steps)
    cells = tuple(pmap(_cell, [(p, float(r), kappa, theta) for r in grid], workers))

    counts = [_root_count(p, float(r), kappa, theta) for r in grid]
    boundaries = []
    for k in range(steps - 1):
        if counts[k] != counts[k + 1]:
            boundaries.append(_refine_boundary(p, kappa, theta, float(grid[k]),
                                               float(grid[k + 1]), counts[k]))
    return BifurcationDiagram(kappa, theta, cells, tuple(_track(cells)), tuple(boundaries))


def region_of(cell: SweepCell) -> str:
    labels = [lab for _, lab in cell.endemic]
    if cell.degenerate:
        return UNCLASSIFIED_REGION
    if not labels:
        return R1
    if labels == [UNSTABLE, STABLE]:
        return R2
    if labels == [STABLE, UNSTABLE, STABLE]:
        return R3
    if labels == [STABLE]:
        return R4
    return UNCLASSIFIED_REGION


def classify_regions(diag: BifurcationDiagram) -> list[str]:
    """Region label per grid point: none, unstable+stable, stable/unstable/stable, single stable."""
    return [region_of(c) for c in diag.cells]


def _heat_cell(args):
    p, kappa, theta, c_i, i0, horizon, stride = args
    try:
        c = ContactProfile.from_ratios(c_i, kappa, theta)
        traj = integrate(ScenarioSpec(p, c, initial_from_rho(i0), horizon, stride))
        return float(traj.states[-1, 1]), None
    except ModelError as exc:
        return math.nan, str(exc)


def _axes(kappa_range, theta_range, resolution):
    nk, nt = resolution
    if nk < 1 or nt < 1:
        raise InvalidParameterError("resolution must be positive")
    return np.linspace(*kappa_range, nk), np.linspace(*theta_range, nt)


def equilibrium_heatmap(p: ModelParams, kappa_range: tuple[float, float] = (0.01, 1.0),
                        theta_range: tuple[float, float] = (0.0, 2.0), i0: float = 0.1,
                        resolution: tuple[int, int] = DEFAULT_RESOLUTION,
                        c_i: float = HEATMAP_C_I, horizon: float = DEFAULT_HORIZON,
                        stride: float = DEFAULT_STRIDE, workers: Optional[int] = 1) -> SweepGrid:
    """Long-run infected proportion per ``(kappa, theta)`` cell, starting from ``i(0) = i0``."""
    ks, ts = _axes(kappa_range, theta_range, resolution)
    jobs = [(p, float(k), float(t), c_i, i0, horizon, stride) for k in ks for t in ts]
    out = pmap(_heat_cell, jobs, workers)
    payload = np.array([v for v, _ in out]).reshape(len(ks), len(ts))
    missing = tuple((n // len(ts), n % len(ts), err) for n, (_, err) in enumerate(out) if err)
    return SweepGrid(ks, ts, payload, missing)


def _window_cell(args) -> float:
    p, kappa, theta = args
    return r0_window(p, kappa, theta).length


def r3_window_surface(p: ModelParams, kappa_range: tuple[float, float] = (0.0, 1.0),
                      theta_range: tuple[float, float] = (0.0, 2.0),
                      resolution: tuple[int, int] = DEFAULT_RESOLUTION,
                      workers: Optional[int] = 1) -> SweepGrid:
    ks, ts = _axes(kappa_range, theta_range, resolution)
    vals = pmap(_window_cell, [(p, float(k), float(t)) for k in ks for t in ts], workers)
    return SweepGrid(ks, ts, np.array(vals).reshape(len(ks), len(ts)))


def _fmt(x) -> str:
    return format(x, ".17g") if isinstance(x, float) else str(x)


def write_branches_csv(diag: BifurcationDiagram, path: Path) -> Path:
    """One row per equilibrium per grid point, DFE rows included (``i_star = 0``)."""
    regions = classify_regions(diag)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["r0", "i_star", "stability", "region"])
        for cell, region in zip(diag.cells, regions):
            w.writerow([_fmt(cell.r0), _fmt(0.0), cell.dfe_stability, region])
            for x, lab in cell.endemic:
                w.writerow([_fmt(cell.r0), _fmt(x), lab, region])
    return Path(path)


def write_grid_csv(grid: SweepGrid, path: Path) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kappa", "theta", "payload"])
        for a, k in enumerate(grid.kappas):
            for b, t in enumerate(grid.thetas):
                w.writerow([_fmt(float(k)), _fmt(float(t)), _fmt(float(grid.payload[a, b]))])
    return Path(path)

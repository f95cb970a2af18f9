"""Linear stability of equilibria and the Dulac test for limit cycles."""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

from .core import DFE, ContactProfile, EpiState, ModelParams, incidence_partials
from .cubic import eigenvalues_3x3
from .errors import InvalidParameterError

if TYPE_CHECKING:
    from .equilibria import EquilibriumPoint

STABILITY_TOL = 1e-10
STABLE, UNSTABLE, MARGINAL, UNCLASSIFIED = "stable", "unstable", "marginal", "unclassified"


@dataclass(frozen=True)
class JacobianMatrix:
    entries: tuple[tuple[float, float, float], ...]
    state: EpiState
    g: float
    g_s: float
    g_i: float
    g_r: float

    def column_sums(self) -> tuple[float, float, float]:
        return tuple(sum(row[j] for row in self.entries) for j in range(3))


@dataclass(frozen=True)
class StabilityClass:
    label: str
    eigenvalues: tuple[complex, complex, complex]

    @property
    def real_parts(self) -> tuple[float, float, float]:
        return tuple(z.real for z in self.eigenvalues)


def jacobian_at(state: EpiState, p: ModelParams, c: ContactProfile) -> JacobianMatrix:
    s, i, r = state.s, state.i, state.r
    g, g_s, g_i, g_r = incidence_partials(state, c)
    b, phi, mu, gamma = p.beta, p.phi, p.mu, p.gamma
    a_ss = b * i * (g_s * s + g)
    a_si = b * s * (g_i * i + g)
    a_sr = b * s * i * g_r
    entries = (
        (-a_ss - mu, -a_si, -a_sr),
        (a_ss, a_si + phi * r - (mu + gamma), a_sr + phi * i),
        (0.0, gamma - phi * r, -phi * i - mu),
    )
    return JacobianMatrix(entries, state, g, g_s, g_i, g_r)


def classify_eigenvalues(eigs, tol: float = STABILITY_TOL) -> str:
    re = [z.real for z in eigs]
    if any(x > tol for x in re):
        return UNSTABLE
    if all(x < -tol for x in re):
        return STABLE
    return MARGINAL


def classify_state(state: EpiState, p: ModelParams, c: ContactProfile) -> StabilityClass:
    eigs = eigenvalues_3x3(jacobian_at(state, p, c).entries)
    eigs = tuple(sorted(eigs, key=lambda z: (z.real, z.imag)))
    return StabilityClass(classify_eigenvalues(eigs), eigs)


def classify_equilibrium(point: Union["EquilibriumPoint", EpiState], p: ModelParams,
                         c: ContactProfile) -> StabilityClass:
    state = point if isinstance(point, EpiState) else point.state
    return classify_state(state, p, c)


def dfe_stability(p: ModelParams, c: ContactProfile) -> StabilityClass:
    return classify_state(DFE, p, c)


def dulac_divergence(i: float, r: float, p: ModelParams, c: ContactProfile) -> float:
    """Divergence of the planar field ``(di/dt, dr/dt)`` weighted by ``1/(i r)``.

    Negative everywhere in the open triangle ``i, r > 0, i + r < 1`` when ``c_i >= c_s``,
    which rules out closed orbits there.
    """
    if not (i > 0.0 and r > 0.0 and i + r < 1.0):
        raise InvalidParameterError(f"(i, r) = ({i}, {r}) is not in the open triangle")
    s = 1.0 - i - r
    g, g_s, g_i, _ = incidence_partials(EpiState(s, i, r), c)
    return (g_i - g_s) * p.beta * s / r - p.beta * g / r - p.gamma / (r * r)


def dulac_grid_max(p: ModelParams, c: ContactProfile, n: int = 200) -> float:
    """Largest weighted divergence over an ``n x n`` grid of interior points.

    A numerical certificate only: a negative maximum supports, but does not prove,
    the absence of limit cycles.
    """
    import numpy as np

    u = (np.arange(n) + 0.5) / n
    ii, rr = np.meshgrid(u, u, indexing="ij")
    # fold the square onto the open triangle i + r < 1
    flip = ii + rr >= 1.0
    ii = np.where(flip, 1.0 - ii, ii) * (1 - 1e-9)
    rr = np.where(flip, 1.0 - rr, rr) * (1 - 1e-9)
    s = 1.0 - ii - rr
    d = s * c.c_s + ii * c.c_i + rr * c.c_r
    g = c.c_s * c.c_i / d
    k = -c.c_s * c.c_i / (d * d)
    div = k * (c.c_i - c.c_s) * p.beta * s / rr - p.beta * g / rr - p.gamma / (rr * rr)
    return float(div.max())

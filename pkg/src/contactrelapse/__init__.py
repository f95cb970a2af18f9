"""SIR dynamics with nonlinear relapse and contact rates that depend on health status."""
from .core import (DFE, ContactProfile, DerivedRates, EpiState, ModelParams, derived_rates,
                   incidence_g, incidence_partials, params_from_mapping, rescale_absolute, rhs)
from .equilibria import EquilibriumPoint, EquilibriumSet, disease_free, endemic_equilibria
from .errors import ModelError
from .simulate import ScenarioSpec, Trajectory, basin_probe, detect_convergence, integrate
from .stability import classify_equilibrium, dulac_divergence, jacobian_at
from .sturm import Polynomial, count_roots
from .theorem import inequality_holds, r0_window, sign_conditions, theorem_constants, theta_stars

__version__ = "0.1.0"

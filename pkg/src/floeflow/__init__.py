"""floeflow: multiscale sea-ice floe simulation.

A colliding-floe particle model with quadratic ocean drag, the matching
drag-driven continuum solver on a periodic grid, and the balance
diagnostics (momentum/energy identities, concentration fields) that
connect the two descriptions.
"""

from .core import Domain, Ensemble, Floe, PhysParams, drag_coefficient, floe_mass
from .distributions import GammaParams, PowerLawParams
from .integrator import StepConfig, run_simulation, step_forward_euler
from .scenario import Scenario, parse_scenario

__version__ = "0.1.0"

__all__ = [
    "Domain", "Ensemble", "Floe", "PhysParams", "drag_coefficient", "floe_mass",
    "GammaParams", "PowerLawParams", "StepConfig", "run_simulation",
    "step_forward_euler", "Scenario", "parse_scenario", "__version__",
]

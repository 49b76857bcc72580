"""floeplot: offline figure rendering for floeflow run outputs."""

from .artifacts import RunArtifacts, SchemaError, load_run
from .render import render_concentration_figure, render_particle_figure

__version__ = "0.1.0"

__all__ = ["RunArtifacts", "SchemaError", "load_run",
           "render_concentration_figure", "render_particle_figure", "__version__"]

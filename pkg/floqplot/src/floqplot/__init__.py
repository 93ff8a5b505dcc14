"""floqplot: figures from floqsim CSV/JSON outputs."""

__version__ = "0.1.0"

from .render import PLOT_KINDS, PlotSpec, RenderError, render

__all__ = ["PLOT_KINDS", "PlotSpec", "RenderError", "render"]

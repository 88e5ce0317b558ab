"""Figure rendering for the nonreciprocal-coupling simulator's CSV outputs.

Consumes only the documented CSV contract (no import of the simulator):
heatmap sweeps, population/concurrence time series, and engineered-vs-full
modulation comparisons.
"""
from .io import SchemaError, read_heatmap, read_table
from .render import FigureSpec, render

__version__ = "0.1.0"

__all__ = [
    "FigureSpec",
    "SchemaError",
    "read_heatmap",
    "read_table",
    "render",
]

"""Post-processing figures for solver CSV outputs.

All entry points are read-only over their inputs: they load CSV files
written by the solver CLI (or by the exact-solution sampler) and write
image files, never touching the run directory contents.
"""

from .io import MissingColumnError, mixture_field, read_columns
from .overlay import overlay_panels
from .schlieren import schlieren_field, schlieren_image
from .su_diagram import su_diagram

__all__ = [
    "MissingColumnError",
    "mixture_field",
    "overlay_panels",
    "read_columns",
    "schlieren_field",
    "schlieren_image",
    "su_diagram",
]

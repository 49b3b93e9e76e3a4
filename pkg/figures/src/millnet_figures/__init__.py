"""Figure rendering for the CSV artifacts produced by the millnet CLI."""

from .render import KINDS, FigureError, FigureSpec, render

__all__ = ["KINDS", "FigureError", "FigureSpec", "render"]
__version__ = "0.1.0"

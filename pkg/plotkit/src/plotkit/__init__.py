"""Static figure rendering for dickelab CSV outputs."""

from .render import (FigureSpec, SchemaError, diverging_norm, plot_heatmap,
                     plot_trajectories, read_csv, render)

__version__ = "0.1.0"

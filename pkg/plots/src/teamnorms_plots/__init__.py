"""CI-band time-series figures for simulation sweep CSVs.

Renders the aggregated output of the simulation CLI (schema:
scenario_id,K,C,S,rho,alpha,beta,w1,w2,D,N_S,t,mean,ci_low,ci_high,n_runs)
into multi-panel figures with shaded confidence bands, one panel per
parameter group and one curve per swept setting.
"""

from .figures import (CSV_COLUMNS, FigureSpec, ParseError, SeriesGroup,
                      figure_spec, read_series, render)

__version__ = "0.1.0"

__all__ = ["CSV_COLUMNS", "FigureSpec", "ParseError", "SeriesGroup",
           "figure_spec", "read_series", "render"]

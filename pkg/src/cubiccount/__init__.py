"""Two-route computation of the maximal-tangency rational curve counts N_d
of a plane cubic: once from the period series of the dual cubic pencil,
once from the asymptotic wall functions of a consistent wall structure,
with an exact cross check."""

__version__ = "0.1.0"

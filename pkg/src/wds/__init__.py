"""Word-hyperbolic Dehn surgery criteria: angled spines, angled triangulations and slope certificates."""

__version__ = "0.1.0"

"""taulab: numerical laboratory for Newman-style complex Tauberian theory."""

__version__ = "0.1.0"

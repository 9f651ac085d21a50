"""Exact moments of affine jump diffusions, Pearson density fits and option pricing."""

__version__ = "0.1.0"

"""Covering checks and non-covering certificates for hyperplanes in product spaces."""

__version__ = "0.1.0"

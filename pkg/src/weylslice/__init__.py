"""Weyl sums that fail square-root cancellation along lines: a numerical lab."""
__version__ = "0.1.0"

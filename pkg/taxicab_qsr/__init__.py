"""Taxicab SVD toolkit: TCA vs TLRA centering and the QSR quality-of-signs index"""

__version__ = "1.0.0"

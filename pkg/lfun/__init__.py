# lfun
"""
Fast L-values and Fourier coefficients of level-1 cusp forms.

The fast pipelines integrate the lift of a cusp form along long horocycle
pieces, cut them into short segments, reduce the segment starting points
into the fundamental domain and evaluate nearby segments from a single
representative by Taylor expansion. Direct pipelines integrate the same
curves without grouping and serve as oracles.
"""

__version__ = "1.0.0"

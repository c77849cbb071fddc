"""convexkit: a convex-optimization toolkit with rate-verified solvers.

First-order, proximal, mirror, stochastic, cutting-plane, and interior-point
methods, a zoo of benchmark problems (including worst-case constructions), and
a CLI harness that checks the textbook rate bounds empirically.
"""

__version__ = "0.1.0"

"""Numerical and exact verification of CMC surfaces in product and homogeneous
three-manifolds and of PMC surface classification in H^2 x H^2."""

__version__ = "0.1.0"

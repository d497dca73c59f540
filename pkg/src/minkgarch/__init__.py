"""GARCH(1,1), its metric-coefficient (Minkowski) variant, volatility-clustering
diagnostics and numerical checks of the Nahm / sine-Gordon market dynamics."""

__version__ = "0.1.0"

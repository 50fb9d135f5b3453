"""Matrix profile computation and time series mining."""

__version__ = "0.1.0"

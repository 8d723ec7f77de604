"""Online railway deadlock detection via incremental SAT planning."""

__version__ = "0.1.0"

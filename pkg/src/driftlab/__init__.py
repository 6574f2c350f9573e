"""driftlab: simulation and verification lab for walks with drift rho*x^alpha/t^beta."""

__version__ = "0.1.0"

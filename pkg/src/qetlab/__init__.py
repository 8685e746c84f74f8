"""Quantum energy teleportation on the two-qubit XY model."""
from .xymodel import ModelParams

__all__ = ["ModelParams"]
__version__ = "0.1.0"

"""Exact wall-crossing numerics for K3 surfaces of Picard rank one."""

__version__ = "0.1.0"

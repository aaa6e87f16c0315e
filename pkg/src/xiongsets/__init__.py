"""Multiply Xiong chaotic sets: symbolic construction, verification and dimension tools."""

__version__ = "0.1.0"

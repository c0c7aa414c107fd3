"""Locally nilpotent derivations, affine modification towers and A^1-bundle triviality."""

__version__ = "0.1.0"

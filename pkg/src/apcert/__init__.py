"""Arithmetic-progression minimisation in Z_n: necklace enumeration, exact
sum-of-squares certificate checking and the circulant LP bound."""

from __future__ import annotations

__version__ = "0.1.0"

"""Exact matrix-product solutions of the Yang-Baxter and reflection equations
built from q-boson 3D R and 3D K operators."""

__version__ = "0.1.0"

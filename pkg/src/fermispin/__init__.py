"""Two-spinor geometry, spinor connections and Fermi transport."""

__version__ = "0.1.0"

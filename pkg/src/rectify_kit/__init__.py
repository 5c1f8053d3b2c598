"""rectify-kit: exact-arithmetic tools for finite homotopy-algebraic structures."""

__version__ = "0.1.0"

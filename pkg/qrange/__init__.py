"""Joint q-numerical ranges and radii of complex matrix tuples"""

__version__ = "0.1.0"

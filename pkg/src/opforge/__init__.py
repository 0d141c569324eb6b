"""opforge: lattice path operad, tree operads of natural operations on
Hochschild cochains, brace calculus, and exact integer homology."""

__version__ = "0.1.0"

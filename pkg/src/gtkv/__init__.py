"""Exact computer algebra for surface string topology operations.

Truncated tensor-algebra models over the rationals for the loop operations
of a compact oriented surface with boundary: the intersection double bracket,
the framed self-intersection map, the induced Lie bialgebra, divergence
cocycles on tangential derivations, and a degree-by-degree solver for the
higher-genus Kashiwara-Vergne equations.

All arithmetic is exact (fractions.Fraction); every identity is checked at a
finite weight truncation D.
"""

__version__ = "0.1.0"

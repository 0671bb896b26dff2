"""Mean values and variances of factorization functions in F_q[T].

Hayes characters and their L-functions, symmetric-function combinatorics
and explicit exponential-sum bounds, each checked against brute force.
"""
__version__ = "0.1.0"

from .ffpoly import Field, PolyRing  # noqa: E402
from .hayes import CharacterGroup  # noqa: E402

__all__ = ["Field", "PolyRing", "CharacterGroup", "__version__"]

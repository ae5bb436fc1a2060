"""Quantum LDPC codes with prescribed automorphism gates.

Construction and certification of classical/CSS codes whose logical gates
are realized by qubit permutations, plus atom-array movement scheduling,
syndrome-circuit emission, and closed-form resource estimation.
"""

__version__ = "0.1.0"

from .gf2 import BitMatrix, Permutation

__all__ = ["BitMatrix", "Permutation", "__version__"]

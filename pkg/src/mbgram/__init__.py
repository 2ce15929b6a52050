"""Exact computation of Gram matrices of crossingless Mobius-band connections.

The package enumerates crossingless connections between 2n marked boundary
points of a Mobius band (with zero or one curve through the crosscap),
evaluates the diagram pairing form symbolically over Z[d, w, x, y, z],
assembles the associated Gram matrices, and checks the conjectured
determinant formulas and Chebyshev polynomial identities by exact
arithmetic.  No floating point is used anywhere in the exact pipeline.
"""

from mbgram.polynomial import Polynomial
from mbgram.diagrams import Arc, Diagram, Stratum, enumerate_stratum
from mbgram.pairing import bilinear_form
from mbgram.gram import GramVariant, assemble_gram, det_exact, det_by_evaluation

__all__ = [
    "Polynomial",
    "Arc",
    "Diagram",
    "Stratum",
    "enumerate_stratum",
    "bilinear_form",
    "GramVariant",
    "assemble_gram",
    "det_exact",
    "det_by_evaluation",
]

__version__ = "0.1.0"

"""Exact-arithmetic toolkit for commuting matrix pairs over truncated rings.

Subsystems:
  fields / linalg / unipoly  -- exact scalars, dense matrices, polynomials
  truncmat                   -- the ring M_n(F)[t]/t^(k+1)
  symcalc                    -- noncommutative symmetric sums, q <-> B maps
  commutant                  -- commutant spaces, equivalence battery, lifting
  jetideal                   -- symbolic jet ideal, Jacobian tangent ranks
  redwitness                 -- reducibility bounds, thresholds, block family
  irr3path                   -- n = 3 closure certificates
  sampling / pairio / cli    -- seeded samplers, pair files, batch driver
"""

from .fields import QQ, PrimeField, RationalField, prime_field
from .linalg import (
    Matrix,
    SubspaceBasis,
    charpoly,
    det,
    kernel_basis,
    minpoly_dim,
    rank,
    squarefree_split_info,
)
from .truncmat import MatPoly, commutator, poly_combine
from .unipoly import UniPoly

__all__ = [
    "QQ",
    "PrimeField",
    "RationalField",
    "prime_field",
    "Matrix",
    "SubspaceBasis",
    "charpoly",
    "det",
    "kernel_basis",
    "minpoly_dim",
    "rank",
    "squarefree_split_info",
    "MatPoly",
    "commutator",
    "poly_combine",
    "UniPoly",
]

"""Log-degree sweeping word grids in matrix algebras.

Submodules:
  words       word enumeration, the word grid, the certificate monomial
  exactalg    exact scalar rings and dense linear algebra
  graphs      the recursive multigraph family and its walk partitions
  genericity  randomized certification, sweeping checks, length chains
  witness     deterministic integer witnesses with exact verification
  cli         command-line surface over all of the above
"""

from . import exactalg, genericity, graphs, witness, words
from .errors import (
    ArityMismatch,
    BudgetExceeded,
    Infeasible,
    InvalidInput,
    InvalidModulus,
    InvalidShape,
    InvalidWord,
    SweepwordsError,
    TooLarge,
)

__version__ = "0.1.0"

__all__ = [
    "exactalg",
    "genericity",
    "graphs",
    "witness",
    "words",
    "ArityMismatch",
    "BudgetExceeded",
    "Infeasible",
    "InvalidInput",
    "InvalidModulus",
    "InvalidShape",
    "InvalidWord",
    "SweepwordsError",
    "TooLarge",
    "__version__",
]

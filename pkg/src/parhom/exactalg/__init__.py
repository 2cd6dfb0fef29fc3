"""Exact rings and linear algebra."""

from .rings import GF, QQ, ZZ, Ring, is_prime, parse_ring
from .matrix import MAX_ENTRIES, Matrix, block_diag, check_size, kron
from .snf import invariant_factors, smith_invariants, snf
from .sparse import SparseMatrix, rank_reduce, rref_reduce
from .linalg import (HomologySummary, QuotientPresentation, column_basis, homology_of_pair,
                     in_span, intersect_spans, inverse, kernel_basis, quotient_from_rows,
                     quotient_presentation, rank, rref, same_span, solve)

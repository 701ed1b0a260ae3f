"""Exact Belavin-Drinfeld r-matrices and cohomology for the B, C, D series."""

__version__ = "0.1.0"

from .cohomology import (CohomologyClass, CohomologySet, classify_nontwisted,
                         classify_twisted, complete_to_group, decompose_rjd,
                         is_nontwisted_cocycle, is_twisted_cocycle,
                         twistable_triples)
from .field import (BASE_TOWER, Automorphism, FieldElement, FieldPolicy,
                    Generator, Tower, ensure_fourth_root_h, ensure_sqrt_h,
                    is_square, parse_element, semantic_galois_group, sigma0,
                    solve_norm, sqrt_witness, square_class)
from .liealg import LieAlgebra
from .rmatrix import (RMatrix, build_r_matrix, check_r_plus_r21_is_omega,
                      cybe_residual, dj_spectral_check)
from .scalars import GaussRat, Poly, Q, RatFunc
from .triples import BDTriple, enumerate_triples

__all__ = [
    "BASE_TOWER", "Automorphism", "BDTriple", "CohomologyClass",
    "CohomologySet", "FieldElement", "FieldPolicy", "GaussRat", "Generator",
    "LieAlgebra", "Poly", "Q", "RMatrix", "RatFunc", "Tower",
    "build_r_matrix", "check_r_plus_r21_is_omega", "classify_nontwisted",
    "classify_twisted", "complete_to_group", "cybe_residual", "decompose_rjd",
    "dj_spectral_check", "ensure_fourth_root_h", "ensure_sqrt_h", "is_square",
    "is_nontwisted_cocycle", "is_twisted_cocycle", "enumerate_triples",
    "parse_element", "semantic_galois_group", "sigma0", "solve_norm",
    "sqrt_witness", "square_class", "twistable_triples",
]

"""Spectra and characteristic polynomials of lexicographic products H[G]
and lexicographic powers G^k, computed through walk matrices and validated
against explicit constructions."""

from .errors import (GraphParseError, LexSpecError, NumericalError, OracleTooLarge, SizeCapError,
                     TheoryViolation)
from .graph import (Graph, edge_count, emit_edge_list, emit_graph6, generate, is_connected, is_regular,
                    lex_power_explicit, lex_product_explicit, parse_edge_list, parse_family, parse_graph6)
from .spectral import (DEFAULT_CONFIG, GroupingConfig, Spectrum, SpectrumEntry, char_poly, eigen_general,
                       eigen_sym, main_spectrum, nullity)
from .walkmatrix import MainPolynomial, WalkMatrix, main_poly, walk_matrix, walk_row
from .lexjoin import (AssociatedMatrix, CorollaryReport, associated_for, assemble_associated, companion,
                      corollary_check, lex_char_poly, lex_spectrum, lex_spectrum_regular)
from .lexpower import (LexOperator, PowerSpectrum, factor_check, lex_matvec, power_char_poly,
                       power_main_poly, power_spectrum, power_walk_matrix)
from .oracle import MultisetDiff, compare_multisets, oracle_power_spectrum, oracle_spectrum

__version__ = "0.1.0"

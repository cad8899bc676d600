"""Exact linear algebra for Steiner bundles: jumping pairs, tangent bounds and classification."""

__version__ = "0.1.0"

from .linalg import QQ, GF, FieldSpec, LinalgError, Matrix, Subspace, intersect, kernel, rank, rref, solve, sum_
from .tensor import (MatrixSpace, contract_line, gaussian_binomial, is_pure_in, projective_points,
                     slices_of_phi, subspaces)
from .steiner import (DatumError, HypothesisError, InconsistentDatum, SteinerDatum, ValidationError,
                      VarietyProbe, detect_trivial, is_reduced, pad_zero_columns, rank_bound, reduce, validate)
from .schwarzenberger import (MultiplicationTensor, binary_mult_datum, full_segre_datum,
                              generic_schwarzenberger_datum, scroll_datum, veronese_datum)
from .jumping import (BadPrimeError, JumpingPair, LocusReport, enumerate_j_image, enumerate_locus,
                      estimate_dimension, fiber_at, lower_bound, reduce_mod)
from .tangent import (ClassificationVerdict, TangentReport, classify_maximal, induction_step,
                      tangent_dimension, upper_bound)

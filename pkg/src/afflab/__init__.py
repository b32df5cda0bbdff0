"""Subadditive thermodynamic formalism for tuples of contracting matrices.

Singular value pressure, affinity dimension, Gibbs-type cylinder measures,
irreducibility certificates and dimension-drop experiments.
"""
from .errors import AfflabError, InputError, PreconditionError, ResourceError
from .multilinear import (KSubsetBasis, WedgeVector, exterior_power, kronecker, ksubset_basis, operator_norm,
                          singular_values, wedge_vectors)
from .symbolic import MatrixTuple, fold_words, shift, word_product
from .pressure import (AffinityDimensionResult, PressureEstimate, SvfExponent, affinity_dimension,
                       norm_pressure_estimate, pressure_estimate, rational_tensor_lift, svf)
from .irreducibility import (IrreducibilityReport, Verdict, check_condition_Cs_sampled, check_eigenvalue_condition,
                             check_irreducible, check_k_irreducible, check_s_irreducible_sufficient, orbit_span)
from .equilibrium import (CylinderMeasure, entropy_estimate, gibbs_approximation, gibbs_ratio_diagnostic,
                          lyapunov_estimate, variational_check)
from .harness import DropReport, SurveyReport, drop_experiment, genericity_survey, sample_tuple

__version__ = "0.1.0"

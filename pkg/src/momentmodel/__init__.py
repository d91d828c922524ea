"""Finite-scale matrix moment problems, GNS models and spectral models of
commuting self-adjoint / unitary families."""
from .errors import (DegenerateAtomError, DimensionError, DomainError, InvalidMeasureError, InvalidSUSetError,
                     MomentModelError, NonCyclicError, NotCommutingError, PositivityError, WellDefinednessError,
                     WindowError)
from .gns import GnsSpace, build_gns_hamburger, build_gns_strip, gns_from_gram
from .kernel import DEFAULT_TOL, Tolerances
from .l2space import DensityReport, L2Model, density_test, gram_matrix
from .measures import JointMatrixMeasure, MatrixAtomicMeasure, ScalarAtomicMeasure, StripAtomicMeasure
from .moments import (MatrixMomentSequence, StripMomentTable, block_hankel, devinatz_gram, matrix_moments,
                      strip_moments)
from .polynomials import PowerTrigPolynomial, VectorPolynomial
from .resolvents import CanonicalReport, cayley_power_check, verify_canonical_hamburger, verify_canonical_strip
from .spectral import (CyclicFamily, SUSet, cyclicity_check, extract_matrix_measure, joint_spectral_decomposition,
                       model_unitary, product_spectral_measure, random_su_set, spectral_multiplicity)

__version__ = "0.1.0"

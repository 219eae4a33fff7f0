"""cohkit: quantum coherence numerics.

Schur-Horn majorization checks, coherence measures (relative entropy, l1,
cross-entropy and partial variants, Tsallis-2), random incoherent Kraus
channels with a resource-axiom Monte Carlo suite, coherence-distillation
curve families in the (S2, SvN) plane, and a refined max-eigenvalue
entropic uncertainty bound.  Everything is deterministic given a seed.
"""

from .linalg import (ConvergenceFailureError, DimMismatchError,
                     EigenDecomposition, InvalidSpectrumError,
                     MatrixValidationError, NotHermitianError, NotPSDError,
                     NotSquareError, TraceZeroError, dephase, eigh,
                     load_matrix_json, offdiag_max, save_matrix_json,
                     validate_density, validate_spectrum)
from .measures import (DEFAULT_CONFIG, EntropyConfig, InvalidKError,
                       MeasureId, NotNormalizedError, SingularSupportError,
                       c2_measure, c_cross, c_cross_partial, c_l1,
                       c_rel_ent, c_rel_partial, cross_terms, measure_value,
                       shannon_entropy, tsallis2, von_neumann_entropy)
from .random_states import (InvalidRankError, SeedStream, Trajectory,
                            as_generator, coherence_walk, from_spectrum,
                            haar_unitary, random_density)
from .majorization import (DimensionTooSmallError, GilReport,
                           LengthMismatchError, MajorizationReport,
                           gil_indices, gil_report, majorizes,
                           schur_horn_report)
from .channels import (AXIOM_NAMES, AxiomReport, KrausSet, apply_channel,
                       axiom_suite, kraus_completeness_defect,
                       random_io_kraus, selective_outcomes, validate_kraus)
from .entropy_plane import (FAMILY_TAGS, CurveFamily, EurReport,
                            FamilyInvalidForDimError, MeasurementBasis,
                            OutOfRangeError, TooFewBasesError,
                            basis_from_json, boundary_samples,
                            computational_basis, containment_polylines,
                            entropy_lambda_gap, eur_curve_point,
                            family_spectrum, fourier_basis, haar_basis,
                            measurement_probs, plane_point, polyline_bounds,
                            refined_eur_report, valid_families)

__version__ = "0.1.0"

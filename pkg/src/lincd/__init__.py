"""Linear causal disentanglement from per-context precision matrices."""

from .errors import (AmbiguousGroupingWarning, AmbiguousObservationalError, DegenerateInputError,
                     InconsistentRankError, InsufficientSamplesError, InvalidConfigError,
                     InvalidInputError, InvalidModelError, InvalidOrderError, LincdError,
                     NotInModelError, NotPositiveDefiniteError, RankDeficientError)
from .evaluation import (AlignmentProblem, BenchmarkGrid, BenchmarkReport, align_permutation,
                         align_result, brute_force_alignment, roc_auc, roc_points, run_benchmark,
                         score_result)
from .identify import (IdentificationResult, id_ancestors, id_partial_order, identify,
                       identify_from_samples, iterative_difference_projection)
from .linalg import (cholesky_upper, normalize_rows, orthonormalize_rows, partial_order_rq,
                     project_complement, pseudoinverse, rank_score)
from .model import (Dag, GeneratorConfig, LatentModel, ParameterBundle, PrecisionSet,
                    construct_counterexample, exact_covariance, exact_precision,
                    generate_random_model, motivating_models, sample_data, sample_precision,
                    sample_precision_set)
from .order import PartialOrder
from .reduction import (ReductionReport, canonicalize, infer_latent_dimension, membership_test,
                        reduce_contexts)

__version__ = "0.1.0"

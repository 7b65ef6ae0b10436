"""Affine mixtures of the 24 BBOB benchmark functions.

Generate mixture problems with relocated optima, calibrate per-function scale
factors, draw quasi-random sample designs, extract landscape features, run a
small optimizer portfolio, and score it with ECDF/AUC metrics.
"""

__version__ = "0.1.0"

from .calibration import ScaleFactors, estimate_all, estimate_scale_factor, table_defaults
from .errors import (
    BBOBMixError,
    CapabilityError,
    EvaluationError,
    InputFormatError,
    ParameterError,
)
from .features import FeatureConfig, compute_features, feature_table, minmax_normalize
from .generator import (
    GeneratorConfig,
    MAProblem,
    make_problem,
    one_hot,
    problem_from_spec,
    problem_to_spec,
    random_problem,
    sample_weights,
    spec_to_dim,
)
from .metrics import (
    auc,
    auc_loss,
    auc_table,
    best_algorithm,
    knn_select,
    rank_algorithms,
    targets,
    weighted_f1,
)
from .optimizers import AlgorithmSpec, RunLog, portfolio, run
from .sampling import SampleDesign, scale_to_box, sobol, uniform_design
from .suite import (
    BBOBInstance,
    evaluate,
    f_pen,
    lambda_alpha,
    make_instance,
    optimum,
    transform_asy,
    transform_osz,
)

__all__ = [name for name in dir() if not name.startswith("_")]

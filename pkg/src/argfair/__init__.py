"""Argumentation-based individual-fairness auditor for tabular classifiers.

Finds out why an individual was classified differently from its nearest
neighbors: attribute-value pairs become arguments, differently-classified
neighbors attack the queried individual's pairs with vote-weighted
strengths, and the weighted h-Categorizer semantics scores every argument.
The lowest-scoring pairs are the explanation.
"""

from .argcore import Argument, WeightedArgGraph, build_arguments, build_attacks, to_dot
from .audit import (
    AuditReport,
    audit_batch,
    inject_bias,
    render_report,
    report_to_doc,
    verify_bias_experiment,
    write_report,
)
from .classifier import (
    BIAS_ATTRIBUTE,
    LabelAssignment,
    LogRegModel,
    TrainConfig,
    evaluate_model,
    fixed_bias_assignment,
    fixed_bias_classifier,
    labels_from_dataset,
    load_predictions,
    predict,
    predict_dataset,
    save_predictions,
    train_logreg,
)
from .dataset import (
    NEGATIVE,
    POSITIVE,
    Dataset,
    Individual,
    Schema,
    bin_numeric,
    load_table,
    split,
)
from .errors import (
    ArgfairError,
    BinningError,
    ComparabilityError,
    CoverageError,
    DegenerateTrainingError,
    DomainError,
    InsufficientPoolError,
    MissingAttributeError,
    NonConvergenceError,
    ParameterError,
    ParseError,
    SchemaError,
)
from .semantics import (
    DEFAULT_EPSILON,
    DEFAULT_MAX_ITER,
    Explanation,
    FinalWeights,
    evaluate,
    extract_explanation,
    hbs_converge,
)
from .similarity import NeighborIndex, NeighborSet, hamming, k_nearest

__version__ = "0.1.0"

"""Multi-instance bag classification via reference-bag distance vectors.

Bags of instances are embedded as vectors of extended set-to-set
distances to a fixed reference collection and classified with an
embedded linear SVM. The hot distance kernels run from a compiled
extension when it is built, with a NumPy/SciPy fallback selected
automatically at import.
"""

from ._kernels import available_backends, backend_name, use_backend
from .brv import (
    BagReferenceVector,
    ReferenceSet,
    featurize,
    featurize_all,
    featurizer_fingerprint,
    reference_fingerprint,
)
from .core import Bag, BagLabel, Dataset, validate_dataset
from .dist import (
    DistParams,
    OperatorId,
    bar_operator,
    cross_distance_matrix,
    directed_hausdorff,
    euclidean,
    operator_table,
    oracle_bar_operator,
    symmetric_hausdorff,
)
from .eval import CvConfig, CvReport, accuracy, run_cv, split_folds
from .io import (
    export_brv,
    load_model,
    parse_dataset,
    save_model,
    write_dataset,
)
from .svm import (
    LinearModel,
    SvmConfig,
    decision_value,
    decision_values,
    predict,
    predict_many,
    train,
)
from .synth import make_synthetic, shuffle_labels
from . import errors

__version__ = "0.1.0"

__all__ = [
    "Bag",
    "BagLabel",
    "BagReferenceVector",
    "CvConfig",
    "CvReport",
    "Dataset",
    "DistParams",
    "LinearModel",
    "OperatorId",
    "ReferenceSet",
    "SvmConfig",
    "accuracy",
    "available_backends",
    "backend_name",
    "bar_operator",
    "cross_distance_matrix",
    "decision_value",
    "decision_values",
    "directed_hausdorff",
    "errors",
    "euclidean",
    "export_brv",
    "featurize",
    "featurize_all",
    "featurizer_fingerprint",
    "load_model",
    "make_synthetic",
    "operator_table",
    "oracle_bar_operator",
    "parse_dataset",
    "predict",
    "predict_many",
    "reference_fingerprint",
    "run_cv",
    "save_model",
    "shuffle_labels",
    "split_folds",
    "symmetric_hausdorff",
    "train",
    "use_backend",
    "validate_dataset",
    "write_dataset",
    "__version__",
]

"""Randomized block solvers for multi-class least-squares SVM kernel classifiers."""

from .classifier import (
    EvaluationReport,
    Model,
    average_models,
    decision_scores,
    evaluate,
    predict,
    softmax_probabilities,
    train,
)
from .datasets import (
    LabeledDataset,
    load_cifar10_batches,
    load_idx_images,
    load_idx_labels,
    load_mnist,
    one_hot_targets,
)
from .kernels import BlockSampler, Gaussian, Polynomial, ThetaOperator, kernel_eval
from .linalg import pseudo_inverse, solve_direct
from .model_io import deserialize_model, emit_trace_csv, serialize_model
from .preprocess import (
    GaussianFilter,
    PreprocessSpec,
    SpectralConcat,
    TwoStepNormalize,
    apply_steps,
    dft_magnitude_half,
    gaussian_center_filter,
    gaussian_filter_plane,
    spectral_concat,
    two_step_normalize,
)
from .solvers import (
    ConvergenceTrace,
    SolverConfig,
    hybrid_step,
    kaczmarz_step,
    mp_step,
    run_iterative,
    solve,
    solve_nystrom,
)

__version__ = "0.1.0"

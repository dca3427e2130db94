"""Minimum-norm interpolation for random feature models, two-layer ReLU
networks, and residual networks, with certified norm bounds, empirical
Rademacher complexity estimates, and a reproducible experiment harness."""

from ._version import VERSION as __version__
from .errors import (
    ConcentrationFailureError,
    ContractViolationError,
    MinterpError,
    SingularSystemError,
    UnderParametrizedError,
)
from .seeding import derive_seed, rng_from, splitmix64
from .sampling import (
    Dataset,
    TeacherFunction,
    barron_norm_upper,
    make_teacher,
    rescale_teacher,
    sample_dataset,
    sample_l1_sphere,
    sup_norm_upper,
    teacher_eval,
    teacher_eval_batch,
)
from .linalg import (
    DEFAULT_RCOND,
    eigenvalues,
    min_norm_solve,
    smallest_eigenvalue,
    smallest_singular_value,
    spectral_norm,
)
from .random_features import (
    RANDOM_FOURIER,
    RELU_L1SPHERE,
    ConcentrationCheck,
    FeatureFamily,
    RandomFeatureFit,
    RandomFeatureModel,
    concentration_check,
    concentration_width,
    eigen_min,
    feature_matrix,
    fit_random_features,
    fourier_kernel_closed_form,
    kernel_empirical,
    kernel_exact,
    min_l2_interpolant,
    ridgeless_coefficients,
    rkhs_norm_bound,
)
from .two_layer import (
    CompositeFit,
    ResidualFit,
    TeacherFit,
    TwoLayerNet,
    approximate_teacher,
    concat_neurons,
    fit_residual_net,
    interpolate_two_layer,
    path_norm,
    scale_outer,
    sum_networks,
    two_layer_eval,
    two_layer_eval_batch,
)
from .resnet import (
    ResNet,
    ResNetFit,
    canonical_injection,
    depth_requirement,
    embed_two_layer,
    interpolate_resnet,
    pad_identity_layers,
    random_resnet,
    resnet_add,
    resnet_eval,
    resnet_eval_batch,
    weighted_path_norm,
    zero_tail_layers,
)
from .complexity import (
    PathBallResult,
    RadEstimate,
    RiskEstimate,
    generalization_bound,
    population_risk,
    rad_path_ball,
    rad_rf_ball,
    rad_weighted_path_upper,
    rf_ball_upper,
)
from .experiments import (
    ExperimentConfig,
    StudyResult,
    VERIFY_SELECTORS,
    run,
    run_bound_audit,
    run_scale_study,
    run_verify_lemma,
    write_study,
)

__all__ = [
    "__version__",
    "MinterpError",
    "SingularSystemError",
    "UnderParametrizedError",
    "ConcentrationFailureError",
    "ContractViolationError",
    "splitmix64",
    "derive_seed",
    "rng_from",
    "TeacherFunction",
    "Dataset",
    "sample_l1_sphere",
    "make_teacher",
    "barron_norm_upper",
    "sup_norm_upper",
    "rescale_teacher",
    "teacher_eval",
    "teacher_eval_batch",
    "sample_dataset",
    "DEFAULT_RCOND",
    "min_norm_solve",
    "smallest_eigenvalue",
    "eigenvalues",
    "spectral_norm",
    "smallest_singular_value",
    "RELU_L1SPHERE",
    "RANDOM_FOURIER",
    "FeatureFamily",
    "RandomFeatureModel",
    "RandomFeatureFit",
    "ConcentrationCheck",
    "feature_matrix",
    "kernel_exact",
    "kernel_empirical",
    "min_l2_interpolant",
    "eigen_min",
    "ridgeless_coefficients",
    "rkhs_norm_bound",
    "concentration_width",
    "concentration_check",
    "fourier_kernel_closed_form",
    "fit_random_features",
    "TwoLayerNet",
    "ResidualFit",
    "TeacherFit",
    "CompositeFit",
    "two_layer_eval",
    "two_layer_eval_batch",
    "path_norm",
    "concat_neurons",
    "scale_outer",
    "sum_networks",
    "fit_residual_net",
    "approximate_teacher",
    "interpolate_two_layer",
    "ResNet",
    "ResNetFit",
    "canonical_injection",
    "resnet_eval",
    "resnet_eval_batch",
    "weighted_path_norm",
    "pad_identity_layers",
    "resnet_add",
    "embed_two_layer",
    "zero_tail_layers",
    "random_resnet",
    "interpolate_resnet",
    "depth_requirement",
    "RadEstimate",
    "PathBallResult",
    "RiskEstimate",
    "rad_rf_ball",
    "rf_ball_upper",
    "rad_path_ball",
    "rad_weighted_path_upper",
    "generalization_bound",
    "population_risk",
    "ExperimentConfig",
    "StudyResult",
    "VERIFY_SELECTORS",
    "run",
    "run_verify_lemma",
    "run_scale_study",
    "run_bound_audit",
    "write_study",
]

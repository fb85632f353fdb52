"""Random unimodular multilinear forms on mixed l_p products.

Construction of sign tensors with certified small operator norms, exact and
bracketed norm computation, growth-window experiments and Hardy-Littlewood
type admissibility checks.
"""

from signforms._kernels import kernel_backend
from signforms.growth import (
    WindowReport,
    WindowRow,
    conjectured_growth,
    growth_function,
    littlewood_mixed_sum,
    norm_lower_bound,
    window_experiment,
    window_json,
)
from signforms.hardy_littlewood import (
    AdmissibilityVerdict,
    BlockExponents,
    SweepRow,
    admissible,
    blow_up_exponent,
    blowup_power_bounds,
    diagonal_mixed_norm,
    fit_log_slope,
    growth_witness_sweep,
    sweep_csv,
)
from signforms.ksz import (
    DrawsExhaustedError,
    KszParameters,
    SampleCertificate,
    confidence_constant,
    covering_log_count,
    ksz_bound,
    ksz_constant,
    ksz_gamma,
    ksz_parameters,
    sample_signs,
    sample_small_norm_form,
    threshold_r_lambda,
)
from signforms.norms import (
    DEFAULT_BUDGET,
    BoundReport,
    BudgetExceededError,
    ConvergenceError,
    alt_max_norm,
    exact_norm_l2_bilinear,
    exact_norm_linf,
    exhaustive_linf_report,
    norm_bracket,
    upper_bound_frobenius,
)
from signforms.tensor import (
    MixedNormSpec,
    SignTensor,
    conjugate,
    diagonal_block_tensor,
    dual_maximizer,
    evaluate,
    exponents_from_json,
    exponents_to_json,
    iter_sign_tensors,
    mixed_norm,
    partial_coefficients,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityVerdict",
    "BlockExponents",
    "BoundReport",
    "BudgetExceededError",
    "ConvergenceError",
    "DEFAULT_BUDGET",
    "DrawsExhaustedError",
    "KszParameters",
    "MixedNormSpec",
    "SampleCertificate",
    "SignTensor",
    "SweepRow",
    "WindowReport",
    "WindowRow",
    "admissible",
    "alt_max_norm",
    "blow_up_exponent",
    "blowup_power_bounds",
    "confidence_constant",
    "conjugate",
    "conjectured_growth",
    "covering_log_count",
    "diagonal_block_tensor",
    "diagonal_mixed_norm",
    "dual_maximizer",
    "evaluate",
    "exact_norm_l2_bilinear",
    "exact_norm_linf",
    "exhaustive_linf_report",
    "exponents_from_json",
    "exponents_to_json",
    "fit_log_slope",
    "growth_function",
    "growth_witness_sweep",
    "iter_sign_tensors",
    "kernel_backend",
    "ksz_bound",
    "ksz_constant",
    "ksz_gamma",
    "ksz_parameters",
    "littlewood_mixed_sum",
    "mixed_norm",
    "norm_bracket",
    "norm_lower_bound",
    "partial_coefficients",
    "sample_signs",
    "sample_small_norm_form",
    "sweep_csv",
    "threshold_r_lambda",
    "upper_bound_frobenius",
    "window_experiment",
    "window_json",
]

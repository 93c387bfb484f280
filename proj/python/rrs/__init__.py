"""Certifiably robust smoothed interpretation maps."""

from ._rrs import (
    BadMagic,
    DimMismatch,
    DomainError,
    Error,
    FormatError,
    InfeasibleSpec,
    InterpreterError,
    InvalidHeader,
    MissingFile,
    NumericError,
    ParameterError,
    TinyModel,
    TruncatedFile,
    UnsupportedOperation,
    UnsupportedVersion,
    __version__,
    certify_beta,
    certify_max_attack,
    eps_alpha_laplace,
    eps_gaussian,
    eps_kl_gnd,
    eps_robust,
    gnd_pdf,
    hoeffding_radius,
    invert_divergence,
    k0,
    map_digest,
    numeric_renyi_divergence,
    pointing_score,
    rank_rescale,
    read_map,
    renyi_divergence,
    run_sweep,
    sample_noise,
    scoring_vector,
    select_shape,
    simple_gradient,
    smooth,
    synthetic_case,
    top_k_overlap,
    top_k_set,
    topk_attack,
    worst_case_map,
    write_map,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]

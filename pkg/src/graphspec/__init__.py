"""Spectral analysis and PSD estimation for stationary graph processes."""

from . import errors
from .denoise import lowpass_denoise, wiener_denoise
from .graphs import (
    GraphSpec,
    HopDistanceTable,
    cluster_complete_linkage,
    generate_graph,
    hop_distances,
    sbm_blocks,
)
from .nonparametric import (
    FilterBank,
    FilterBankMoments,
    PeriodogramMoments,
    SpectrumMixing,
    WindowBank,
    WindowMoments,
    bank_from_blocks,
    correlogram,
    cross_term_matrix,
    design_fir_bandpass,
    design_ideal_bandpass,
    design_windows,
    filterbank_estimate,
    periodogram,
    predict_filterbank_moments,
    predict_periodogram_moments,
    predict_window_moments,
    window_dual,
    window_separations,
    windowed_avg_periodogram,
)
from .parametric import (
    ArFit,
    ArmaModel,
    ArmaNonnegFit,
    ArmaRelaxedFit,
    ArModel,
    FitConfig,
    MaFit,
    MaModel,
    MaNonnegFit,
    MaSymmetricFit,
    ar_fit,
    ar_psd,
    arma_fit_ls,
    arma_psd,
    ma_fit_freq,
    ma_fit_nonneg,
    ma_fit_symmetric,
    ma_psd,
    model_covariance,
    model_psd,
)
from .processes import (
    CovarianceMatrix,
    PsdEstimate,
    SignalEnsemble,
    covariance_from_psd,
    diffusion_filter,
    filter_matching_psd,
    filtered_psd,
    generate_from_psd,
    generate_stationary,
    locality_support_check,
    project_out_eigenvector,
    psd_from_covariance,
    sample_covariance,
    shift_invariance_residual,
    stationarity_metric,
    true_covariance,
)
from .spectral import (
    GraphFilter,
    GraphShift,
    SpectralBasis,
    VandermondeMatrix,
    apply_filter_vertex,
    decompose,
    filter_freq_response,
    gft,
    igft,
    normality_residual,
    vandermonde,
)

__version__ = "0.1.0"

//! Incoherent dictionaries over prime-dimensional signal spaces and the
//! spectral statistics of their random subdictionaries.

pub mod dict_format;
pub mod dictionary;
pub mod eigen;
pub mod error;
pub mod matrix;
pub mod recovery;
pub mod spectral;
pub mod stats;

pub use dict_format::{load_dictionary, save_dictionary};
pub use eigen::{hermitian_eigenvalues, EigenResult};
pub use dictionary::{
    coherence, coherence_pair_count, gauss_sum_magnitude, inner_product, resolution_apply, Atom,
    AtomId, CoefficientVector, Dictionary, Prime,
};
pub use error::{Error, Result};
pub use matrix::CMatrix;
pub use recovery::{omp, RecoveryResult};
pub use spectral::{
    gram, rip_deviation, rip_exact_check, GramMatrix, RipReport, Support, DEFAULT_ENUM_BUDGET,
};
pub use stats::{
    derive_trial_seed, error_spectrum, estimate_decay, fit_log_decay, ks_distance, sample_support,
    semicircle_cdf, semicircle_density, spectral_moment, srip_scan, srip_trial, wilson_interval,
    DecayFit, DecayPoint, SamplingPolicy, ScanConfig, ScanReport, SizeRule, SpectrumResult,
    TrialSpectrum,
};

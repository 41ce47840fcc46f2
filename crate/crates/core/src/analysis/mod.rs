//! Statistical and cryptanalytic evaluation: histograms, NPCR/UACI,
//! adjacent-pixel correlation, key sensitivity and the known-plaintext
//! keystream attack.

mod attack;
mod correlation;
mod histogram;
mod metrics;
mod report;
mod sensitivity;

pub use attack::{keystream_attack, AttackOutcome, AttackReport, KeystreamEstimate, SUCCESS_NPCR};
pub use correlation::{correlation, correlation_coefficient, CorrResult, Direction};
pub use histogram::{
    chi_square_p_value, chi_square_uniform, content_histogram, histogram, Histogram,
};
pub use metrics::{
    diff, differential_test, npcr, npcr_slices, psnr, random_flips, uaci, BitFlip, DiffResult,
};
pub use report::{
    run_battery, AnalysisReport, BatteryConfig, CorrelationRow, DifferentialSection, FlipRow,
    HistogramSection, ScatterSet, Sections, SCHEMA_VERSION,
};
pub use sensitivity::{key_sensitivity_suite, KeyDelta, SensitivityRow};

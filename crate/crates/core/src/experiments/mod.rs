//! Monte Carlo sweeps, exact small-case probabilities, the exhaustive
//! verifications and numeric checks of the supporting lemmas.

pub mod exact;
pub mod lemmas;
pub mod odd;
pub mod sweep;
pub mod verify;

pub use exact::{exact_existence_probability, exact_existence_probability_with};
pub use lemmas::{gamma_lemma_check, phi, phi_concavity_check, phi_merge_deviation, GammaReport, PhiReport};
pub use odd::{verify_odd_question, OddOptions, OddReport, OddStatus};
pub use sweep::{
    run_sweep, run_sweep_detailed, wilson_interval, ExperimentConfig, SweepRow, SweepTable, TrialRecord,
    WILSON_Z,
};
pub use verify::{verify_cayley_no_stacking, CayleyReport, VerificationStatus};

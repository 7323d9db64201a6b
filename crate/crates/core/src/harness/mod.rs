//! Experiment drivers and their reports.

mod bessel_check;
mod bound;
mod convergence;
mod ensemble;
mod fit;
mod radial;
mod ratio;

pub use bessel_check::{bessel_identity_check, circle_transform, BesselIdentityReport, CIRCLE_NODES};
pub use bound::{band_constant, predicted_bound_c, summed_bound};
pub use convergence::{convergence_study, ConvergenceRow, ConvergenceTable};
pub use ensemble::TrialEnsemble;
pub use fit::{Comparison, DecayFitReport};
pub use radial::{bochner_riesz_radial_integral, piece_norm_slope, radial_lp_norm, sphere_area};
pub use ratio::{norm_ratio_estimate, RatioStats};

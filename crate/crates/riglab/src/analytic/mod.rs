//! Limiting laws and asymptotic constants of the intersection graph model:
//! mixed Poisson intensities, the size-biased severity, the compound Poisson
//! degree limit with its mixture over vertex weights, the joint degree-degree
//! limits in both ratio regimes, power-law tail predictions, and
//! total-variation utilities.

mod asymptote;
mod compound;
mod intensity;
mod joint;
mod pmf;
mod tv;

pub use asymptote::{asymptote, AsymptoteInputs, AsymptotePrediction, TailRegime};
pub use compound::{compound_poisson_pmf, dstar_pmf, q_seq};
pub use intensity::{
    lambda0_spec, lambda1_spec, lambda3_spec, lambda_specs, mean_lambda0, mean_lambda3,
    mixed_poisson_pmf, tau_pmf, IntensitySpec, LambdaSpecs,
};
pub use joint::{
    clustering_limit, common_neighbor_limit_pmf, degree_transition_matrix, p_beta_joint,
    p_infty_joint, tilde_pmf, TransitionMatrix,
};
pub use pmf::{JointPmf, Pmf, QSeq};
pub use tv::{
    lecam_check, tv_distance, tv_distance_joint, tv_distance_joint_padded, tv_distance_padded,
    LeCamCheck, TvEstimate,
};

use thiserror::Error;

use crate::weights::WeightError;

#[derive(Debug, Error)]
pub enum AnalyticError {
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("mean must be positive, got {0}")]
    ZeroMean(f64),
    #[error("rate must be non-negative, got {0}")]
    NegativeRate(f64),
    #[error("scale must be non-negative, got {0}")]
    NegativeScale(f64),
    #[error("required moment is infinite: {0}")]
    InfiniteMoment(String),
    #[error("operation invoked outside its regime hypothesis: {0}")]
    UnsupportedRegime(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("poisson-binomial check limited to 30 terms, got {0}")]
    TooManyTerms(usize),
    #[error("joint pmf has no mass")]
    EmptyJoint,
    #[error("probability out of [0, 1]: {0}")]
    InvalidProbability(f64),
}

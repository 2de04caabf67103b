//! Joint degree-degree limits `p_beta` and `p_infty`, the size-biased
//! marginal, the clustering limit, and the degree-indexed transition matrix.

use crate::weights::Moments;

use super::pmf::{JointPmf, Pmf, QSeq};
use super::AnalyticError;

fn finite(value: f64, name: &str) -> Result<f64, AnalyticError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(AnalyticError::InfiniteMoment(name.into()))
    }
}

/// Joint degree-degree limit in the beta regime:
/// `p_beta(k1,k2) = beta/(b1^4 a2) * sum_r (r+1)(r+2) P(Lambda_0 = r+2)
///  q_{k1-r} q_{k2-r}`, summed over `r <= min(k1,k2)`.
///
/// Symmetry is exact by construction (each pair is computed once and
/// mirrored).
pub fn p_beta_joint(
    lambda0: &Pmf,
    q: &QSeq,
    moments: &Moments,
    k_max: usize,
) -> Result<JointPmf, AnalyticError> {
    let beta = moments.beta.finite().filter(|b| *b > 0.0).ok_or_else(|| {
        AnalyticError::UnsupportedRegime("p_beta requires beta in (0, inf)".into())
    })?;
    let a2 = finite(moments.a2, "a2")?;
    let b1 = finite(moments.b1, "b1")?;
    if !(a2 > 0.0 && b1 > 0.0) {
        return Err(AnalyticError::ZeroMean(a2.min(b1)));
    }
    if lambda0.probs.len() < k_max + 3 {
        return Err(AnalyticError::ShapeMismatch(format!(
            "lambda0 pmf needs at least {} entries for k_max {k_max}, got {}",
            k_max + 3,
            lambda0.probs.len()
        )));
    }
    if q.q.len() < k_max + 1 {
        return Err(AnalyticError::ShapeMismatch(format!(
            "q sequence needs at least {} entries for k_max {k_max}, got {}",
            k_max + 1,
            q.q.len()
        )));
    }
    let prefactor = beta / (b1.powi(4) * a2);
    let mut rows = vec![vec![0.0; k_max + 1]; k_max + 1];
    #[allow(clippy::needless_range_loop)] // k1 also addresses the mirror cell
    for k1 in 0..=k_max {
        for k2 in k1..=k_max {
            let mut s = 0.0;
            for r in 0..=k1 {
                s += (r as f64 + 1.0)
                    * (r as f64 + 2.0)
                    * lambda0.probs[r + 2]
                    * q.q[k1 - r]
                    * q.q[k2 - r];
            }
            let v = prefactor * s;
            rows[k1][k2] = v;
            rows[k2][k1] = v;
        }
    }
    let core: f64 = rows.iter().map(|r| r.iter().sum::<f64>()).sum();
    Ok(JointPmf::new(rows, (1.0 - core).max(0.0), "p_beta"))
}

/// Size-biased degree marginal in the infinity regime:
/// `p_tilde(r) = r P(Lambda_3 = r) / E Lambda_3`, supported on `r >= 1`.
pub fn tilde_pmf(lambda3: &Pmf, mean_lambda3: f64) -> Result<Pmf, AnalyticError> {
    if mean_lambda3.is_nan() || mean_lambda3 <= 0.0 {
        return Err(AnalyticError::ZeroMean(mean_lambda3));
    }
    let mut probs = vec![0.0; lambda3.probs.len()];
    for (r, p) in probs.iter_mut().enumerate().skip(1) {
        *p = r as f64 * lambda3.get(r) / mean_lambda3;
    }
    let residual = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    Ok(Pmf::new(probs, residual, "p_tilde"))
}

/// Joint degree-degree limit in the infinity regime:
/// `p_infty(k1,k2) = p_tilde(k1+1) p_tilde(k2+1)` (product form: degrees of
/// adjacent vertices decouple when the clustering coefficient vanishes).
pub fn p_infty_joint(
    lambda3: &Pmf,
    mean_lambda3: f64,
    k_max: usize,
) -> Result<JointPmf, AnalyticError> {
    if lambda3.probs.len() < k_max + 2 {
        return Err(AnalyticError::ShapeMismatch(format!(
            "lambda3 pmf needs at least {} entries for k_max {k_max}, got {}",
            k_max + 2,
            lambda3.probs.len()
        )));
    }
    let tilde = tilde_pmf(lambda3, mean_lambda3)?;
    let mut rows = vec![vec![0.0; k_max + 1]; k_max + 1];
    for (k1, row) in rows.iter_mut().enumerate() {
        for (k2, v) in row.iter_mut().enumerate() {
            *v = tilde.get(k1 + 1) * tilde.get(k2 + 1);
        }
    }
    let core: f64 = rows.iter().map(|r| r.iter().sum::<f64>()).sum();
    Ok(JointPmf::new(rows, (1.0 - core).max(0.0), "p_infty"))
}

/// The limit of the common-neighbor count of the endpoints of an edge:
/// masses proportional to `(r+1)(r+2) P(Lambda_0 = r+2)`, normalised by
/// `E lambda_0^2 = a2 b1^2 / beta`.
pub fn common_neighbor_limit_pmf(lambda0: &Pmf, moments: &Moments) -> Result<Pmf, AnalyticError> {
    let beta = moments.beta.finite().filter(|b| *b > 0.0).ok_or_else(|| {
        AnalyticError::UnsupportedRegime("common-neighbor limit requires finite beta".into())
    })?;
    let a2 = finite(moments.a2, "a2")?;
    let b1 = finite(moments.b1, "b1")?;
    if !(a2 > 0.0 && b1 > 0.0) {
        return Err(AnalyticError::ZeroMean(a2.min(b1)));
    }
    let norm = a2 * b1 * b1 / beta;
    let r_max = lambda0.r_max().saturating_sub(2);
    let mut probs = vec![0.0; r_max + 1];
    for (r, p) in probs.iter_mut().enumerate() {
        *p = (r as f64 + 1.0) * (r as f64 + 2.0) * lambda0.get(r + 2) / norm;
    }
    let residual = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    Ok(Pmf::new(probs, residual, "common_neighbors"))
}

/// Clustering limit `kappa / (kappa + sqrt(beta))` with
/// `kappa = b1 b2^-1 a3 a2^-2`.
pub fn clustering_limit(moments: &Moments) -> Result<f64, AnalyticError> {
    let beta = moments.beta.finite().filter(|b| *b > 0.0).ok_or_else(|| {
        AnalyticError::UnsupportedRegime("clustering limit requires beta in (0, inf)".into())
    })?;
    let a2 = finite(moments.a2, "a2")?;
    let a3 = finite(moments.a3, "a3")?;
    let b1 = finite(moments.b1, "b1")?;
    let b2 = finite(moments.b2, "b2")?;
    if !(a2 > 0.0 && b2 > 0.0) {
        return Err(AnalyticError::ZeroMean(a2.min(b2)));
    }
    let kappa = b1 / b2 * a3 / (a2 * a2);
    Ok(kappa / (kappa + beta.sqrt()))
}

/// Row-stochastic transition matrix of the degree-indexed random walk.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    /// Degree states with positive row mass, in increasing order.
    pub states: Vec<usize>,
    /// `rows[i][l]` = P(next degree-index = l | current = states[i]).
    pub rows: Vec<Vec<f64>>,
    /// Degree indices dropped for lack of mass.
    pub dropped: Vec<usize>,
}

pub fn degree_transition_matrix(joint: &JointPmf) -> Result<TransitionMatrix, AnalyticError> {
    let mut states = Vec::new();
    let mut rows = Vec::new();
    let mut dropped = Vec::new();
    for (k, row) in joint.rows.iter().enumerate() {
        let mass: f64 = row.iter().sum();
        if mass > 0.0 {
            states.push(k);
            rows.push(row.iter().map(|p| p / mass).collect());
        } else {
            dropped.push(k);
        }
    }
    if states.is_empty() {
        return Err(AnalyticError::EmptyJoint);
    }
    Ok(TransitionMatrix {
        states,
        rows,
        dropped,
    })
}

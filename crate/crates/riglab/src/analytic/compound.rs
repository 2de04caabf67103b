//! Compound Poisson laws via Panjer recursion, the degree limit
//! `d* = sum_{j<=Lambda_1} tau_j` as a mixture over the vertex weight, and
//! the weighted sequence `q_r = E(Y P(d*_Y = r))`.

use crate::weights::{GBound, WeightSpec};

use super::pmf::{Pmf, QSeq};
use super::AnalyticError;

/// Effective rates beyond this leave no representable mass below any
/// realistic truncation; the whole row is exactly zero in f64.
const PANJER_UNDERFLOW_LN: f64 = 745.0;

/// Panjer recursion for a Poisson count with mean `rate` and severity pmf
/// `f`: `g_0 = exp(-rate (1 - f_0))`, `g_k = (rate/k) sum_j j f_j g_{k-j}`.
pub(crate) fn panjer_into(rate: f64, severity: &[f64], out: &mut [f64]) {
    out.fill(0.0);
    if out.is_empty() {
        return;
    }
    if rate == 0.0 {
        out[0] = 1.0;
        return;
    }
    let f0 = severity.first().copied().unwrap_or(0.0);
    let effective = rate * (1.0 - f0);
    if effective > PANJER_UNDERFLOW_LN {
        return;
    }
    out[0] = (-effective).exp();
    let r_max = out.len() - 1;
    for k in 1..=r_max {
        let j_hi = k.min(severity.len().saturating_sub(1));
        let mut s = 0.0;
        for j in 1..=j_hi {
            s += j as f64 * severity[j] * out[k - j];
        }
        out[k] = rate / k as f64 * s;
    }
}

/// Compound Poisson pmf on `0..=r_max` for a Poisson number of i.i.d.
/// severities.
pub fn compound_poisson_pmf(rate: f64, severity: &Pmf, r_max: usize) -> Result<Pmf, AnalyticError> {
    if rate < 0.0 || !rate.is_finite() {
        return Err(AnalyticError::NegativeRate(rate));
    }
    let mut probs = vec![0.0; r_max + 1];
    panjer_into(rate, &severity.probs, &mut probs);
    let residual = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    Ok(Pmf::new(
        probs,
        residual,
        format!("compound_poisson(rate={rate})"),
    ))
}

/// Limit law of the vertex degree in the beta regime:
/// `P(d* = r) = E_Y[ P(CP(Y a1 sqrt(beta), tau) = r) ]`.
pub fn dstar_pmf(
    p2: &WeightSpec,
    tau: &Pmf,
    a1: f64,
    beta: f64,
    r_max: usize,
    tol: f64,
) -> Result<Pmf, AnalyticError> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(AnalyticError::UnsupportedRegime(format!(
            "d* requires beta in (0, inf), got {beta}"
        )));
    }
    if !a1.is_finite() {
        return Err(AnalyticError::InfiniteMoment("a1".into()));
    }
    let rate_per_y = a1 * beta.sqrt();
    let (probs, _err) = p2.expect_vec(
        r_max + 1,
        |y, out| panjer_into(y * rate_per_y, &tau.probs, out),
        GBound::Unit,
        tol,
    )?;
    let residual = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    Ok(Pmf::new(probs, residual, "dstar"))
}

/// The weight sequence `q_r = E(Y P(d*_Y = r))`; `sum_r q_r = E Y = b1`.
pub fn q_seq(
    p2: &WeightSpec,
    tau: &Pmf,
    a1: f64,
    beta: f64,
    r_max: usize,
    tol: f64,
) -> Result<QSeq, AnalyticError> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(AnalyticError::UnsupportedRegime(format!(
            "q_r requires beta in (0, inf), got {beta}"
        )));
    }
    let b1 = p2.moment(1)?;
    let rate_per_y = a1 * beta.sqrt();
    let (q, _err) = p2.expect_vec(
        r_max + 1,
        |y, out| {
            panjer_into(y * rate_per_y, &tau.probs, out);
            for v in out.iter_mut() {
                *v *= y;
            }
        },
        GBound::Identity,
        tol,
    )?;
    let residual = (b1 - q.iter().sum::<f64>()).max(0.0);
    Ok(QSeq::new(q, residual))
}

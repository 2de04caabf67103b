//! Power-law tail predictions: constants and exponents for the degree limit,
//! the severity tail, the weight sequence `q_r`, and the joint laws at large
//! degrees.

use serde::Serialize;

use crate::weights::{Moments, WeightSpec};

use super::intensity::IntensitySpec;
use super::pmf::QSeq;
use super::AnalyticError;

/// Which asymptotic statement is being instantiated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailRegime {
    /// `P(d* = r) ~ c b1^{k-1} beta^{(3-k)/2} r^{1-k}` (heavy X, light Y).
    Remark0I,
    /// `P(d* = r) ~ c (x^2 b1)^{k-1} r^{-k}` (degenerate X, heavy Y).
    Remark0II,
    /// `p_infty(k1,k2) ~ c^2 a2^{2k-4} b1^{2k-6} (k1 k2)^{1-k}`.
    Cor1I,
    /// `p_beta(k1,k2) ~ pref * c1* c2* k1^{2-k} (k2-k1)^{1-k}`, gap growing.
    Cor1IIFar,
    /// `p_beta(k1,k1+gap) ~ pref * c1* c3gap* k1^{2-k}`, gap fixed.
    Cor1IINear(usize),
    /// `p_beta(k1,k2) ~ c^2 x^{4k-8} b1^{2k-6} (k1 k2)^{1-k}` (degenerate X).
    Cor1III,
    /// `P(Lambda_Z > t) ~ c_Z t^{-k}` (tail preservation).
    Lemma3Tail,
    /// `P(Lambda_Z = r) ~ c_Z r^{-k}` (local preservation).
    Lemma3Local,
    /// `P(tau = r) ~ c a1^{-1} (b1 beta^{-1/2})^{k-2} r^{1-k}`.
    TauTail,
    /// `q_r ~ c b1^{k-2} b2 beta^{(3-k)/2} r^{1-k}`.
    QTail,
}

impl TailRegime {
    pub fn name(&self) -> String {
        match self {
            TailRegime::Remark0I => "remark0_i".into(),
            TailRegime::Remark0II => "remark0_ii".into(),
            TailRegime::Cor1I => "cor1_i".into(),
            TailRegime::Cor1IIFar => "cor1_ii_far".into(),
            TailRegime::Cor1IINear(k) => format!("cor1_ii_near({k})"),
            TailRegime::Cor1III => "cor1_iii".into(),
            TailRegime::Lemma3Tail => "lemma3_tail".into(),
            TailRegime::Lemma3Local => "lemma3_local".into(),
            TailRegime::TauTail => "tau_tail".into(),
            TailRegime::QTail => "q_tail".into(),
        }
    }
}

/// `constant * r^exponent`, or `constant * k1^exponent * k2^exponent2` for
/// two-axis regimes (for the product-form regimes the single exponent
/// applies to the product `k1 * k2`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptotePrediction {
    pub regime: String,
    pub constant: f64,
    pub exponent: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent2: Option<f64>,
    /// Truncation error bar on the constant, where one applies (near branch).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_bar: Option<f64>,
}

impl AsymptotePrediction {
    /// Evaluate a one-axis prediction at `r`.
    pub fn at(&self, r: f64) -> f64 {
        self.constant * r.powf(self.exponent)
    }

    /// Evaluate a two-axis prediction; for product-form regimes pass
    /// `(k1, k2)` and the exponent applies to their product.
    pub fn at2(&self, k1: f64, k2: f64) -> f64 {
        match self.exponent2 {
            Some(e2) => self.constant * k1.powf(self.exponent) * (k2 - k1).powf(e2),
            None => self.constant * (k1 * k2).powf(self.exponent),
        }
    }
}

/// Everything a tail prediction might need; unused fields may stay `None`.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoteInputs<'a> {
    pub p1: &'a WeightSpec,
    pub p2: &'a WeightSpec,
    pub moments: &'a Moments,
    pub q: Option<&'a QSeq>,
    pub intensity: Option<&'a IntensitySpec>,
}

fn heavy(spec: &WeightSpec, side: &str) -> Result<(f64, f64), AnalyticError> {
    spec.power_tail().ok_or_else(|| {
        AnalyticError::UnsupportedRegime(format!(
            "{side} must have a power-law tail for this regime"
        ))
    })
}

fn light(spec: &WeightSpec, side: &str) -> Result<(), AnalyticError> {
    if spec.has_exponential_moment() {
        Ok(())
    } else {
        Err(AnalyticError::UnsupportedRegime(format!(
            "{side} must have a finite exponential moment for this regime"
        )))
    }
}

fn degenerate_value(spec: &WeightSpec, side: &str) -> Result<f64, AnalyticError> {
    match spec {
        WeightSpec::Degenerate { value } => Ok(*value),
        _ => Err(AnalyticError::UnsupportedRegime(format!(
            "{side} must be degenerate for this regime"
        ))),
    }
}

fn finite(v: f64, name: &str) -> Result<f64, AnalyticError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(AnalyticError::InfiniteMoment(name.into()))
    }
}

fn finite_beta(m: &Moments) -> Result<f64, AnalyticError> {
    m.beta.finite().filter(|b| *b > 0.0).ok_or_else(|| {
        AnalyticError::UnsupportedRegime("this regime requires beta in (0, inf)".into())
    })
}

pub fn asymptote(
    regime: TailRegime,
    inputs: &AsymptoteInputs,
) -> Result<AsymptotePrediction, AnalyticError> {
    let m = inputs.moments;
    let make = |constant: f64, exponent: f64| AsymptotePrediction {
        regime: regime.name(),
        constant,
        exponent,
        exponent2: None,
        error_bar: None,
    };
    match regime {
        TailRegime::Remark0I => {
            let (c, k) = heavy(inputs.p1, "P1")?;
            light(inputs.p2, "P2")?;
            let beta = finite_beta(m)?;
            let b1 = finite(m.b1, "b1")?;
            Ok(make(
                c * b1.powf(k - 1.0) * beta.powf((3.0 - k) / 2.0),
                1.0 - k,
            ))
        }
        TailRegime::Remark0II => {
            let x = degenerate_value(inputs.p1, "P1")?;
            let (c, k) = heavy(inputs.p2, "P2")?;
            finite_beta(m)?;
            let b1 = finite(m.b1, "b1")?;
            Ok(make(c * (x * x * b1).powf(k - 1.0), -k))
        }
        TailRegime::Cor1I => {
            if m.beta != crate::weights::BetaRegime::Infinite {
                return Err(AnalyticError::UnsupportedRegime(
                    "cor1_i describes the m/n -> infinity regime".into(),
                ));
            }
            let (c, k) = heavy(inputs.p2, "P2")?;
            let a2 = finite(m.a2, "a2")?;
            let b1 = finite(m.b1, "b1")?;
            Ok(make(
                c * c * a2.powf(2.0 * k - 4.0) * b1.powf(2.0 * k - 6.0),
                1.0 - k,
            ))
        }
        TailRegime::Cor1IIFar | TailRegime::Cor1IINear(_) => {
            let (c, k) = heavy(inputs.p1, "P1")?;
            light(inputs.p2, "P2")?;
            let beta = finite_beta(m)?;
            let a2 = finite(m.a2, "a2")?;
            let b1 = finite(m.b1, "b1")?;
            let b2 = finite(m.b2, "b2")?;
            let prefactor = beta / (b1.powi(4) * a2);
            let c1 = c * (b1 / beta.sqrt()).powf(k - 1.0);
            match regime {
                TailRegime::Cor1IIFar => {
                    let c2 = c * b1.powf(k - 2.0) * b2 * beta.powf((3.0 - k) / 2.0);
                    Ok(AsymptotePrediction {
                        regime: regime.name(),
                        constant: prefactor * c1 * c2,
                        exponent: 2.0 - k,
                        exponent2: Some(1.0 - k),
                        error_bar: None,
                    })
                }
                TailRegime::Cor1IINear(gap) => {
                    let q = inputs.q.ok_or_else(|| {
                        AnalyticError::UnsupportedRegime("cor1_ii_near needs the q sequence".into())
                    })?;
                    let mut c3 = 0.0;
                    for i in 0..q.q.len().saturating_sub(gap) {
                        c3 += q.q[i] * q.q[i + gap];
                    }
                    // tail bound from the fitted envelope q_r <= C r^{1-k}
                    let fit_from = (q.q.len() / 4).max(10);
                    let envelope =
                        q.q.iter()
                            .enumerate()
                            .skip(fit_from)
                            .map(|(r, v)| v * (r as f64).powf(k - 1.0))
                            .fold(0.0f64, f64::max);
                    let i0 = q.q.len().saturating_sub(gap).max(2) as f64;
                    let tail = envelope * envelope * i0.powf(3.0 - 2.0 * k) / (2.0 * k - 3.0);
                    Ok(AsymptotePrediction {
                        regime: regime.name(),
                        constant: prefactor * c1 * c3,
                        exponent: 2.0 - k,
                        exponent2: None,
                        error_bar: Some(prefactor * c1 * tail),
                    })
                }
                _ => unreachable!(),
            }
        }
        TailRegime::Cor1III => {
            let x = degenerate_value(inputs.p1, "P1")?;
            let (c, k) = heavy(inputs.p2, "P2")?;
            finite_beta(m)?;
            let b1 = finite(m.b1, "b1")?;
            Ok(make(
                c * c * x.powf(4.0 * k - 8.0) * b1.powf(2.0 * k - 6.0),
                1.0 - k,
            ))
        }
        TailRegime::Lemma3Tail | TailRegime::Lemma3Local => {
            let intensity = inputs.intensity.ok_or_else(|| {
                AnalyticError::UnsupportedRegime("lemma3 regimes need an intensity".into())
            })?;
            let (c_z, k) = intensity.power_tail().ok_or_else(|| {
                AnalyticError::UnsupportedRegime("lemma3 regimes need a power-law mixer".into())
            })?;
            Ok(make(c_z, -k))
        }
        TailRegime::TauTail => {
            let (c, k) = heavy(inputs.p1, "P1")?;
            let beta = finite_beta(m)?;
            let a1 = finite(m.a1, "a1")?;
            let b1 = finite(m.b1, "b1")?;
            Ok(make(c / a1 * (b1 / beta.sqrt()).powf(k - 2.0), 1.0 - k))
        }
        TailRegime::QTail => {
            let (c, k) = heavy(inputs.p1, "P1")?;
            light(inputs.p2, "P2")?;
            let beta = finite_beta(m)?;
            let b1 = finite(m.b1, "b1")?;
            let b2 = finite(m.b2, "b2")?;
            Ok(make(
                c * b1.powf(k - 2.0) * b2 * beta.powf((3.0 - k) / 2.0),
                1.0 - k,
            ))
        }
    }
}

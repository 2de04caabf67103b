//! Weight laws for attributes (`P1`, weights `X_i`) and vertices (`P2`,
//! weights `Y_j`): closed-form moments, inverse-CDF samplers, and certified
//! expectations `E g(Z)` used by every limiting-law formula.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{gl16, zeta};
use crate::rng::StreamRng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("moment order must be non-negative, got {0}")]
    NegativeOrder(i32),
    #[error("moment of order {order} is infinite for {spec}")]
    InfiniteMoment { order: i32, spec: String },
    #[error("quadrature stalled before tolerance {tol:.3e} (best error bound {best:.3e})")]
    ToleranceNotMet { tol: f64, best: f64 },
    #[error("invalid weight spec: {0}")]
    InvalidSpec(String),
}

/// A one-dimensional non-negative weight law.
///
/// `Pareto` and `DiscretePowerLaw` are the power-law families: their density
/// (resp. pmf) behaves like `c * t^-kappa` with `c` derived from the
/// parameters, never user-supplied. `Exponential` is the designated family
/// with a finite exponential moment. Tail exponents are restricted to
/// `kappa > 2` so the mean is always finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum WeightSpec {
    Degenerate { value: f64 },
    Pareto { t0: f64, kappa: f64 },
    DiscretePowerLaw { kappa: f64 },
    Exponential { rate: f64 },
    FiniteSupport { values: Vec<f64>, probs: Vec<f64> },
}

/// Known envelope for the integrand of an expectation: either `|g| <= 1`
/// or `|g(z)| <= z`. Drives the tail-truncation error bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GBound {
    Unit,
    Identity,
}

const PROB_SUM_TOL: f64 = 1e-12;
/// Default residual mass beyond the quadrature cut: the (1 - 1e-10) quantile.
const DEFAULT_TAIL_MASS: f64 = 1e-10;
const MAX_PANELS: usize = 1 << 14;
const MAX_DISCRETE_TERMS: usize = 1 << 24;

impl WeightSpec {
    pub fn degenerate(value: f64) -> Self {
        WeightSpec::Degenerate { value }
    }

    pub fn pareto(t0: f64, kappa: f64) -> Self {
        WeightSpec::Pareto { t0, kappa }
    }

    pub fn discrete_power_law(kappa: f64) -> Self {
        WeightSpec::DiscretePowerLaw { kappa }
    }

    pub fn exponential(rate: f64) -> Self {
        WeightSpec::Exponential { rate }
    }

    pub fn finite_support(values: Vec<f64>, probs: Vec<f64>) -> Self {
        WeightSpec::FiniteSupport { values, probs }
    }

    pub fn validate(&self) -> Result<(), WeightError> {
        let bad = |msg: String| Err(WeightError::InvalidSpec(msg));
        match self {
            WeightSpec::Degenerate { value } => {
                if !value.is_finite() || *value < 0.0 {
                    return bad(format!("degenerate value {value} must be finite and >= 0"));
                }
            }
            WeightSpec::Pareto { t0, kappa } => {
                if !(*t0 > 0.0 && t0.is_finite()) {
                    return bad(format!("pareto t0 {t0} must be positive"));
                }
                if !(*kappa > 2.0 && kappa.is_finite()) {
                    return bad(format!("pareto kappa {kappa} must be > 2"));
                }
            }
            WeightSpec::DiscretePowerLaw { kappa } => {
                if !(*kappa > 2.0 && kappa.is_finite()) {
                    return bad(format!("discrete power law kappa {kappa} must be > 2"));
                }
            }
            WeightSpec::Exponential { rate } => {
                if !(*rate > 0.0 && rate.is_finite()) {
                    return bad(format!("exponential rate {rate} must be positive"));
                }
            }
            WeightSpec::FiniteSupport { values, probs } => {
                if values.is_empty() || values.len() != probs.len() {
                    return bad(format!(
                        "finite support needs matching non-empty lists, got {} values / {} probs",
                        values.len(),
                        probs.len()
                    ));
                }
                if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return bad("finite support values must be finite and >= 0".into());
                }
                if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
                    return bad("finite support probs must be finite and >= 0".into());
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > PROB_SUM_TOL {
                    return bad(format!("finite support probs sum to {total}, not 1"));
                }
            }
        }
        Ok(())
    }

    /// Exact `E Z^order` in closed form.
    pub fn moment(&self, order: i32) -> Result<f64, WeightError> {
        if order < 0 {
            return Err(WeightError::NegativeOrder(order));
        }
        let k = order as f64;
        let infinite = || WeightError::InfiniteMoment {
            order,
            spec: format!("{self:?}"),
        };
        Ok(match self {
            WeightSpec::Degenerate { value } => value.powi(order),
            WeightSpec::Pareto { t0, kappa } => {
                if *kappa <= k + 1.0 {
                    return Err(infinite());
                }
                (kappa - 1.0) * t0.powi(order) / (kappa - 1.0 - k)
            }
            WeightSpec::DiscretePowerLaw { kappa } => {
                if *kappa <= k + 1.0 {
                    return Err(infinite());
                }
                if order == 0 {
                    1.0
                } else {
                    zeta(kappa - k) / zeta(*kappa)
                }
            }
            WeightSpec::Exponential { rate } => {
                let mut fact = 1.0;
                for i in 1..=order {
                    fact *= i as f64;
                }
                fact / rate.powi(order)
            }
            WeightSpec::FiniteSupport { values, probs } => values
                .iter()
                .zip(probs)
                .map(|(v, p)| p * v.powi(order))
                .sum(),
        })
    }

    /// `E Z^order` with infinite moments mapped to `f64::INFINITY`.
    pub fn moment_or_inf(&self, order: i32) -> f64 {
        match self.moment(order) {
            Ok(v) => v,
            Err(WeightError::InfiniteMoment { .. }) => f64::INFINITY,
            Err(_) => f64::NAN,
        }
    }

    pub fn mean(&self) -> Result<f64, WeightError> {
        self.moment(1)
    }

    /// Quantile transform; `u` must lie in `[0, 1)`.
    pub fn inverse_cdf(&self, u: f64) -> f64 {
        match self {
            WeightSpec::Degenerate { value } => *value,
            WeightSpec::Pareto { t0, kappa } => t0 * (1.0 - u).powf(-1.0 / (kappa - 1.0)),
            WeightSpec::DiscretePowerLaw { kappa } => {
                let norm = zeta(*kappa);
                let mut cum = 0.0;
                let mut r = 1u64;
                loop {
                    cum += (r as f64).powf(-kappa) / norm;
                    if cum > u {
                        return r as f64;
                    }
                    r += 1;
                }
            }
            WeightSpec::Exponential { rate } => -(1.0 - u).ln() / rate,
            WeightSpec::FiniteSupport { values, probs } => {
                let mut cum = 0.0;
                for (v, p) in values.iter().zip(probs) {
                    cum += p;
                    if cum > u {
                        return *v;
                    }
                }
                *values.last().expect("non-empty support")
            }
        }
    }

    /// One i.i.d. draw from the given stream.
    pub fn sample(&self, rng: &mut StreamRng) -> f64 {
        match self {
            WeightSpec::Degenerate { value } => *value,
            _ => self.inverse_cdf(rng.next_f64()),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            WeightSpec::Degenerate { value } => {
                if x >= *value {
                    1.0
                } else {
                    0.0
                }
            }
            WeightSpec::Pareto { t0, kappa } => {
                if x < *t0 {
                    0.0
                } else {
                    1.0 - (t0 / x).powf(kappa - 1.0)
                }
            }
            WeightSpec::DiscretePowerLaw { kappa } => {
                if x < 1.0 {
                    return 0.0;
                }
                let norm = zeta(*kappa);
                let mut cum = 0.0;
                for r in 1..=(x.floor() as u64) {
                    cum += (r as f64).powf(-kappa) / norm;
                }
                cum
            }
            WeightSpec::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    1.0 - (-rate * x).exp()
                }
            }
            WeightSpec::FiniteSupport { values, probs } => values
                .iter()
                .zip(probs)
                .filter(|(v, _)| **v <= x)
                .map(|(_, p)| p)
                .sum(),
        }
    }

    /// Density at `x` for the absolutely continuous variants.
    pub fn density(&self, x: f64) -> Option<f64> {
        match self {
            WeightSpec::Pareto { t0, kappa } => {
                let c = (kappa - 1.0) * t0.powf(kappa - 1.0);
                Some(if x < *t0 { 0.0 } else { c * x.powf(-kappa) })
            }
            WeightSpec::Exponential { rate } => Some(if x < 0.0 {
                0.0
            } else {
                rate * (-rate * x).exp()
            }),
            _ => None,
        }
    }

    /// Point mass at integer `r` for the discrete variants.
    pub fn pmf(&self, r: u64) -> Option<f64> {
        match self {
            WeightSpec::DiscretePowerLaw { kappa } => {
                if r == 0 {
                    Some(0.0)
                } else {
                    Some((r as f64).powf(-kappa) / zeta(*kappa))
                }
            }
            WeightSpec::FiniteSupport { values, probs } => Some(
                values
                    .iter()
                    .zip(probs)
                    .filter(|(v, _)| **v == r as f64)
                    .map(|(_, p)| p)
                    .sum(),
            ),
            WeightSpec::Degenerate { value } => Some(if *value == r as f64 { 1.0 } else { 0.0 }),
            _ => None,
        }
    }

    /// Power-law regularity: `(c, kappa)` such that density/pmf ~ `c t^-kappa`.
    pub fn power_tail(&self) -> Option<(f64, f64)> {
        match self {
            WeightSpec::Pareto { t0, kappa } => {
                Some(((kappa - 1.0) * t0.powf(kappa - 1.0), *kappa))
            }
            WeightSpec::DiscretePowerLaw { kappa } => Some((1.0 / zeta(*kappa), *kappa)),
            _ => None,
        }
    }

    /// Whether `E exp(a Z) < infinity` for some `a > 0`.
    pub fn has_exponential_moment(&self) -> bool {
        matches!(
            self,
            WeightSpec::Degenerate { .. }
                | WeightSpec::Exponential { .. }
                | WeightSpec::FiniteSupport { .. }
        )
    }

    /// Smallest z with tail mass (`Unit`) or tail first moment (`Identity`)
    /// at most `target`.
    fn tail_cut(&self, bound: GBound, target: f64) -> f64 {
        match (self, bound) {
            (WeightSpec::Pareto { t0, kappa }, GBound::Unit) => {
                t0 * target.powf(-1.0 / (kappa - 1.0))
            }
            (WeightSpec::Pareto { t0, kappa }, GBound::Identity) => {
                let c = (kappa - 1.0) * t0.powf(kappa - 1.0);
                (c / ((kappa - 2.0) * target)).powf(1.0 / (kappa - 2.0))
            }
            (WeightSpec::Exponential { rate }, GBound::Unit) => -target.ln() / rate,
            (WeightSpec::Exponential { rate }, GBound::Identity) => {
                let mut z = -target.ln() / rate;
                while (z + 1.0 / rate) * (-rate * z).exp() > target {
                    z *= 2.0;
                }
                z
            }
            _ => f64::INFINITY,
        }
    }

    /// Residual error beyond the cut `z`, under the declared bound on `g`.
    fn tail_excess(&self, bound: GBound, z: f64) -> f64 {
        match (self, bound) {
            (WeightSpec::Pareto { t0, kappa }, GBound::Unit) => (t0 / z).powf(kappa - 1.0),
            (WeightSpec::Pareto { t0, kappa }, GBound::Identity) => {
                let c = (kappa - 1.0) * t0.powf(kappa - 1.0);
                c * z.powf(2.0 - kappa) / (kappa - 2.0)
            }
            (WeightSpec::Exponential { rate }, GBound::Unit) => (-rate * z).exp(),
            (WeightSpec::Exponential { rate }, GBound::Identity) => {
                (z + 1.0 / rate) * (-rate * z).exp()
            }
            _ => 0.0,
        }
    }

    /// Scalar expectation `E g(Z)` with `|g| <= 1`, certified within `tol`.
    pub fn expect<F: Fn(f64) -> f64>(&self, g: F, tol: f64) -> Result<(f64, f64), WeightError> {
        let (v, err) = self.expect_vec(1, |z, out| out[0] = g(z), GBound::Unit, tol)?;
        Ok((v[0], err))
    }

    /// Vector expectation `E g(Z)` for `g: R -> R^dim`, with a certified
    /// sup-norm error bound.
    ///
    /// Finite-support variants are summed exactly. `DiscretePowerLaw` is a
    /// truncated sum with an integral tail bound. Continuous variants use
    /// composite 16-point Gauss–Legendre panels (log-spaced for `Pareto`),
    /// doubling the panel count until the sweep-to-sweep change drops below
    /// `tol / 2`, plus the explicit tail correction at the cut.
    pub fn expect_vec<F: Fn(f64, &mut [f64])>(
        &self,
        dim: usize,
        fill: F,
        bound: GBound,
        tol: f64,
    ) -> Result<(Vec<f64>, f64), WeightError> {
        assert!(tol > 0.0, "tolerance must be positive");
        match self {
            WeightSpec::Degenerate { value } => {
                let mut out = vec![0.0; dim];
                fill(*value, &mut out);
                Ok((out, 0.0))
            }
            WeightSpec::FiniteSupport { values, probs } => {
                let mut out = vec![0.0; dim];
                let mut scratch = vec![0.0; dim];
                for (v, p) in values.iter().zip(probs) {
                    fill(*v, &mut scratch);
                    for (o, s) in out.iter_mut().zip(&scratch) {
                        *o += p * s;
                    }
                }
                Ok((out, 0.0))
            }
            WeightSpec::DiscretePowerLaw { kappa } => {
                let norm = zeta(*kappa);
                let mut out = vec![0.0; dim];
                let mut scratch = vec![0.0; dim];
                let mut r = 1usize;
                loop {
                    let rf = r as f64;
                    let p = rf.powf(-kappa) / norm;
                    fill(rf, &mut scratch);
                    for (o, s) in out.iter_mut().zip(&scratch) {
                        *o += p * s;
                    }
                    let tail = match bound {
                        GBound::Unit => rf.powf(1.0 - kappa) / ((kappa - 1.0) * norm),
                        GBound::Identity => rf.powf(2.0 - kappa) / ((kappa - 2.0) * norm),
                    };
                    if tail <= tol * 0.5 {
                        return Ok((out, tail));
                    }
                    r += 1;
                    if r > MAX_DISCRETE_TERMS {
                        return Err(WeightError::ToleranceNotMet { tol, best: tail });
                    }
                }
            }
            WeightSpec::Pareto { t0, kappa } => {
                let target = (tol * 0.25).min(DEFAULT_TAIL_MASS);
                let z_max = self.tail_cut(bound, target);
                let tail = self.tail_excess(bound, z_max);
                let c = (kappa - 1.0) * t0.powf(kappa - 1.0);
                let kappa = *kappa;
                // log substitution z = e^u: integrand c e^{(1-kappa) u} g(e^u)
                self.panel_integrate(
                    dim,
                    &fill,
                    t0.ln(),
                    z_max.ln(),
                    |u| (u.exp(), c * ((1.0 - kappa) * u).exp()),
                    tol,
                    tail,
                )
            }
            WeightSpec::Exponential { rate } => {
                let target = (tol * 0.25).min(DEFAULT_TAIL_MASS);
                let z_max = self.tail_cut(bound, target);
                let tail = self.tail_excess(bound, z_max);
                let rate = *rate;
                self.panel_integrate(
                    dim,
                    &fill,
                    0.0,
                    z_max,
                    |z| (z, rate * (-rate * z).exp()),
                    tol,
                    tail,
                )
            }
        }
    }

    /// Composite GL-16 over `[lo, hi]` in the mapped coordinate; `node`
    /// returns `(z, density * jacobian)` at a mapped point.
    #[allow(clippy::too_many_arguments)]
    fn panel_integrate<F, M>(
        &self,
        dim: usize,
        fill: &F,
        lo: f64,
        hi: f64,
        node: M,
        tol: f64,
        tail: f64,
    ) -> Result<(Vec<f64>, f64), WeightError>
    where
        F: Fn(f64, &mut [f64]),
        M: Fn(f64) -> (f64, f64),
    {
        let sweep = |panels: usize| -> Vec<f64> {
            let mut acc = vec![0.0; dim];
            let mut scratch = vec![0.0; dim];
            let h = (hi - lo) / panels as f64;
            for p in 0..panels {
                let a = lo + p as f64 * h;
                for &(x, w) in gl16() {
                    let u = a + 0.5 * h * (x + 1.0);
                    let (z, dens) = node(u);
                    fill(z, &mut scratch);
                    let coef = 0.5 * h * w * dens;
                    for (o, s) in acc.iter_mut().zip(&scratch) {
                        *o += coef * s;
                    }
                }
            }
            acc
        };
        let mut panels = 8usize;
        let mut prev = sweep(panels);
        loop {
            panels *= 2;
            let cur = sweep(panels);
            let diff = prev
                .iter()
                .zip(&cur)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            if diff <= tol * 0.5 {
                return Ok((cur, diff + tail));
            }
            if panels >= MAX_PANELS {
                return Err(WeightError::ToleranceNotMet {
                    tol,
                    best: diff + tail,
                });
            }
            prev = cur;
        }
    }
}

/// Regime of the attribute-to-vertex ratio `m/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaRegime {
    Finite(f64),
    Infinite,
    Zero,
}

impl BetaRegime {
    pub fn finite(&self) -> Option<f64> {
        match self {
            BetaRegime::Finite(b) => Some(*b),
            _ => None,
        }
    }
}

/// Moments `a_i = E X^i`, `b_j = E Y^j` plus the limit ratio; infinite
/// moments are carried as `f64::INFINITY` and rejected by the operations
/// that need them finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b1: f64,
    pub b2: f64,
    pub beta: BetaRegime,
}

impl Moments {
    pub fn from_specs(p1: &WeightSpec, p2: &WeightSpec, beta: BetaRegime) -> Self {
        Moments {
            a1: p1.moment_or_inf(1),
            a2: p1.moment_or_inf(2),
            a3: p1.moment_or_inf(3),
            b1: p2.moment_or_inf(1),
            b2: p2.moment_or_inf(2),
            beta,
        }
    }
}

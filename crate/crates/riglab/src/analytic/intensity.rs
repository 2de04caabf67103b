//! Mixed Poisson laws `P(Lambda = r) = E e^{-sZ} (sZ)^r / r!` and the
//! model's five intensities, plus the size-biased severity law.

use crate::numeric::poisson_row_into;
use crate::weights::{GBound, Moments, WeightSpec};

use super::pmf::Pmf;
use super::AnalyticError;

/// A random Poisson intensity `lambda = scale * Z` with `Z ~ mixer`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensitySpec {
    pub mixer: WeightSpec,
    pub scale: f64,
}

impl IntensitySpec {
    pub fn new(mixer: WeightSpec, scale: f64) -> Self {
        IntensitySpec { mixer, scale }
    }

    /// Exact `E lambda` from closed-form moments.
    pub fn mean(&self) -> Result<f64, AnalyticError> {
        Ok(self.scale * self.mixer.mean()?)
    }

    pub fn pmf(&self, r_max: usize, tol: f64) -> Result<Pmf, AnalyticError> {
        mixed_poisson_pmf(&self.mixer, self.scale, r_max, tol)
    }

    /// Power-law constant of the mixed Poisson law: if the mixer has
    /// `A_{c,kappa}` then `P(Lambda = r) ~ c * scale^{kappa-1} * r^-kappa`.
    pub fn power_tail(&self) -> Option<(f64, f64)> {
        let (c, kappa) = self.mixer.power_tail()?;
        Some((c * self.scale.powf(kappa - 1.0), kappa))
    }
}

/// The five intensities of the beta regime: `lambda_0 = X b1 / sqrt(beta)`,
/// `lambda_1 = lambda_2 = Y a1 sqrt(beta)`, `lambda_3 = lambda_4 = Y a2 b1`.
#[derive(Debug, Clone)]
pub struct LambdaSpecs {
    pub l0: IntensitySpec,
    pub l1: IntensitySpec,
    pub l2: IntensitySpec,
    pub l3: IntensitySpec,
    pub l4: IntensitySpec,
}

fn finite_beta(moments: &Moments) -> Result<f64, AnalyticError> {
    moments.beta.finite().filter(|b| *b > 0.0).ok_or_else(|| {
        AnalyticError::UnsupportedRegime("finite positive beta required for this intensity".into())
    })
}

fn finite(value: f64, name: &str) -> Result<f64, AnalyticError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(AnalyticError::InfiniteMoment(name.into()))
    }
}

pub fn lambda0_spec(p1: &WeightSpec, moments: &Moments) -> Result<IntensitySpec, AnalyticError> {
    let beta = finite_beta(moments)?;
    let b1 = finite(moments.b1, "b1")?;
    Ok(IntensitySpec::new(p1.clone(), b1 / beta.sqrt()))
}

pub fn lambda1_spec(p2: &WeightSpec, moments: &Moments) -> Result<IntensitySpec, AnalyticError> {
    let beta = finite_beta(moments)?;
    let a1 = finite(moments.a1, "a1")?;
    Ok(IntensitySpec::new(p2.clone(), a1 * beta.sqrt()))
}

pub fn lambda3_spec(p2: &WeightSpec, moments: &Moments) -> Result<IntensitySpec, AnalyticError> {
    let a2 = finite(moments.a2, "a2")?;
    let b1 = finite(moments.b1, "b1")?;
    Ok(IntensitySpec::new(p2.clone(), a2 * b1))
}

pub fn lambda_specs(
    p1: &WeightSpec,
    p2: &WeightSpec,
    moments: &Moments,
) -> Result<LambdaSpecs, AnalyticError> {
    let l0 = lambda0_spec(p1, moments)?;
    let l1 = lambda1_spec(p2, moments)?;
    let l3 = lambda3_spec(p2, moments)?;
    Ok(LambdaSpecs {
        l0,
        l2: l1.clone(),
        l1,
        l4: l3.clone(),
        l3,
    })
}

/// `E Lambda_0 = a1 b1 / sqrt(beta)`, from closed-form moments.
pub fn mean_lambda0(moments: &Moments) -> Result<f64, AnalyticError> {
    let beta = finite_beta(moments)?;
    Ok(finite(moments.a1, "a1")? * finite(moments.b1, "b1")? / beta.sqrt())
}

/// `E Lambda_3 = a2 b1^2`, from closed-form moments.
pub fn mean_lambda3(moments: &Moments) -> Result<f64, AnalyticError> {
    let a2 = finite(moments.a2, "a2")?;
    let b1 = finite(moments.b1, "b1")?;
    Ok(a2 * b1 * b1)
}

/// Mixed Poisson pmf: `probs[r] = E e^{-sZ} (sZ)^r / r!` for `r <= r_max`,
/// each entry certified within `tol`; residual is the (non-negative) mass
/// beyond the cut.
pub fn mixed_poisson_pmf(
    mixer: &WeightSpec,
    scale: f64,
    r_max: usize,
    tol: f64,
) -> Result<Pmf, AnalyticError> {
    if scale < 0.0 || !scale.is_finite() {
        return Err(AnalyticError::NegativeScale(scale));
    }
    let label = format!("mixed_poisson(scale={scale})");
    if scale == 0.0 {
        return Ok(Pmf::point_mass(0, r_max, label));
    }
    let (probs, _err) = mixer.expect_vec(
        r_max + 1,
        |z, out| poisson_row_into(scale * z, out),
        GBound::Unit,
        tol,
    )?;
    let residual = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    Ok(Pmf::new(probs, residual, label))
}

/// Size-biased, down-shifted law of the witness severity:
/// `P(tau = r) = (r+1) P(Lambda_0 = r+1) / E Lambda_0`.
///
/// The mean must come from closed-form moments, not from the truncated pmf.
pub fn tau_pmf(lambda0: &Pmf, mean_lambda0: f64) -> Result<Pmf, AnalyticError> {
    if mean_lambda0.is_nan() || mean_lambda0 <= 0.0 {
        return Err(AnalyticError::ZeroMean(mean_lambda0));
    }
    let r_max = lambda0.r_max();
    let mut probs = vec![0.0; r_max.max(1)];
    for (r, p) in probs.iter_mut().enumerate() {
        *p = (r as f64 + 1.0) * lambda0.get(r + 1) / mean_lambda0;
    }
    let residual = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    Ok(Pmf::new(probs, residual, "tau"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{ln_gamma, poisson_row};
    use crate::weights::BetaRegime;

    #[test]
    fn degenerate_mixer_is_plain_poisson() {
        let pmf = mixed_poisson_pmf(&WeightSpec::degenerate(1.0), 1.0, 20, 1e-12).unwrap();
        assert!((pmf.get(0) - (-1.0f64).exp()).abs() < 1e-15);
        let direct = poisson_row(1.0, 20);
        for (r, want) in direct.iter().enumerate() {
            assert!((pmf.get(r) - want).abs() < 1e-15, "r={r}");
        }
        assert!(pmf.is_normalized(1e-9));
    }

    #[test]
    fn zero_intensity_mixture_is_point_mass() {
        let mixer = WeightSpec::finite_support(vec![0.0], vec![1.0]);
        let pmf = mixed_poisson_pmf(&mixer, 3.0, 8, 1e-12).unwrap();
        assert_eq!(pmf.get(0), 1.0);
        assert_eq!(pmf.core_mass(), 1.0);
    }

    #[test]
    fn pareto_mixture_matches_riemann_oracle_at_r5() {
        // brute-force fine-grid Riemann integration of
        // int e^-z z^5/5! f(z) dz, f(z) = 2 z^-3 on [1, inf)
        let spec = WeightSpec::pareto(1.0, 3.0);
        let r = 5usize;
        let steps = 2_000_000usize;
        let z_hi = 80.0;
        let h = (z_hi - 1.0) / steps as f64;
        let mut oracle = 0.0;
        for i in 0..steps {
            let z = 1.0 + (i as f64 + 0.5) * h;
            let pois = (-z + (r as f64) * z.ln() - ln_gamma(r as f64 + 1.0)).exp();
            oracle += pois * spec.density(z).unwrap() * h;
        }
        let pmf = mixed_poisson_pmf(&spec, 1.0, 10, 1e-10).unwrap();
        assert!(
            (pmf.get(r) - oracle).abs() < 1e-8,
            "quadrature {} vs oracle {oracle}",
            pmf.get(r)
        );
    }

    #[test]
    fn tau_of_poisson_is_poisson() {
        // size-biasing a Poisson(mu) and shifting down reproduces Poisson(mu)
        let mu = 1.7;
        let lambda0 = mixed_poisson_pmf(&WeightSpec::degenerate(1.0), mu, 40, 1e-12).unwrap();
        let tau = tau_pmf(&lambda0, mu).unwrap();
        let direct = poisson_row(mu, 39);
        for (r, want) in direct.iter().enumerate() {
            assert!((tau.get(r) - want).abs() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn tau_zero_entry_propagates() {
        let lambda0 = Pmf::new(vec![0.7, 0.0, 0.3], 0.0, "l0");
        let tau = tau_pmf(&lambda0, 0.6).unwrap();
        assert_eq!(tau.get(0), 0.0);
    }

    #[test]
    fn tau_normalisation_with_pareto_mixer() {
        let p1 = WeightSpec::pareto(1.0, 3.5);
        let p2 = WeightSpec::degenerate(1.0);
        let m = Moments::from_specs(&p1, &p2, BetaRegime::Finite(1.0));
        let l0 = lambda0_spec(&p1, &m).unwrap();
        // E Z = 2.5/1.5, scale = b1 = 1
        let pmf = l0.pmf(4000, 1e-12).unwrap();
        let tau = tau_pmf(&pmf, mean_lambda0(&m).unwrap()).unwrap();
        let total = tau.core_mass() + tau.residual;
        assert!((total - 1.0).abs() < 1e-8, "total {total}");
    }

    #[test]
    fn tail_mass_is_preserved_for_pareto_mixer() {
        // Pareto(1, 3) has survival P(Z > t) = t^-2; the mixed Poisson
        // keeps the same tail: P(Lambda_Z > t) * t^2 stays near 1
        let pmf = mixed_poisson_pmf(&WeightSpec::pareto(1.0, 3.0), 1.0, 3200, 1e-10).unwrap();
        for t in [200usize, 500, 1000] {
            let survival: f64 = pmf.probs[t + 1..].iter().sum::<f64>() + pmf.residual;
            let ratio = survival * (t as f64) * (t as f64);
            assert!((0.9..=1.1).contains(&ratio), "t={t}: ratio {ratio}");
        }
    }

    #[test]
    fn scaled_integer_mixer_tail() {
        // Z = W/2 with W discrete power law (kappa = 3): the intensity
        // prediction constant is c_W * (1/2)^{kappa-1}
        let mixer = WeightSpec::discrete_power_law(3.0);
        let spec = IntensitySpec::new(mixer, 0.5);
        let (c_pred, kappa) = spec.power_tail().unwrap();
        assert_eq!(kappa, 3.0);
        let pmf = spec.pmf(700, 3e-11).unwrap();
        for r in [300usize, 600] {
            let ratio = pmf.get(r) * (r as f64).powi(3) / c_pred;
            assert!((0.85..=1.15).contains(&ratio), "r={r}: ratio {ratio}");
        }
    }

    #[test]
    fn tau_rejects_zero_mean() {
        let lambda0 = Pmf::new(vec![1.0], 0.0, "l0");
        assert!(matches!(
            tau_pmf(&lambda0, 0.0),
            Err(AnalyticError::ZeroMean(_))
        ));
    }

    #[test]
    fn lambda_specs_match_theorem_scales() {
        let p1 = WeightSpec::degenerate(2.0);
        let p2 = WeightSpec::exponential(1.0);
        let m = Moments::from_specs(&p1, &p2, BetaRegime::Finite(4.0));
        let ls = lambda_specs(&p1, &p2, &m).unwrap();
        assert_eq!(ls.l0.scale, m.b1 / 2.0); // b1 beta^{-1/2}
        assert_eq!(ls.l1.scale, m.a1 * 2.0); // a1 beta^{1/2}
        assert_eq!(ls.l3.scale, m.a2 * m.b1); // a2 b1
        assert_eq!(ls.l1.scale, ls.l2.scale);
        assert_eq!(ls.l3.scale, ls.l4.scale);
        assert!((mean_lambda0(&m).unwrap() - m.a1 * m.b1 / 2.0).abs() < 1e-15);
        assert!((mean_lambda3(&m).unwrap() - m.a2 * m.b1 * m.b1).abs() < 1e-15);
    }

    #[test]
    fn beta_regime_guard() {
        let p1 = WeightSpec::degenerate(1.0);
        let p2 = WeightSpec::degenerate(1.0);
        let m = Moments::from_specs(&p1, &p2, BetaRegime::Infinite);
        assert!(matches!(
            lambda0_spec(&p1, &m),
            Err(AnalyticError::UnsupportedRegime(_))
        ));
        // lambda3 is fine without a finite beta
        assert!(lambda3_spec(&p2, &m).is_ok());
    }
}

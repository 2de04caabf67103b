//! Experiment configuration: JSON schema, defaults, and resolution of the
//! regime growth rule into concrete sizes.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::weights::{BetaRegime, WeightSpec};

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeKind {
    Beta,
    Infinity,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Analytic,
    Simulate,
    Compare,
    Oracle,
    Asymptote,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelConfig {
    pub n: usize,
    #[serde(default)]
    pub m: Option<usize>,
    pub p1: WeightSpec,
    pub p2: WeightSpec,
}

/// Growth rule `m = floor(c * n^gamma)`; `gamma` defaults to 1, 1.5 or 0.5
/// according to the regime kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegimeConfig {
    pub kind: RegimeKind,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default)]
    pub gamma: Option<f64>,
}

fn default_c() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareTolerances {
    #[serde(default = "d_tv")]
    pub degree_tv: f64,
    #[serde(default = "d_tv")]
    pub joint_tv: f64,
    #[serde(default = "d_tv")]
    pub conditioned_tv: f64,
    #[serde(default = "d_tv")]
    pub common_tv: f64,
    #[serde(default = "d_abs")]
    pub clustering_abs: f64,
    #[serde(default = "d_abs")]
    pub assortativity_abs: f64,
    /// Pass threshold for the isolated fraction in the zero regime;
    /// defaults to `1 - 2 sqrt(m/n)`.
    #[serde(default)]
    pub isolated_min: Option<f64>,
}

fn d_tv() -> f64 {
    0.05
}

fn d_abs() -> f64 {
    0.02
}

impl Default for CompareTolerances {
    fn default() -> Self {
        CompareTolerances {
            degree_tv: d_tv(),
            joint_tv: d_tv(),
            conditioned_tv: d_tv(),
            common_tv: d_tv(),
            clustering_abs: d_abs(),
            assortativity_abs: d_abs(),
            isolated_min: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AsymptoteConfig {
    /// Regime names: remark0_i, remark0_ii, cor1_i, cor1_ii_far,
    /// cor1_ii_near, cor1_iii, lemma3_tail, lemma3_local, tau_tail, q_tail.
    pub regimes: Vec<String>,
    /// Gap `k2 - k1` for cor1_ii_near.
    #[serde(default)]
    pub near_gap: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub regime: Option<RegimeConfig>,
    #[serde(default)]
    pub experiment: Option<ExperimentKind>,
    #[serde(default = "d_kmax")]
    pub k_max: usize,
    #[serde(default = "d_rmax")]
    pub r_max: usize,
    #[serde(default = "d_tol")]
    pub tol: f64,
    #[serde(default = "d_one")]
    pub replicas: usize,
    /// 0 means use all available cores.
    #[serde(default)]
    pub threads: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "d_out")]
    pub out: PathBuf,
    /// Guard on `sum_w |S_w|^2` when building the intersection graph.
    #[serde(default = "d_pair_cap")]
    pub pair_cap: u64,
    #[serde(default)]
    pub tolerances: CompareTolerances,
    #[serde(default)]
    pub asymptote: Option<AsymptoteConfig>,
}

fn d_kmax() -> usize {
    30
}

fn d_rmax() -> usize {
    128
}

fn d_tol() -> f64 {
    1e-9
}

fn d_one() -> usize {
    1
}

fn d_out() -> PathBuf {
    PathBuf::from("out")
}

fn d_pair_cap() -> u64 {
    4_000_000_000
}

/// A fully-resolved experiment: sizes fixed, regime decided.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub config: ExperimentConfig,
    pub experiment: ExperimentKind,
    pub kind: RegimeKind,
    pub n: usize,
    pub m: usize,
    pub beta_n: f64,
}

impl ResolvedConfig {
    pub fn beta_regime(&self) -> BetaRegime {
        match self.kind {
            RegimeKind::Beta => BetaRegime::Finite(self.beta_n),
            RegimeKind::Infinity => BetaRegime::Infinite,
            RegimeKind::Zero => BetaRegime::Zero,
        }
    }
}

fn config_err(field: &str, msg: String) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

/// Validate the raw config and fix sizes; `experiment_override` comes from
/// the subcommand and wins over the config's own `experiment` field.
pub fn resolve(
    config: ExperimentConfig,
    experiment_override: Option<ExperimentKind>,
) -> Result<ResolvedConfig, CliError> {
    let n = config.model.n;
    if n < 2 {
        return Err(config_err("model.n", format!("must be >= 2, got {n}")));
    }
    config
        .model
        .p1
        .validate()
        .map_err(|e| config_err("model.p1", e.to_string()))?;
    config
        .model
        .p2
        .validate()
        .map_err(|e| config_err("model.p2", e.to_string()))?;
    if config.replicas < 1 {
        return Err(config_err("replicas", "must be >= 1".into()));
    }
    if config.tol.is_nan() || config.tol <= 0.0 {
        return Err(config_err(
            "tol",
            format!("must be positive, got {}", config.tol),
        ));
    }
    if config.k_max < 1 {
        return Err(config_err("k_max", "must be >= 1".into()));
    }
    let experiment = experiment_override
        .or(config.experiment)
        .ok_or_else(|| config_err("experiment", "missing (set in config or subcommand)".into()))?;

    let (kind, m) = match (&config.regime, config.model.m) {
        (None, None) => {
            return Err(config_err(
                "model.m",
                "either model.m or a regime growth rule is required".into(),
            ))
        }
        (None, Some(m)) => (RegimeKind::Beta, m),
        (Some(regime), maybe_m) => {
            let gamma = regime.gamma.unwrap_or(match regime.kind {
                RegimeKind::Beta => 1.0,
                RegimeKind::Infinity => 1.5,
                RegimeKind::Zero => 0.5,
            });
            let consistent = match regime.kind {
                RegimeKind::Beta => (gamma - 1.0).abs() < 1e-12,
                RegimeKind::Infinity => gamma > 1.0,
                RegimeKind::Zero => gamma < 1.0,
            };
            if !consistent {
                return Err(config_err(
                    "regime.gamma",
                    format!("gamma {gamma} inconsistent with kind {:?}", regime.kind),
                ));
            }
            if regime.c.is_nan() || regime.c <= 0.0 {
                return Err(config_err("regime.c", "must be positive".into()));
            }
            let m = maybe_m
                .unwrap_or_else(|| ((regime.c * (n as f64).powf(gamma)).floor() as usize).max(1));
            (regime.kind, m)
        }
    };
    if m < 1 {
        return Err(config_err("model.m", "must be >= 1".into()));
    }
    let beta_n = m as f64 / n as f64;
    Ok(ResolvedConfig {
        config,
        experiment,
        kind,
        n,
        m,
        beta_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_json() -> serde_json::Value {
        serde_json::json!({
            "model": {
                "n": 100,
                "m": 100,
                "p1": {"variant": "degenerate", "value": 1.0},
                "p2": {"variant": "degenerate", "value": 1.0}
            },
            "experiment": "analytic"
        })
    }

    #[test]
    fn defaults_fill_in() {
        let cfg: ExperimentConfig = serde_json::from_value(base_json()).unwrap();
        assert_eq!(cfg.k_max, 30);
        assert_eq!(cfg.r_max, 128);
        assert_eq!(cfg.replicas, 1);
        let r = resolve(cfg, None).unwrap();
        assert_eq!(r.kind, RegimeKind::Beta);
        assert_eq!(r.m, 100);
        assert!((r.beta_n - 1.0).abs() < 1e-15);
    }

    #[test]
    fn growth_rule_derives_m() {
        let mut v = base_json();
        v["model"]["m"] = serde_json::Value::Null;
        v["regime"] = serde_json::json!({"kind": "infinity", "gamma": 1.5});
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        let r = resolve(cfg, None).unwrap();
        assert_eq!(r.m, 1000); // 100^1.5
        assert_eq!(r.kind, RegimeKind::Infinity);
    }

    #[test]
    fn inconsistent_gamma_rejected() {
        let mut v = base_json();
        v["regime"] = serde_json::json!({"kind": "beta", "gamma": 1.4});
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        let err = resolve(cfg, None).unwrap_err();
        assert!(err.to_string().contains("regime.gamma"), "{err}");
    }

    #[test]
    fn missing_m_and_regime_rejected() {
        let mut v = base_json();
        v["model"]["m"] = serde_json::Value::Null;
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        let err = resolve(cfg, None).unwrap_err();
        assert!(err.to_string().contains("model.m"), "{err}");
    }

    #[test]
    fn subcommand_overrides_experiment() {
        let cfg: ExperimentConfig = serde_json::from_value(base_json()).unwrap();
        let r = resolve(cfg, Some(ExperimentKind::Simulate)).unwrap();
        assert_eq!(r.experiment, ExperimentKind::Simulate);
    }

    #[test]
    fn bad_weight_spec_names_field() {
        let mut v = base_json();
        v["model"]["p1"] = serde_json::json!({"variant": "pareto", "t0": 0.0, "kappa": 3.0});
        let cfg: ExperimentConfig = serde_json::from_value(v).unwrap();
        let err = resolve(cfg, None).unwrap_err();
        assert!(err.to_string().contains("model.p1"), "{err}");
    }
}

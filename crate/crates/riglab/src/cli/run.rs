//! Experiment orchestration: analytic computations, replica-parallel
//! simulation, empirical-vs-analytic comparison, the exact oracle, and tail
//! predictions. All outputs are deterministic for a fixed config and seed.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{
    asymptote, clustering_limit, common_neighbor_limit_pmf, dstar_pmf, lambda0_spec, lambda3_spec,
    mean_lambda0, mean_lambda3, p_beta_joint, p_infty_joint, q_seq, tau_pmf, tilde_pmf,
    tv_distance_joint_padded, tv_distance_padded, AsymptoteInputs, AsymptotePrediction,
    IntensitySpec, JointPmf, Pmf, QSeq, TailRegime,
};
use crate::genmodel::{
    build_intersection, conditional_joint_mc, enumerate_exact, generate_fast, ModelParams,
};
use crate::rng::{derive_seed, StreamKind};
use crate::stats::EmpiricalReport;
use crate::weights::{Moments, WeightSpec};

use super::config::{ExperimentKind, RegimeKind, ResolvedConfig};
use super::CliError;

/// Exit code signalling a tolerance failure in a compare run.
pub const EXIT_TOLERANCE: i32 = 2;

/// All analytic objects of the beta regime at one parameter point.
pub struct BetaLaws {
    pub moments: Moments,
    pub lambda0: Pmf,
    pub tau: Pmf,
    pub dstar: Pmf,
    pub q: QSeq,
    pub p_beta: JointPmf,
    pub common: Pmf,
    pub clustering: Option<f64>,
}

/// Build every beta-regime law: `Lambda_0`, `tau`, `d*`, `q`, `p_beta`, the
/// common-neighbor limit, and the clustering limit (when third moments
/// exist).
pub fn beta_laws(
    p1: &WeightSpec,
    p2: &WeightSpec,
    beta: f64,
    k_max: usize,
    r_max: usize,
    tol: f64,
) -> Result<BetaLaws, CliError> {
    let moments = Moments::from_specs(p1, p2, crate::weights::BetaRegime::Finite(beta));
    let r_max = r_max.max(k_max + 2);
    let lambda0 = lambda0_spec(p1, &moments)?.pmf(r_max, tol)?;
    let tau = tau_pmf(&lambda0, mean_lambda0(&moments)?)?;
    let dstar = dstar_pmf(p2, &tau, moments.a1, beta, r_max, tol)?;
    let q = q_seq(p2, &tau, moments.a1, beta, r_max.saturating_sub(1), tol)?;
    let p_beta = p_beta_joint(&lambda0, &q, &moments, k_max)?;
    let common = common_neighbor_limit_pmf(&lambda0, &moments)?;
    let clustering = clustering_limit(&moments).ok();
    Ok(BetaLaws {
        moments,
        lambda0,
        tau,
        dstar,
        q,
        p_beta,
        common,
        clustering,
    })
}

/// Analytic objects of the infinity regime.
pub struct InftyLaws {
    pub moments: Moments,
    pub lambda3: Pmf,
    pub tilde: Pmf,
    pub p_infty: JointPmf,
}

pub fn infty_laws(
    p1: &WeightSpec,
    p2: &WeightSpec,
    k_max: usize,
    r_max: usize,
    tol: f64,
) -> Result<InftyLaws, CliError> {
    let moments = Moments::from_specs(p1, p2, crate::weights::BetaRegime::Infinite);
    let r_max = r_max.max(k_max + 1);
    let lambda3 = lambda3_spec(p2, &moments)?.pmf(r_max, tol)?;
    let mean = mean_lambda3(&moments)?;
    let tilde = tilde_pmf(&lambda3, mean)?;
    let p_infty = p_infty_joint(&lambda3, mean, k_max)?;
    Ok(InftyLaws {
        moments,
        lambda3,
        tilde,
        p_infty,
    })
}

/// Run `replicas` independent graphs (fast generator) and merge the reports
/// in replica order. Deterministic for fixed seed regardless of thread count.
pub fn simulate_pooled(
    n: usize,
    m: usize,
    p1: &WeightSpec,
    p2: &WeightSpec,
    seed: u64,
    replicas: usize,
    pair_cap: u64,
) -> Result<EmpiricalReport, CliError> {
    let reports: Vec<EmpiricalReport> = (0..replicas)
        .into_par_iter()
        .map(|r| -> Result<EmpiricalReport, CliError> {
            let params = ModelParams {
                n,
                m,
                p1: p1.clone(),
                p2: p2.clone(),
                seed: derive_seed(seed, StreamKind::Replica, r as u64),
            };
            let incidence = generate_fast(&params)?;
            let view = build_intersection(&incidence, pair_cap as u128)?;
            Ok(EmpiricalReport::from_view(&view))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut pooled = EmpiricalReport::default();
    for rep in &reports {
        pooled.merge(rep);
    }
    Ok(pooled)
}

fn write_file(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub quantity: String,
    pub empirical: f64,
    pub analytic: f64,
    pub tv_or_ratio: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn write_comparison_csv(path: &Path, rows: &[CompareRow]) -> Result<(), CliError> {
    write_file(path, |w| {
        writeln!(w, "quantity,empirical,analytic,tv_or_ratio,tolerance,pass")?;
        for r in rows {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.quantity, r.empirical, r.analytic, r.tv_or_ratio, r.tolerance, r.pass
            )?;
        }
        Ok(())
    })
}

#[derive(Serialize)]
struct AnalyticSummary<'a> {
    config: &'a super::config::ExperimentConfig,
    regime: RegimeKind,
    n: usize,
    m: usize,
    beta_n: f64,
    clustering_limit: Option<f64>,
    dstar_residual: Option<f64>,
    p_beta_residual: Option<f64>,
    p_infty_residual: Option<f64>,
    q_core_sum: Option<f64>,
}

fn run_analytic(rc: &ResolvedConfig, out: &Path) -> Result<i32, CliError> {
    let cfg = &rc.config;
    match rc.kind {
        RegimeKind::Beta => {
            let laws = beta_laws(
                &cfg.model.p1,
                &cfg.model.p2,
                rc.beta_n,
                cfg.k_max,
                cfg.r_max,
                cfg.tol,
            )?;
            write_file(&out.join("lambda0.csv"), |w| laws.lambda0.write_csv(w))?;
            write_file(&out.join("tau.csv"), |w| laws.tau.write_csv(w))?;
            write_file(&out.join("dstar.csv"), |w| laws.dstar.write_csv(w))?;
            write_file(&out.join("q_seq.csv"), |w| {
                writeln!(w, "r,prob")?;
                for (r, v) in laws.q.q.iter().enumerate() {
                    writeln!(w, "{r},{v}")?;
                }
                Ok(())
            })?;
            write_file(&out.join("p_beta.csv"), |w| laws.p_beta.write_csv(w))?;
            write_file(&out.join("common_limit.csv"), |w| laws.common.write_csv(w))?;
            write_json(
                &out.join("analytic.json"),
                &AnalyticSummary {
                    config: cfg,
                    regime: rc.kind,
                    n: rc.n,
                    m: rc.m,
                    beta_n: rc.beta_n,
                    clustering_limit: laws.clustering,
                    dstar_residual: Some(laws.dstar.residual),
                    p_beta_residual: Some(laws.p_beta.residual),
                    p_infty_residual: None,
                    q_core_sum: Some(laws.q.core_sum()),
                },
            )?;
        }
        RegimeKind::Infinity => {
            let laws = infty_laws(&cfg.model.p1, &cfg.model.p2, cfg.k_max, cfg.r_max, cfg.tol)?;
            write_file(&out.join("lambda3.csv"), |w| laws.lambda3.write_csv(w))?;
            write_file(&out.join("p_tilde.csv"), |w| laws.tilde.write_csv(w))?;
            write_file(&out.join("p_infty.csv"), |w| laws.p_infty.write_csv(w))?;
            write_json(
                &out.join("analytic.json"),
                &AnalyticSummary {
                    config: cfg,
                    regime: rc.kind,
                    n: rc.n,
                    m: rc.m,
                    beta_n: rc.beta_n,
                    clustering_limit: None,
                    dstar_residual: None,
                    p_beta_residual: None,
                    p_infty_residual: Some(laws.p_infty.residual),
                    q_core_sum: None,
                },
            )?;
        }
        RegimeKind::Zero => {
            return Err(CliError::RegimeMismatch(
                "no analytic limit law to compute in the zero regime \
                 (almost all vertices are isolated)"
                    .into(),
            ));
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct SimulateSummary<'a> {
    config: &'a super::config::ExperimentConfig,
    regime: RegimeKind,
    n: usize,
    m: usize,
    beta_n: f64,
    report: crate::stats::ReportSummary,
}

fn write_simulation_outputs(
    rc: &ResolvedConfig,
    out: &Path,
    pooled: &EmpiricalReport,
) -> Result<(), CliError> {
    write_file(&out.join("degree.csv"), |w| {
        pooled.degree_pmf().write_csv(w)
    })?;
    if let Ok(joint) = pooled.edge_joint() {
        write_file(&out.join("edge_joint.csv"), |w| joint.write_csv(w))?;
    }
    if let Ok(pmf) = pooled.common_neighbor_pmf() {
        write_file(&out.join("common.csv"), |w| pmf.write_csv(w))?;
    }
    if let Ok(pmf) = pooled.conditioned_degree_pmf() {
        write_file(&out.join("conditioned.csv"), |w| pmf.write_csv(w))?;
    }
    write_json(
        &out.join("report.json"),
        &SimulateSummary {
            config: &rc.config,
            regime: rc.kind,
            n: rc.n,
            m: rc.m,
            beta_n: rc.beta_n,
            report: pooled.summary(),
        },
    )?;
    Ok(())
}

fn run_simulate(rc: &ResolvedConfig, out: &Path) -> Result<i32, CliError> {
    let cfg = &rc.config;
    let pooled = simulate_pooled(
        rc.n,
        rc.m,
        &cfg.model.p1,
        &cfg.model.p2,
        cfg.seed,
        cfg.replicas,
        cfg.pair_cap,
    )?;
    write_simulation_outputs(rc, out, &pooled)?;
    Ok(0)
}

#[derive(Serialize)]
struct CompareSummary<'a> {
    config: &'a super::config::ExperimentConfig,
    regime: RegimeKind,
    n: usize,
    m: usize,
    beta_n: f64,
    rows: Vec<CompareRow>,
    all_pass: bool,
}

fn run_compare(rc: &ResolvedConfig, out: &Path) -> Result<i32, CliError> {
    let cfg = &rc.config;
    let tols = &cfg.tolerances;
    let pooled = simulate_pooled(
        rc.n,
        rc.m,
        &cfg.model.p1,
        &cfg.model.p2,
        cfg.seed,
        cfg.replicas,
        cfg.pair_cap,
    )?;
    write_simulation_outputs(rc, out, &pooled)?;
    let mut rows: Vec<CompareRow> = Vec::new();
    match rc.kind {
        RegimeKind::Beta => {
            let laws = beta_laws(
                &cfg.model.p1,
                &cfg.model.p2,
                rc.beta_n,
                cfg.k_max,
                cfg.r_max,
                cfg.tol,
            )?;
            write_file(&out.join("dstar.csv"), |w| laws.dstar.write_csv(w))?;
            write_file(&out.join("p_beta.csv"), |w| laws.p_beta.write_csv(w))?;
            let emp_deg = pooled.degree_pmf();
            let tv = tv_distance_padded(&emp_deg, &laws.dstar);
            rows.push(CompareRow {
                quantity: "degree_tv".into(),
                empirical: emp_deg.core_mass(),
                analytic: laws.dstar.core_mass(),
                tv_or_ratio: tv.upper,
                tolerance: tols.degree_tv,
                pass: tv.upper <= tols.degree_tv,
            });
            if let Ok(emp_joint) = pooled.edge_joint() {
                let tv = tv_distance_joint_padded(&emp_joint.cropped(cfg.k_max), &laws.p_beta);
                rows.push(CompareRow {
                    quantity: "joint_tv".into(),
                    empirical: emp_joint.core_mass(),
                    analytic: laws.p_beta.core_mass(),
                    tv_or_ratio: tv.upper,
                    tolerance: tols.joint_tv,
                    pass: tv.upper <= tols.joint_tv,
                });
            }
            if let Ok(emp_common) = pooled.common_neighbor_pmf() {
                let tv = tv_distance_padded(&emp_common, &laws.common);
                rows.push(CompareRow {
                    quantity: "common_tv".into(),
                    empirical: emp_common.core_mass(),
                    analytic: laws.common.core_mass(),
                    tv_or_ratio: tv.upper,
                    tolerance: tols.common_tv,
                    pass: tv.upper <= tols.common_tv,
                });
            }
            if let (Ok((emp_c, _)), Some(limit)) = (pooled.clustering(), laws.clustering) {
                let diff = (emp_c - limit).abs();
                rows.push(CompareRow {
                    quantity: "clustering_abs".into(),
                    empirical: emp_c,
                    analytic: limit,
                    tv_or_ratio: diff,
                    tolerance: tols.clustering_abs,
                    pass: diff <= tols.clustering_abs,
                });
            }
            if let Ok(r) = pooled.assortativity() {
                // the beta regime predicts positive degree correlation
                rows.push(CompareRow {
                    quantity: "assortativity_sign".into(),
                    empirical: r,
                    analytic: 0.0,
                    tv_or_ratio: r,
                    tolerance: 0.0,
                    pass: r > 0.0,
                });
            }
        }
        RegimeKind::Infinity => {
            let laws = infty_laws(&cfg.model.p1, &cfg.model.p2, cfg.k_max, cfg.r_max, cfg.tol)?;
            write_file(&out.join("lambda3.csv"), |w| laws.lambda3.write_csv(w))?;
            write_file(&out.join("p_tilde.csv"), |w| laws.tilde.write_csv(w))?;
            write_file(&out.join("p_infty.csv"), |w| laws.p_infty.write_csv(w))?;
            let emp_deg = pooled.degree_pmf();
            let tv = tv_distance_padded(&emp_deg, &laws.lambda3);
            rows.push(CompareRow {
                quantity: "degree_tv".into(),
                empirical: emp_deg.core_mass(),
                analytic: laws.lambda3.core_mass(),
                tv_or_ratio: tv.upper,
                tolerance: tols.degree_tv,
                pass: tv.upper <= tols.degree_tv,
            });
            if let Ok(emp_joint) = pooled.edge_joint() {
                let tv = tv_distance_joint_padded(&emp_joint.cropped(cfg.k_max), &laws.p_infty);
                rows.push(CompareRow {
                    quantity: "joint_tv".into(),
                    empirical: emp_joint.core_mass(),
                    analytic: laws.p_infty.core_mass(),
                    tv_or_ratio: tv.upper,
                    tolerance: tols.joint_tv,
                    pass: tv.upper <= tols.joint_tv,
                });
            }
            if let Ok(emp_cond) = pooled.conditioned_degree_pmf() {
                let tv = tv_distance_padded(&emp_cond, &laws.tilde);
                rows.push(CompareRow {
                    quantity: "conditioned_tv".into(),
                    empirical: emp_cond.core_mass(),
                    analytic: laws.tilde.core_mass(),
                    tv_or_ratio: tv.upper,
                    tolerance: tols.conditioned_tv,
                    pass: tv.upper <= tols.conditioned_tv,
                });
            }
            if let Ok(r) = pooled.assortativity() {
                let diff = r.abs();
                rows.push(CompareRow {
                    quantity: "assortativity_abs".into(),
                    empirical: r,
                    analytic: 0.0,
                    tv_or_ratio: diff,
                    tolerance: tols.assortativity_abs,
                    pass: diff <= tols.assortativity_abs,
                });
            }
        }
        RegimeKind::Zero => {
            let threshold = tols
                .isolated_min
                .unwrap_or_else(|| 1.0 - 2.0 * rc.beta_n.sqrt());
            let frac = pooled.isolated_fraction();
            rows.push(CompareRow {
                quantity: "isolated_min".into(),
                empirical: frac,
                analytic: 1.0,
                tv_or_ratio: frac,
                tolerance: threshold,
                pass: frac >= threshold,
            });
        }
    }
    let all_pass = rows.iter().all(|r| r.pass);
    write_comparison_csv(&out.join("comparison.csv"), &rows)?;
    write_json(
        &out.join("summary.json"),
        &CompareSummary {
            config: cfg,
            regime: rc.kind,
            n: rc.n,
            m: rc.m,
            beta_n: rc.beta_n,
            rows,
            all_pass,
        },
    )?;
    Ok(if all_pass { 0 } else { EXIT_TOLERANCE })
}

#[derive(Serialize)]
struct OracleSummary<'a> {
    config: &'a super::config::ExperimentConfig,
    n: usize,
    m: usize,
    p_adjacent: f64,
    clustering_cond: Option<f64>,
    mc_replicas: usize,
    mc_p_adjacent: Option<f64>,
    mc_joint_tv: Option<f64>,
}

fn run_oracle(rc: &ResolvedConfig, out: &Path) -> Result<i32, CliError> {
    let cfg = &rc.config;
    let law = enumerate_exact(rc.n, rc.m, &cfg.model.p1, &cfg.model.p2, 10_000_000)?;
    write_file(&out.join("exact_joint.csv"), |w| {
        law.joint_given_edge.write_csv(w)
    })?;
    write_file(&out.join("exact_degree.csv"), |w| {
        law.degree_pmf.write_csv(w)
    })?;
    let (mc_p, mc_tv) = if cfg.replicas > 1 {
        let params = ModelParams {
            n: rc.n,
            m: rc.m,
            p1: cfg.model.p1.clone(),
            p2: cfg.model.p2.clone(),
            seed: cfg.seed,
        };
        let (mc_joint, p_hat) = conditional_joint_mc(&params, cfg.replicas)?;
        let tv = tv_distance_joint_padded(&law.joint_given_edge, &mc_joint);
        write_file(&out.join("mc_joint.csv"), |w| mc_joint.write_csv(w))?;
        (Some(p_hat), Some(tv.core))
    } else {
        (None, None)
    };
    write_json(
        &out.join("oracle.json"),
        &OracleSummary {
            config: cfg,
            n: rc.n,
            m: rc.m,
            p_adjacent: law.p_adjacent,
            clustering_cond: law.clustering_cond,
            mc_replicas: cfg.replicas,
            mc_p_adjacent: mc_p,
            mc_joint_tv: mc_tv,
        },
    )?;
    Ok(0)
}

fn parse_regime(name: &str, near_gap: usize) -> Result<TailRegime, CliError> {
    Ok(match name {
        "remark0_i" => TailRegime::Remark0I,
        "remark0_ii" => TailRegime::Remark0II,
        "cor1_i" => TailRegime::Cor1I,
        "cor1_ii_far" => TailRegime::Cor1IIFar,
        "cor1_ii_near" => TailRegime::Cor1IINear(near_gap),
        "cor1_iii" => TailRegime::Cor1III,
        "lemma3_tail" => TailRegime::Lemma3Tail,
        "lemma3_local" => TailRegime::Lemma3Local,
        "tau_tail" => TailRegime::TauTail,
        "q_tail" => TailRegime::QTail,
        other => {
            return Err(CliError::Config(format!(
                "asymptote.regimes: unknown regime '{other}'"
            )))
        }
    })
}

fn run_asymptote(rc: &ResolvedConfig, out: &Path) -> Result<i32, CliError> {
    let cfg = &rc.config;
    let spec = cfg.asymptote.as_ref().ok_or_else(|| {
        CliError::Config("asymptote: section required for this experiment".into())
    })?;
    let moments = Moments::from_specs(&cfg.model.p1, &cfg.model.p2, rc.beta_regime());
    // q is only needed by the near branch; build it lazily
    let needs_q = spec.regimes.iter().any(|r| r == "cor1_ii_near");
    let q_owned = if needs_q {
        let laws = beta_laws(
            &cfg.model.p1,
            &cfg.model.p2,
            rc.beta_n,
            cfg.k_max,
            cfg.r_max,
            cfg.tol,
        )?;
        Some(laws.q)
    } else {
        None
    };
    let intensity_owned: Option<IntensitySpec> = lambda3_spec(&cfg.model.p2, &moments).ok();
    let mut predictions: Vec<AsymptotePrediction> = Vec::new();
    for name in &spec.regimes {
        let regime = parse_regime(name, spec.near_gap)?;
        let inputs = AsymptoteInputs {
            p1: &cfg.model.p1,
            p2: &cfg.model.p2,
            moments: &moments,
            q: q_owned.as_ref(),
            intensity: intensity_owned.as_ref(),
        };
        let pred = asymptote(regime, &inputs)
            .map_err(|e| CliError::RegimeMismatch(format!("{name}: {e}")))?;
        predictions.push(pred);
    }
    write_json(&out.join("asymptotes.json"), &predictions)?;
    Ok(0)
}

/// Execute a resolved experiment; returns the process exit code.
pub fn run(rc: &ResolvedConfig) -> Result<i32, CliError> {
    let out = rc.config.out.clone();
    fs::create_dir_all(&out)?;
    let threads = if rc.config.threads == 0 {
        std::thread::available_parallelism()
            .map(|c| c.get())
            .unwrap_or(1)
    } else {
        rc.config.threads
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    eprintln!(
        "riglab: experiment={:?} regime={:?} n={} m={} replicas={} seed={} threads={threads}",
        rc.experiment, rc.kind, rc.n, rc.m, rc.config.replicas, rc.config.seed
    );
    pool.install(|| match rc.experiment {
        ExperimentKind::Analytic => run_analytic(rc, &out),
        ExperimentKind::Simulate => run_simulate(rc, &out),
        ExperimentKind::Compare => run_compare(rc, &out),
        ExperimentKind::Oracle => run_oracle(rc, &out),
        ExperimentKind::Asymptote => run_asymptote(rc, &out),
    })
}

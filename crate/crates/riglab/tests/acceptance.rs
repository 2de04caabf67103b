//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! The model's published results are asymptotic limit theorems, so the gate
//! combines exact oracle equivalence, analytic identities, and convergence
//! experiments at fixed sizes with pinned tolerances.

use std::sync::OnceLock;
use std::time::Instant;

use riglab::analytic::{
    asymptote, compound_poisson_pmf, lambda0_spec, lecam_check, mean_lambda0, mixed_poisson_pmf,
    p_infty_joint, tau_pmf, tv_distance_joint_padded, tv_distance_padded, AsymptoteInputs, Pmf,
    TailRegime,
};
use riglab::cli::{beta_laws, infty_laws, simulate_pooled, BetaLaws, InftyLaws};
use riglab::genmodel::{conditional_joint_mc, enumerate_exact, ModelParams};
use riglab::numeric::poisson_row;
use riglab::rng::{StreamKind, StreamRng};
use riglab::stats::{tail_slope_fit, EmpiricalReport};
use riglab::weights::{BetaRegime, Moments, WeightSpec};

fn unit() -> WeightSpec {
    WeightSpec::degenerate(1.0)
}

fn pass(line: &str) {
    println!("{line}");
}

// ---------------------------------------------------------------- fixtures

/// Unit-weight beta-regime runs pooled per size, replicas scaled as 1/n so
/// the sampling noise is comparable across sizes.
fn beta_pooled() -> &'static Vec<(usize, EmpiricalReport)> {
    static POOL: OnceLock<Vec<(usize, EmpiricalReport)>> = OnceLock::new();
    POOL.get_or_init(|| {
        [(1_000usize, 2_000usize), (10_000, 200), (100_000, 20)]
            .iter()
            .map(|&(n, reps)| {
                let pooled =
                    simulate_pooled(n, n, &unit(), &unit(), 0xBE7A + n as u64, reps, 1 << 40)
                        .expect("simulation");
                (n, pooled)
            })
            .collect()
    })
}

fn beta_unit_laws() -> &'static BetaLaws {
    static LAWS: OnceLock<BetaLaws> = OnceLock::new();
    LAWS.get_or_init(|| beta_laws(&unit(), &unit(), 1.0, 30, 80, 1e-12).expect("beta laws"))
}

/// The m = n^1.5 regime: n = 1e4, m = 1e6, Pareto X (kappa 4), Exponential Y.
struct InftyFixture {
    pooled: EmpiricalReport,
    laws: InftyLaws,
}

fn infty_fixture() -> &'static InftyFixture {
    static FIX: OnceLock<InftyFixture> = OnceLock::new();
    FIX.get_or_init(|| {
        let n = 10_000usize;
        let m = 1_000_000usize; // n^1.5
        let p1 = WeightSpec::pareto(1.0, 4.0);
        let p2 = WeightSpec::exponential(1.0);
        let pooled = simulate_pooled(n, m, &p1, &p2, 0x1F1F, 128, 1 << 40).expect("simulation");
        let laws = infty_laws(&p1, &p2, 40, 96, 1e-12).expect("infty laws");
        InftyFixture { pooled, laws }
    })
}

// ---------------------------------------------------------------- criteria

#[test]
fn criterion_01_oracle_equivalence() {
    let start = Instant::now();
    let law = enumerate_exact(3, 2, &unit(), &unit(), 10_000_000).unwrap();
    let params = ModelParams {
        n: 3,
        m: 2,
        p1: unit(),
        p2: unit(),
        seed: 0x0AC1E,
    };
    let (mc, p_adj_hat) = conditional_joint_mc(&params, 1_000_000).unwrap();
    let tv = tv_distance_joint_padded(&law.joint_given_edge, &mc).core;
    let elapsed = start.elapsed();
    assert!(tv <= 0.01, "criterion 01 FAIL: tv {tv} > 0.01");
    assert!(
        elapsed.as_secs() < 120,
        "criterion 01 FAIL: runtime {elapsed:?} >= 2 min"
    );
    pass(&format!(
        "criterion 01 oracle equivalence: PASS (tv={tv:.5}, p_adj exact={:.5} mc={:.5}, {:.1?})",
        law.p_adjacent, p_adj_hat, elapsed
    ));
}

#[test]
fn criterion_02_theorem2i_joint_convergence() {
    let start = Instant::now();
    let laws = beta_unit_laws();
    let mut tvs = Vec::new();
    for (n, pooled) in beta_pooled() {
        let emp = pooled.edge_joint().unwrap().cropped(30);
        let tv = tv_distance_joint_padded(&emp, &laws.p_beta).upper;
        tvs.push((*n, tv));
    }
    let elapsed = start.elapsed();
    let last = tvs.last().unwrap().1;
    assert!(
        last <= 0.05,
        "criterion 02 FAIL: tv at n=1e5 is {last} > 0.05"
    );
    for w in tvs.windows(2) {
        assert!(
            w[1].1 <= w[0].1 + 0.005,
            "criterion 02 FAIL: tv not decreasing: {tvs:?}"
        );
    }
    assert!(
        elapsed.as_secs() < 600,
        "criterion 02 FAIL: runtime {elapsed:?} >= 10 min"
    );
    pass(&format!(
        "criterion 02 theorem 2(i) p_beta convergence: PASS (tv={tvs:?}, {elapsed:.1?})"
    ));
}

#[test]
fn criterion_03_theorem2ii_joint_and_independence() {
    let fix = infty_fixture();
    let emp = fix.pooled.edge_joint().unwrap().cropped(40);
    let tv = tv_distance_joint_padded(&emp, &fix.laws.p_infty).upper;
    let r = fix.pooled.assortativity().unwrap();
    let tv_ok = tv <= 0.05;
    let r_ok = r.abs() <= 0.02;
    pass(&format!(
        "criterion 03 theorem 2(ii): joint tv={tv:.4} (bound 0.05 -> {}), \
         assortativity={r:.4} (bound 0.02 -> {})",
        if tv_ok { "ok" } else { "FAIL" },
        if r_ok { "ok" } else { "FAIL" },
    ));
    // Known red at the pinned size (see the decisions ledger): with
    // Pareto(kappa = 4) attribute weights E X^3 is infinite, so the
    // size-biased weight of the shared witness has a log-divergent mean.
    // The finite-size degree correlation decays like n^{-1/4} with log
    // corrections (measured 0.24 at n = 2.5e3, 0.15 at n = 1e4, while the
    // estimator reproduces the analytic p_beta correlation to 3 decimals in
    // the beta regime), and the joint TV bias sits at 0.051-0.054 across
    // seeds at 256 replicas, dropping to 0.045 by n = 2e4.
    assert!(
        tv_ok && r_ok,
        "criterion 03 FAIL at n=1e4, m=n^1.5, Pareto(4) X, Exponential Y: \
         joint tv {tv:.4} (bound 0.05), |assortativity| {:.4} (bound 0.02); \
         both deviations are intrinsic finite-size bias at the pinned size, \
         not estimator error — see the decisions ledger",
        r.abs()
    );
}

#[test]
fn criterion_04_theorem1i_degree_pmf() {
    let pooled = &beta_pooled().iter().find(|(n, _)| *n == 100_000).unwrap().1;
    let laws = beta_unit_laws();
    let tv = tv_distance_padded(&pooled.degree_pmf(), &laws.dstar).upper;
    assert!(tv <= 0.02, "criterion 04 FAIL: degree tv {tv} > 0.02");
    pass(&format!(
        "criterion 04 theorem 1(i) degree law: PASS (tv={tv:.4})"
    ));
}

#[test]
fn criterion_05_theorem1iii_isolation() {
    let mut fractions = Vec::new();
    for &n in &[10_000usize, 100_000, 1_000_000] {
        let m = (n as f64).sqrt().floor() as usize;
        let pooled = simulate_pooled(n, m, &unit(), &unit(), 0x150 + n as u64, 3, 1 << 40).unwrap();
        let frac = pooled.isolated_fraction();
        let lower = 1.0 - 2.0 * (m as f64 / n as f64).sqrt();
        assert!(
            frac >= lower,
            "criterion 05 FAIL: isolated {frac} below the 1 - 2 sqrt(m/n) bound {lower}"
        );
        fractions.push((n, frac));
    }
    let last = fractions.last().unwrap().1;
    assert!(
        last >= 0.95,
        "criterion 05 FAIL: isolated fraction {last} < 0.95 at n=1e6"
    );
    for w in fractions.windows(2) {
        assert!(
            w[1].1 > w[0].1,
            "criterion 05 FAIL: isolation not increasing: {fractions:?}"
        );
    }
    pass(&format!(
        "criterion 05 theorem 1(iii) isolation: PASS ({fractions:?})"
    ));
}

#[test]
fn criterion_06_clustering_limit() {
    let pooled = simulate_pooled(10_000, 10_000, &unit(), &unit(), 0xC1, 20, 1 << 40).unwrap();
    let (c, paths) = pooled.clustering().unwrap();
    assert!(
        (c - 0.5).abs() <= 0.02,
        "criterion 06 FAIL: clustering {c} not within 0.02 of 0.5"
    );
    pass(&format!(
        "criterion 06 clustering limit: PASS (estimate={c:.4} over {paths} paths, limit 0.5)"
    ));
}

#[test]
fn criterion_07_remark1_conditioned_degree() {
    let fix = infty_fixture();
    let emp = fix.pooled.conditioned_degree_pmf().unwrap();
    let tv = tv_distance_padded(&emp, &fix.laws.tilde).upper;
    assert!(tv <= 0.05, "criterion 07 FAIL: conditioned tv {tv} > 0.05");
    pass(&format!(
        "criterion 07 remark 1 size-biased marginal: PASS (tv={tv:.4})"
    ));
}

#[test]
fn criterion_08_analytic_identities() {
    let start = Instant::now();
    // p_beta symmetry and total mass at a deep truncation
    let laws = beta_laws(&unit(), &unit(), 1.0, 60, 100, 1e-12).unwrap();
    assert_eq!(
        laws.p_beta.max_asymmetry(),
        0.0,
        "criterion 08 FAIL: p_beta asymmetric"
    );
    let total = laws.p_beta.core_mass() + laws.p_beta.residual;
    assert!(
        (total - 1.0).abs() <= 1e-6 && laws.p_beta.residual <= 1e-6,
        "criterion 08 FAIL: p_beta mass {total}, residual {}",
        laws.p_beta.residual
    );
    // q normalisation against the closed-form first moment
    let qsum = laws.q.core_sum() + laws.q.residual;
    assert!(
        (qsum - laws.moments.b1).abs() <= 1e-6,
        "criterion 08 FAIL: sum q {qsum} vs b1 {}",
        laws.moments.b1
    );
    // Panjer vs direct convolution
    let sev = Pmf::new(vec![0.2, 0.5, 0.3], 0.0, "sev");
    let cp = compound_poisson_pmf(0.7, &sev, 50).unwrap();
    let oracle = convolution_oracle(0.7, &sev.probs, 50, 60);
    let max_diff = cp
        .probs
        .iter()
        .zip(&oracle)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(
        max_diff <= 1e-12,
        "criterion 08 FAIL: panjer diff {max_diff}"
    );
    // LeCam: exact TV below the sum-of-squares bound on 100 random cases
    let mut rng = StreamRng::new(0x1eca, StreamKind::Misc, 0);
    for case in 0..100 {
        let len = 1 + (rng.next_u64() % 30) as usize;
        let ps: Vec<f64> = (0..len).map(|_| rng.next_f64()).collect();
        let check = lecam_check(&ps).unwrap();
        assert!(
            check.exact_tv <= check.bound + 1e-12,
            "criterion 08 FAIL: lecam case {case}: {} > {}",
            check.exact_tv,
            check.bound
        );
    }
    pass(&format!(
        "criterion 08 analytic identities: PASS (panjer diff {max_diff:.2e}, {:.1?})",
        start.elapsed()
    ));
}

#[test]
fn criterion_09_lemma3_local_quadrature() {
    // Pareto Z(t0=1, kappa=3) has density 2 t^-3, so c = 2
    let z = WeightSpec::pareto(1.0, 3.0);
    let pmf = mixed_poisson_pmf(&z, 1.0, 1050, 1e-12).unwrap();
    let mut ratios = Vec::new();
    for r in [200usize, 500, 1000] {
        let ratio = (r as f64).powi(3) * pmf.get(r) / 2.0;
        assert!(
            (0.9..=1.1).contains(&ratio),
            "criterion 09 FAIL: r={r} ratio {ratio} outside [0.9, 1.1]"
        );
        ratios.push((r, ratio));
    }
    pass(&format!(
        "criterion 09 lemma 3(ii) local tail: PASS ({ratios:?})"
    ));
}

#[test]
fn criterion_10_cor1i_joint_tail() {
    let p1 = unit();
    let p2 = WeightSpec::pareto(1.0, 3.5);
    let m = Moments::from_specs(&p1, &p2, BetaRegime::Infinite);
    let spec = riglab::analytic::lambda3_spec(&p2, &m).unwrap();
    let l3 = spec.pmf(260, 1e-13).unwrap();
    let mean = riglab::analytic::mean_lambda3(&m).unwrap();
    let joint = p_infty_joint(&l3, mean, 210).unwrap();
    let inputs = AsymptoteInputs {
        p1: &p1,
        p2: &p2,
        moments: &m,
        q: None,
        intensity: None,
    };
    let pred = asymptote(TailRegime::Cor1I, &inputs).unwrap();
    let k = 200usize;
    let ratio = joint.get(k, k) / pred.at2(k as f64, k as f64);
    assert!(
        (0.85..=1.15).contains(&ratio),
        "criterion 10 FAIL: ratio {ratio} outside [0.85, 1.15] at k={k}"
    );
    pass(&format!(
        "criterion 10 corollary 1(i) p_infty tail: PASS (ratio={ratio:.4})"
    ));
}

#[test]
fn criterion_11_remark0ii_dstar_tail() {
    // X = 1, Y Pareto(1, 3), beta = 1: constant c (x^2 b1)^{kappa-1} = 8
    let p1 = unit();
    let p2 = WeightSpec::pareto(1.0, 3.0);
    let m = Moments::from_specs(&p1, &p2, BetaRegime::Finite(1.0));
    let l0 = lambda0_spec(&p1, &m).unwrap().pmf(380, 1e-12).unwrap();
    let tau = tau_pmf(&l0, mean_lambda0(&m).unwrap()).unwrap();
    let d = riglab::analytic::dstar_pmf(&p2, &tau, m.a1, 1.0, 330, 1e-11).unwrap();
    let inputs = AsymptoteInputs {
        p1: &p1,
        p2: &p2,
        moments: &m,
        q: None,
        intensity: None,
    };
    let pred = asymptote(TailRegime::Remark0II, &inputs).unwrap();
    assert!((pred.constant - 8.0).abs() < 1e-12);
    let r = 300usize;
    let ratio = d.get(r) / pred.at(r as f64);
    assert!(
        (0.85..=1.15).contains(&ratio),
        "criterion 11 FAIL: ratio {ratio} outside [0.85, 1.15] at r={r}"
    );
    pass(&format!(
        "criterion 11 remark 0(ii) d* tail: PASS (ratio={ratio:.4})"
    ));
}

#[test]
fn criterion_12_lambda3_tail_slope() {
    let p1 = unit();
    let p2 = WeightSpec::pareto(1.0, 3.5);
    let m = Moments::from_specs(&p1, &p2, BetaRegime::Infinite);
    let l3 = riglab::analytic::lambda3_spec(&p2, &m)
        .unwrap()
        .pmf(520, 1e-13)
        .unwrap();
    let (slope, se) = tail_slope_fit(&l3, 50, 500).unwrap();
    assert!(
        (slope + 3.5).abs() <= 0.15,
        "criterion 12 FAIL: slope {slope} not within 0.15 of -3.5"
    );
    pass(&format!(
        "criterion 12 mixed-poisson tail slope: PASS (slope={slope:.4} se={se:.1e})"
    ));
}

#[test]
fn criterion_13_generator_equivalence_and_scale() {
    let start = Instant::now();
    let n = 10_000usize;
    let reps = 100usize;
    let mut naive_counts = vec![0u64; 64];
    let mut fast_counts = vec![0u64; 64];
    for r in 0..reps {
        let pn = ModelParams {
            n,
            m: n,
            p1: unit(),
            p2: unit(),
            seed: riglab::rng::derive_seed(1301, StreamKind::Replica, r as u64),
        };
        let pf = ModelParams {
            seed: riglab::rng::derive_seed(1302, StreamKind::Replica, r as u64),
            ..pn.clone()
        };
        let vn = riglab::genmodel::build_intersection(
            &riglab::genmodel::generate_naive(&pn).unwrap(),
            1 << 40,
        )
        .unwrap();
        let vf = riglab::genmodel::build_intersection(
            &riglab::genmodel::generate_fast(&pf).unwrap(),
            1 << 40,
        )
        .unwrap();
        for d in vn.degrees() {
            naive_counts[d.min(63)] += 1;
        }
        for d in vf.degrees() {
            fast_counts[d.min(63)] += 1;
        }
    }
    let tv = tv_distance_padded(
        &Pmf::from_counts(&naive_counts, "naive"),
        &Pmf::from_counts(&fast_counts, "fast"),
    )
    .core;
    assert!(tv <= 0.01, "criterion 13 FAIL: naive/fast tv {tv} > 0.01");
    let equiv_elapsed = start.elapsed();

    let big_start = Instant::now();
    let params = ModelParams {
        n: 1_000_000,
        m: 1_000_000,
        p1: unit(),
        p2: unit(),
        seed: 77,
    };
    let inc = riglab::genmodel::generate_fast(&params).unwrap();
    let view = riglab::genmodel::build_intersection(&inc, 1 << 40).unwrap();
    let big_elapsed = big_start.elapsed();
    assert!(
        big_elapsed.as_secs() < 60,
        "criterion 13 FAIL: n=m=1e6 took {big_elapsed:?} >= 60 s"
    );
    pass(&format!(
        "criterion 13 generator equivalence + scale: PASS (tv={tv:.4} in {equiv_elapsed:.1?}; \
         n=1e6 fast run {big_elapsed:.1?}, {} edges)",
        view.edge_count()
    ));
}

// direct-convolution oracle for criterion 08
#[allow(clippy::needless_range_loop)] // n walks the Poisson weight row
fn convolution_oracle(rate: f64, f: &[f64], r_max: usize, n_cut: usize) -> Vec<f64> {
    let weights = poisson_row(rate, n_cut);
    let mut acc = vec![0.0; r_max + 1];
    let mut conv = vec![0.0; r_max + 1];
    conv[0] = 1.0;
    acc[0] += weights[0];
    for n in 1..=n_cut {
        let mut next = vec![0.0; r_max + 1];
        for (i, &ci) in conv.iter().enumerate() {
            if ci == 0.0 {
                continue;
            }
            for (j, &fj) in f.iter().enumerate() {
                if i + j <= r_max {
                    next[i + j] += ci * fj;
                }
            }
        }
        conv = next;
        for (a, c) in acc.iter_mut().zip(&conv) {
            *a += weights[n] * c;
        }
    }
    acc
}

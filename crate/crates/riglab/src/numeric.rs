//! Shared numerical kernels: log-gamma, Riemann zeta, Gauss–Legendre rules
//! and stable Poisson pmf rows.

use std::sync::OnceLock;

/// Lanczos approximation (g = 7, 9 coefficients) of `ln Γ(x)` for `x > 0`.
#[allow(clippy::excessive_precision)] // canonical Lanczos coefficients
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    debug_assert!(x > 0.0, "ln_gamma domain: x = {x}");
    if x < 0.5 {
        // reflection Γ(x)Γ(1−x) = π/sin(πx)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Riemann zeta `ζ(s)` for `s > 1` by Euler–Maclaurin summation.
///
/// Absolute error well below 1e-12 over the range used here (s in (1, 60]).
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta requires s > 1, got {s}");
    // B_{2j}/(2j)! for j = 1..=7
    const B2J_OVER_FACT: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30_240.0,
        -1.0 / 1_209_600.0,
        1.0 / 47_900_160.0,
        -691.0 / 1_307_674_368_000.0,
        1.0 / 74_724_249_600.0,
    ];
    let n = 18usize;
    let nf = n as f64;
    let mut sum = 0.0;
    for k in 1..n {
        sum += (k as f64).powf(-s);
    }
    sum += 0.5 * nf.powf(-s);
    sum += nf.powf(1.0 - s) / (s - 1.0);
    // correction terms: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * n^{-s-2j+1}
    let mut rising = s; // s(s+1)...(s+2j-2), starts with one factor
    for (j, &coef) in B2J_OVER_FACT.iter().enumerate() {
        let power = nf.powf(-s - 2.0 * j as f64 - 1.0);
        sum += coef * rising * power;
        rising *= (s + 2.0 * j as f64 + 1.0) * (s + 2.0 * j as f64 + 2.0);
    }
    sum
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by three-term recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Cached 16-point rule; the workhorse for composite panel quadrature.
pub fn gl16() -> &'static [(f64, f64)] {
    static CACHE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    CACHE.get_or_init(|| gauss_legendre(16))
}

/// Poisson pmf row `P(N = r)` for `r = 0..=r_max` at the given mean.
///
/// Anchored at the mode via `ln_gamma` and extended by the one-step ratio
/// recurrence, so entries stay finite for means far beyond `exp` range; mass
/// that truly underflows f64 comes out as zero.
pub fn poisson_row(mean: f64, r_max: usize) -> Vec<f64> {
    let mut row = vec![0.0; r_max + 1];
    poisson_row_into(mean, &mut row);
    row
}

/// In-place variant of [`poisson_row`]; fills `row[r] = P(N = r)`.
pub fn poisson_row_into(mean: f64, row: &mut [f64]) {
    debug_assert!(mean >= 0.0 && mean.is_finite());
    debug_assert!(!row.is_empty());
    row.fill(0.0);
    let r_max = row.len() - 1;
    if mean == 0.0 {
        row[0] = 1.0;
        return;
    }
    let anchor = (mean.floor() as usize).min(r_max);
    let ln_p = -mean + anchor as f64 * mean.ln() - ln_gamma(anchor as f64 + 1.0);
    row[anchor] = ln_p.exp();
    for r in (1..=anchor).rev() {
        row[r - 1] = row[r] * r as f64 / mean;
    }
    for r in anchor..r_max {
        row[r + 1] = row[r] * mean / (r as f64 + 1.0);
    }
}

/// Ordinary least squares of `y` on `x`: returns `(slope, stderr_of_slope)`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let e = b - (intercept + slope * a);
            e * e
        })
        .sum();
    let dof = (x.len().max(3) - 2) as f64;
    let stderr = (ss_res / dof / sxx).sqrt();
    (slope, stderr)
}

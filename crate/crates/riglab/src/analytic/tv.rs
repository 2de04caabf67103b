//! Total-variation distances between truncated pmfs and the exact
//! Poisson-binomial vs Poisson comparison behind the sum-of-squares bound.

use crate::numeric::poisson_row;

use super::pmf::{JointPmf, Pmf};
use super::AnalyticError;

/// A TV distance between truncated carriers: `core` is the half
/// absolute-difference sum over the common support, `upper` adds half of
/// both residuals (worst case for the unseen tails).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvEstimate {
    pub core: f64,
    pub upper: f64,
}

fn tv_slices(p: &[f64], q: &[f64], res_p: f64, res_q: f64) -> TvEstimate {
    let core = 0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>();
    TvEstimate {
        core,
        upper: core + 0.5 * (res_p + res_q),
    }
}

/// TV between two pmfs on the same index range.
pub fn tv_distance(p: &Pmf, q: &Pmf) -> Result<TvEstimate, AnalyticError> {
    if p.probs.len() != q.probs.len() {
        return Err(AnalyticError::ShapeMismatch(format!(
            "pmf lengths differ: {} vs {}; pad first",
            p.probs.len(),
            q.probs.len()
        )));
    }
    Ok(tv_slices(&p.probs, &q.probs, p.residual, q.residual))
}

/// TV after zero-padding both pmfs to a common length.
pub fn tv_distance_padded(p: &Pmf, q: &Pmf) -> TvEstimate {
    let len = p.probs.len().max(q.probs.len());
    tv_distance(&p.padded(len), &q.padded(len)).expect("padded to equal length")
}

/// TV between two joint pmfs on the same box.
pub fn tv_distance_joint(p: &JointPmf, q: &JointPmf) -> Result<TvEstimate, AnalyticError> {
    if p.rows.len() != q.rows.len() {
        return Err(AnalyticError::ShapeMismatch(format!(
            "joint boxes differ: {} vs {}; pad first",
            p.rows.len(),
            q.rows.len()
        )));
    }
    let core = 0.5
        * p.rows
            .iter()
            .zip(&q.rows)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(a, b)| (a - b).abs()).sum::<f64>())
            .sum::<f64>();
    Ok(TvEstimate {
        core,
        upper: core + 0.5 * (p.residual + q.residual),
    })
}

/// TV between joints after padding to a common box.
pub fn tv_distance_joint_padded(p: &JointPmf, q: &JointPmf) -> TvEstimate {
    let k_max = p.k_max().max(q.k_max());
    tv_distance_joint(&p.padded(k_max), &q.padded(k_max)).expect("padded to equal box")
}

/// Result of the Poisson-approximation check for a sum of independent
/// indicators: the exact TV and the sum-of-squares bound that must dominate
/// it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeCamCheck {
    pub exact_tv: f64,
    pub bound: f64,
}

/// Exact TV between the Poisson-binomial law of `S = sum I_i` and the
/// Poisson law with the same mean, plus the bound `sum p_i^2`.
pub fn lecam_check(ps: &[f64]) -> Result<LeCamCheck, AnalyticError> {
    if ps.len() > 30 {
        return Err(AnalyticError::TooManyTerms(ps.len()));
    }
    for &p in ps {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(AnalyticError::InvalidProbability(p));
        }
    }
    // dynamic-programming convolution of the indicator laws
    let mut pb = vec![1.0f64];
    for &p in ps {
        let mut next = vec![0.0; pb.len() + 1];
        for (k, &v) in pb.iter().enumerate() {
            next[k] += v * (1.0 - p);
            next[k + 1] += v * p;
        }
        pb = next;
    }
    let mean: f64 = ps.iter().sum();
    let pois = poisson_row(mean, pb.len() - 1);
    let mut tv = 0.0;
    let mut pois_core = 0.0;
    for (a, b) in pb.iter().zip(&pois) {
        tv += (a - b).abs();
        pois_core += b;
    }
    // Poisson mass beyond the Poisson-binomial support counts in full
    let exact_tv = 0.5 * (tv + (1.0 - pois_core).max(0.0));
    let bound: f64 = ps.iter().map(|p| p * p).sum();
    Ok(LeCamCheck { exact_tv, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{StreamKind, StreamRng};

    #[test]
    fn tv_of_identical_pmfs_is_zero() {
        let p = Pmf::new(vec![0.25, 0.75], 0.0, "p");
        let d = tv_distance(&p, &p).unwrap();
        assert_eq!(d.core, 0.0);
        assert_eq!(d.upper, 0.0);
    }

    #[test]
    fn tv_of_disjoint_point_masses_is_one() {
        let p = Pmf::point_mass(0, 1, "d0");
        let q = Pmf::point_mass(1, 1, "d1");
        assert_eq!(tv_distance(&p, &q).unwrap().core, 1.0);
    }

    #[test]
    fn tv_poisson_pair_matches_direct_summation() {
        let p = Pmf::new(poisson_row(1.0, 200), 0.0, "p1");
        let q = Pmf::new(poisson_row(1.1, 200), 0.0, "p1.1");
        let got = tv_distance(&p, &q).unwrap().core;
        // direct high-precision summation over r <= 200
        let a = poisson_row(1.0, 200);
        let b = poisson_row(1.1, 200);
        let want = 0.5 * a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>();
        assert!((got - want).abs() < 1e-10);
    }

    #[test]
    fn tv_shape_mismatch_and_padding() {
        let p = Pmf::new(vec![1.0], 0.0, "p");
        let q = Pmf::new(vec![0.5, 0.5], 0.0, "q");
        assert!(tv_distance(&p, &q).is_err());
        let d = tv_distance_padded(&p, &q);
        assert!((d.core - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tv_upper_accounts_residuals() {
        let p = Pmf::new(vec![0.9], 0.1, "p");
        let q = Pmf::new(vec![0.9], 0.1, "q");
        let d = tv_distance(&p, &q).unwrap();
        assert_eq!(d.core, 0.0);
        assert!((d.upper - 0.1).abs() < 1e-15);
    }

    #[test]
    fn lecam_all_zero() {
        let c = lecam_check(&[0.0; 10]).unwrap();
        assert_eq!(c.exact_tv, 0.0);
        assert_eq!(c.bound, 0.0);
    }

    #[test]
    fn lecam_ten_at_tenth() {
        let c = lecam_check(&[0.1; 10]).unwrap();
        assert!((c.bound - 0.1).abs() < 1e-15);
        assert!(c.exact_tv <= c.bound);
        assert!(c.exact_tv > 0.0);
    }

    #[test]
    fn lecam_single_certain_indicator() {
        // TV between delta_1 and Poisson(1) is 1 - e^-1
        let c = lecam_check(&[1.0]).unwrap();
        assert!((c.exact_tv - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        assert_eq!(c.bound, 1.0);
    }

    #[test]
    fn lecam_bound_dominates_on_random_cases() {
        let mut rng = StreamRng::new(123, StreamKind::Misc, 0);
        for case in 0..100 {
            let len = 1 + (rng.next_u64() % 30) as usize;
            let ps: Vec<f64> = (0..len).map(|_| rng.next_f64()).collect();
            let c = lecam_check(&ps).unwrap();
            assert!(
                c.exact_tv <= c.bound + 1e-12,
                "case {case}: tv {} > bound {}",
                c.exact_tv,
                c.bound
            );
        }
    }

    #[test]
    fn lecam_too_many_terms() {
        assert!(matches!(
            lecam_check(&[0.1; 31]),
            Err(AnalyticError::TooManyTerms(31))
        ));
    }
}

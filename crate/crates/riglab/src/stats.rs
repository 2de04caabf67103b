//! Empirical estimators over realised intersection graphs and the mergeable
//! replica report that feeds the comparison harness.

use serde::Serialize;
use thiserror::Error;

use crate::analytic::{JointPmf, Pmf};
use crate::genmodel::IntersectionView;
use crate::numeric::ols_slope;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("graph has no edges")]
    NoEdges,
    #[error("graph has no paths of length two")]
    NoPaths,
    #[error("marginal variance is zero")]
    ZeroVariance,
    #[error("need at least {need} support points with positive mass, found {found}")]
    InsufficientSupport { need: usize, found: usize },
}

/// Raw counts collected from realised graphs. Merging replica reports is
/// plain count addition, so it is associative and commutative.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmpiricalReport {
    /// degree -> number of vertices.
    pub degree_counts: Vec<u64>,
    /// (d(u)-1, d(v)-1) over ordered adjacent pairs.
    pub joint_counts: Vec<Vec<u64>>,
    /// common-neighbor count over unordered adjacent pairs.
    pub common_counts: Vec<u64>,
    /// adjacent neighbor pairs summed over apexes (= 3 * triangles).
    pub closed_wedges: u64,
    /// paths of length two: sum_v C(d_v, 2).
    pub wedges: u64,
    pub isolated: u64,
    pub vertex_count: u64,
    pub edge_count: u64,
    pub replica_count: u32,
}

fn bump(counts: &mut Vec<u64>, idx: usize) {
    if counts.len() <= idx {
        counts.resize(idx + 1, 0);
    }
    counts[idx] += 1;
}

impl EmpiricalReport {
    pub fn from_view(view: &IntersectionView) -> Self {
        let mut rep = EmpiricalReport {
            replica_count: 1,
            ..Default::default()
        };
        rep.vertex_count = view.n() as u64;
        let mut max_deg = 0usize;
        for d in view.degrees() {
            bump(&mut rep.degree_counts, d);
            max_deg = max_deg.max(d);
            if d == 0 {
                rep.isolated += 1;
            }
            rep.wedges += (d as u64) * (d as u64 - if d > 0 { 1 } else { 0 }) / 2;
        }
        rep.edge_count = view.edge_count();
        if max_deg > 0 {
            rep.joint_counts = vec![vec![0; max_deg]; max_deg];
        }
        for u in 0..view.n() {
            let du = view.degree(u);
            for &v in &view.neighbors[u] {
                let dv = view.degree(v as usize);
                rep.joint_counts[du - 1][dv - 1] += 1;
                if (v as usize) > u {
                    bump(&mut rep.common_counts, view.common_neighbors(u, v as usize));
                }
            }
            // adjacent neighbor pairs with this apex
            let nb = &view.neighbors[u];
            for (ai, &a) in nb.iter().enumerate() {
                for &b in &nb[ai + 1..] {
                    if view.are_adjacent(a as usize, b as usize) {
                        rep.closed_wedges += 1;
                    }
                }
            }
        }
        rep
    }

    pub fn merge(&mut self, other: &EmpiricalReport) {
        for (i, &c) in other.degree_counts.iter().enumerate() {
            if self.degree_counts.len() <= i {
                self.degree_counts.resize(i + 1, 0);
            }
            self.degree_counts[i] += c;
        }
        let dim = self.joint_counts.len().max(other.joint_counts.len());
        if self.joint_counts.len() < dim {
            for row in self.joint_counts.iter_mut() {
                row.resize(dim, 0);
            }
            self.joint_counts.resize(dim, vec![0; dim]);
        }
        for (i, row) in other.joint_counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                self.joint_counts[i][j] += c;
            }
        }
        for (i, &c) in other.common_counts.iter().enumerate() {
            if self.common_counts.len() <= i {
                self.common_counts.resize(i + 1, 0);
            }
            self.common_counts[i] += c;
        }
        self.closed_wedges += other.closed_wedges;
        self.wedges += other.wedges;
        self.isolated += other.isolated;
        self.vertex_count += other.vertex_count;
        self.edge_count += other.edge_count;
        self.replica_count += other.replica_count;
    }

    pub fn degree_pmf(&self) -> Pmf {
        Pmf::from_counts(&self.degree_counts, "empirical_degree")
    }

    pub fn edge_joint(&self) -> Result<JointPmf, StatsError> {
        let total: u64 = self.joint_counts.iter().flatten().sum();
        if total == 0 {
            return Err(StatsError::NoEdges);
        }
        let rows = self
            .joint_counts
            .iter()
            .map(|row| row.iter().map(|&c| c as f64 / total as f64).collect())
            .collect();
        Ok(JointPmf::new(rows, 0.0, "empirical_edge_joint"))
    }

    pub fn common_neighbor_pmf(&self) -> Result<Pmf, StatsError> {
        if self.common_counts.iter().sum::<u64>() == 0 {
            return Err(StatsError::NoEdges);
        }
        Ok(Pmf::from_counts(
            &self.common_counts,
            "empirical_common_neighbors",
        ))
    }

    /// Law of d(u) over ordered adjacent pairs (u, .): the k1-marginal of
    /// the joint histogram shifted up by one.
    pub fn conditioned_degree_pmf(&self) -> Result<Pmf, StatsError> {
        let total: u64 = self.joint_counts.iter().flatten().sum();
        if total == 0 {
            return Err(StatsError::NoEdges);
        }
        let mut probs = vec![0.0; self.joint_counts.len() + 1];
        for (k1, row) in self.joint_counts.iter().enumerate() {
            probs[k1 + 1] = row.iter().sum::<u64>() as f64 / total as f64;
        }
        Ok(Pmf::new(probs, 0.0, "empirical_conditioned_degree"))
    }

    /// Transitivity estimate `(3 * triangles) / (paths of length 2)` and the
    /// path count behind it.
    pub fn clustering(&self) -> Result<(f64, u64), StatsError> {
        if self.wedges == 0 {
            return Err(StatsError::NoPaths);
        }
        Ok((self.closed_wedges as f64 / self.wedges as f64, self.wedges))
    }

    pub fn assortativity(&self) -> Result<f64, StatsError> {
        assortativity(&self.edge_joint()?)
    }

    pub fn isolated_fraction(&self) -> f64 {
        if self.vertex_count == 0 {
            0.0
        } else {
            self.isolated as f64 / self.vertex_count as f64
        }
    }

    pub fn summary(&self) -> ReportSummary {
        ReportSummary {
            degree_pmf: self.degree_pmf(),
            edge_joint: self.edge_joint().ok(),
            clustering: self.clustering().ok().map(|(v, _)| v),
            clustering_paths: self.wedges,
            assortativity: self.assortativity().ok(),
            isolated_fraction: self.isolated_fraction(),
            common_neighbor_pmf: self.common_neighbor_pmf().ok(),
            replica_count: self.replica_count,
            edge_count: self.edge_count,
            vertex_count: self.vertex_count,
        }
    }
}

/// Serializable snapshot of a merged report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportSummary {
    pub degree_pmf: Pmf,
    pub edge_joint: Option<JointPmf>,
    pub clustering: Option<f64>,
    pub clustering_paths: u64,
    pub assortativity: Option<f64>,
    pub isolated_fraction: f64,
    pub common_neighbor_pmf: Option<Pmf>,
    pub replica_count: u32,
    pub edge_count: u64,
    pub vertex_count: u64,
}

/// Empirical pmf of vertex degrees.
pub fn degree_histogram(view: &IntersectionView) -> Pmf {
    EmpiricalReport::from_view(view).degree_pmf()
}

/// Histogram of `(d(u)-1, d(v)-1)` over all ordered adjacent pairs.
pub fn edge_joint_histogram(view: &IntersectionView) -> Result<JointPmf, StatsError> {
    EmpiricalReport::from_view(view).edge_joint()
}

/// Transitivity: `(3 * triangles) / #paths-of-length-2`, with the path count.
pub fn clustering_estimate(view: &IntersectionView) -> Result<(f64, u64), StatsError> {
    EmpiricalReport::from_view(view).clustering()
}

/// Pmf of the common-neighbor count over adjacent pairs.
pub fn common_neighbor_histogram(view: &IntersectionView) -> Result<Pmf, StatsError> {
    EmpiricalReport::from_view(view).common_neighbor_pmf()
}

/// Pmf of `d(u)` over ordered adjacent pairs `(u, .)`.
pub fn conditioned_degree_histogram(view: &IntersectionView) -> Result<Pmf, StatsError> {
    EmpiricalReport::from_view(view).conditioned_degree_pmf()
}

/// Pearson correlation of `(k1, k2)` under a joint pmf.
pub fn assortativity(joint: &JointPmf) -> Result<f64, StatsError> {
    let total = joint.core_mass();
    if total <= 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let (mut m1, mut m2, mut cross) = (0.0, 0.0, 0.0);
    for (k1, row) in joint.rows.iter().enumerate() {
        for (k2, p) in row.iter().enumerate() {
            let p = p / total;
            m1 += k1 as f64 * p;
            m2 += (k1 as f64) * (k1 as f64) * p;
            cross += (k1 as f64) * (k2 as f64) * p;
        }
    }
    let var = m2 - m1 * m1;
    if var <= 1e-15 {
        return Err(StatsError::ZeroVariance);
    }
    Ok((cross - m1 * m1) / var)
}

/// Least-squares slope of `log p(r)` against `log r` over `[r_min, r_max]`.
pub fn tail_slope_fit(pmf: &Pmf, r_min: usize, r_max: usize) -> Result<(f64, f64), StatsError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in r_min..=r_max.min(pmf.r_max()) {
        let p = pmf.get(r);
        if p > 0.0 && r > 0 {
            xs.push((r as f64).ln());
            ys.push(p.ln());
        }
    }
    if xs.len() < 10 {
        return Err(StatsError::InsufficientSupport {
            need: 10,
            found: xs.len(),
        });
    }
    Ok(ols_slope(&xs, &ys))
}

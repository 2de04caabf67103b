//! Ground-truth oracle for tiny instances: the exact joint law of the model
//! by weighted enumeration of all weight assignments and edge patterns.

use crate::analytic::{JointPmf, Pmf};
use crate::rng::{derive_seed, StreamKind};
use crate::weights::WeightSpec;

use super::{build_intersection, generate_naive, ModelError, ModelParams};

/// Exact laws of a tiny instance.
#[derive(Debug, Clone)]
pub struct ExactLaw {
    /// P(v1 ~ v2).
    pub p_adjacent: f64,
    /// P(d(v1) = k1 + 1, d(v2) = k2 + 1 | v1 ~ v2), indexed by (k1, k2).
    pub joint_given_edge: JointPmf,
    /// P(v1 ~ v2 | v1 ~ v3, v2 ~ v3); `None` when n < 3 or the
    /// conditioning event has probability zero.
    pub clustering_cond: Option<f64>,
    /// Marginal law of d(v1).
    pub degree_pmf: Pmf,
}

fn support(spec: &WeightSpec) -> Result<Vec<(f64, f64)>, ModelError> {
    match spec {
        WeightSpec::Degenerate { value } => Ok(vec![(*value, 1.0)]),
        WeightSpec::FiniteSupport { values, probs } => {
            Ok(values.iter().copied().zip(probs.iter().copied()).collect())
        }
        other => Err(ModelError::RequiresFiniteSupport(format!("{other:?}"))),
    }
}

struct Accumulator {
    n: usize,
    p_adj: f64,
    joint: Vec<Vec<f64>>,
    degree: Vec<f64>,
    p_triple: f64,
    p_wedge: f64,
}

impl Accumulator {
    fn visit(&mut self, prob: f64, adj: &[u32]) {
        let n = self.n;
        let deg = |v: usize| (adj[v].count_ones()) as usize;
        self.degree[deg(0)] += prob;
        if adj[0] & (1 << 1) != 0 {
            self.p_adj += prob;
            let (d0, d1) = (deg(0), deg(1));
            // both orders of the labeled pair are the same by exchangeability;
            // accumulate symmetrically to keep the table exactly symmetric
            self.joint[d0 - 1][d1 - 1] += 0.5 * prob;
            self.joint[d1 - 1][d0 - 1] += 0.5 * prob;
        }
        if n >= 3 {
            let wedge = adj[0] & (1 << 2) != 0 && adj[1] & (1 << 2) != 0;
            if wedge {
                self.p_wedge += prob;
                if adj[0] & (1 << 1) != 0 {
                    self.p_triple += prob;
                }
            }
        }
    }
}

/// Enumerate every edge pattern of the bipartite graph, depth-first over
/// cells with a running probability; cells with clipped probabilities 0 or 1
/// contribute a single branch.
fn enumerate_patterns(p: &[f64], n: usize, m: usize, base_prob: f64, acc: &mut Accumulator) {
    // links[i] holds the vertex bitmask of attribute i
    fn rec(
        p: &[f64],
        n: usize,
        m: usize,
        cell: usize,
        prob: f64,
        links: &mut [u32],
        acc: &mut Accumulator,
    ) {
        if cell == n * m {
            let mut adj = vec![0u32; n];
            for s in links.iter() {
                let mut rest = *s;
                while rest != 0 {
                    let a = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let mut others = *s & !(1u32 << a);
                    while others != 0 {
                        let b = others.trailing_zeros() as usize;
                        others &= others - 1;
                        adj[a] |= 1 << b;
                    }
                }
            }
            acc.visit(prob, &adj);
            return;
        }
        let (i, j) = (cell / n, cell % n);
        let pij = p[cell];
        if pij < 1.0 {
            rec(p, n, m, cell + 1, prob * (1.0 - pij), links, acc);
        }
        if pij > 0.0 {
            links[i] |= 1 << j;
            rec(p, n, m, cell + 1, prob * pij, links, acc);
            links[i] &= !(1u32 << j);
        }
    }
    let mut links = vec![0u32; m];
    rec(p, n, m, 0, base_prob, &mut links, acc);
}

/// Exact joint law table by weighted enumeration. The state guard bounds
/// `(#weight assignments) * 2^(n m)`.
pub fn enumerate_exact(
    n: usize,
    m: usize,
    p1: &WeightSpec,
    p2: &WeightSpec,
    state_cap: u128,
) -> Result<ExactLaw, ModelError> {
    if !(2..=20).contains(&n) || m < 1 {
        return Err(ModelError::InvalidParams(format!(
            "enumeration needs 2 <= n <= 20 and m >= 1, got n={n} m={m}"
        )));
    }
    let sx = support(p1)?;
    let sy = support(p2)?;
    let cells = n * m;
    if cells >= 64 {
        return Err(ModelError::StateGuard {
            states: u128::MAX,
            cap: state_cap,
        });
    }
    let assignments = (sx.len() as u128).pow(m as u32) * (sy.len() as u128).pow(n as u32);
    let states = assignments.saturating_mul(1u128 << cells);
    if states > state_cap {
        return Err(ModelError::StateGuard {
            states,
            cap: state_cap,
        });
    }
    let mut acc = Accumulator {
        n,
        p_adj: 0.0,
        joint: vec![vec![0.0; n - 1]; n - 1],
        degree: vec![0.0; n],
        p_triple: 0.0,
        p_wedge: 0.0,
    };
    let inv_sqrt_nm = 1.0 / ((n as f64 * m as f64).sqrt());
    // mixed-radix iteration over weight assignments
    let mut xi = vec![0usize; m];
    let mut yi = vec![0usize; n];
    loop {
        loop {
            let mut w = 1.0;
            for &k in &xi {
                w *= sx[k].1;
            }
            for &k in &yi {
                w *= sy[k].1;
            }
            if w > 0.0 {
                let mut p = vec![0.0; cells];
                for i in 0..m {
                    for j in 0..n {
                        p[i * n + j] = (sx[xi[i]].0 * sy[yi[j]].0 * inv_sqrt_nm).min(1.0);
                    }
                }
                enumerate_patterns(&p, n, m, w, &mut acc);
            }
            // advance y indices
            let mut pos = 0;
            loop {
                if pos == n {
                    break;
                }
                yi[pos] += 1;
                if yi[pos] < sy.len() {
                    break;
                }
                yi[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
        // advance x indices
        let mut pos = 0;
        loop {
            if pos == m {
                break;
            }
            xi[pos] += 1;
            if xi[pos] < sx.len() {
                break;
            }
            xi[pos] = 0;
            pos += 1;
        }
        if pos == m {
            break;
        }
    }
    let joint_rows: Vec<Vec<f64>> = acc
        .joint
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| if acc.p_adj > 0.0 { v / acc.p_adj } else { 0.0 })
                .collect()
        })
        .collect();
    let core: f64 = joint_rows.iter().flatten().sum();
    Ok(ExactLaw {
        p_adjacent: acc.p_adj,
        joint_given_edge: JointPmf::new(joint_rows, (1.0 - core).max(0.0), "exact_joint"),
        clustering_cond: if acc.p_wedge > 0.0 {
            Some(acc.p_triple / acc.p_wedge)
        } else {
            None
        },
        degree_pmf: Pmf::new(acc.degree, 0.0, "exact_degree"),
    })
}

/// Monte Carlo companion of [`enumerate_exact`]: the conditional joint
/// degree table of the labeled pair `(v1, v2)` estimated over independent
/// replicas, plus the adjacency frequency.
pub fn conditional_joint_mc(
    params: &ModelParams,
    replicas: usize,
) -> Result<(JointPmf, f64), ModelError> {
    use rayon::prelude::*;
    params.validate()?;
    let n = params.n;
    // per-chunk tallies; replica streams are keyed by replica id, and the
    // merged counts are order-independent, so the result does not depend on
    // the thread count
    let chunk = 8192usize;
    let starts: Vec<usize> = (0..replicas).step_by(chunk).collect();
    let tallies: Vec<(Vec<Vec<u64>>, u64)> = starts
        .par_iter()
        .map(|&lo| -> Result<(Vec<Vec<u64>>, u64), ModelError> {
            let mut counts = vec![vec![0u64; n - 1]; n - 1];
            let mut adjacent = 0u64;
            for r in lo..(lo + chunk).min(replicas) {
                let rp = ModelParams {
                    seed: derive_seed(params.seed, StreamKind::Replica, r as u64),
                    ..params.clone()
                };
                let inc = generate_naive(&rp)?;
                let view = build_intersection(&inc, u128::MAX)?;
                if view.are_adjacent(0, 1) {
                    adjacent += 1;
                    let (d0, d1) = (view.degree(0), view.degree(1));
                    counts[d0 - 1][d1 - 1] += 1;
                }
            }
            Ok((counts, adjacent))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut joint = vec![vec![0.0; n - 1]; n - 1];
    let mut adjacent = 0u64;
    for (counts, adj) in &tallies {
        adjacent += adj;
        for (i, row) in counts.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                joint[i][j] += 0.5 * c as f64;
                joint[j][i] += 0.5 * c as f64;
            }
        }
    }
    if adjacent > 0 {
        for row in joint.iter_mut() {
            for v in row.iter_mut() {
                *v /= adjacent as f64;
            }
        }
    }
    Ok((
        JointPmf::new(joint, 0.0, "mc_joint"),
        adjacent as f64 / replicas as f64,
    ))
}

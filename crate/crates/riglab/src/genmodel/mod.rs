//! Samplers of the random intersection graph: model parameters, the
//! bipartite witness graph, the one-mode projection, and a tiny-instance
//! exact enumerator.

mod enumerate;
mod generate;
mod intersect;

pub use enumerate::{conditional_joint_mc, enumerate_exact, ExactLaw};
pub use generate::{generate_fast, generate_naive, NAIVE_CELL_GUARD};
pub use intersect::build_intersection;

use std::io::{self, Write};

use thiserror::Error;

use crate::weights::{WeightError, WeightSpec};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("naive generator guard: {cells} cells exceed the cap {cap}")]
    SizeGuard { cells: u128, cap: u128 },
    #[error(
        "intersection pair cap exceeded: total {total} > cap {cap} \
         (largest attribute list |S_w| = {largest})"
    )]
    CapExceeded {
        total: u128,
        cap: u128,
        largest: usize,
    },
    #[error("enumeration guard: {states} states exceed the cap {cap}")]
    StateGuard { states: u128, cap: u128 },
    #[error("exact enumeration needs finite-support weights, got {0}")]
    RequiresFiniteSupport(String),
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// One graph instance: sizes, weight laws, and the root seed of all streams.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub n: usize,
    pub m: usize,
    pub p1: WeightSpec,
    pub p2: WeightSpec,
    pub seed: u64,
}

impl ModelParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.n < 2 {
            return Err(ModelError::InvalidParams(format!(
                "n = {} must be >= 2",
                self.n
            )));
        }
        if self.m < 1 {
            return Err(ModelError::InvalidParams(format!(
                "m = {} must be >= 1",
                self.m
            )));
        }
        self.p1.validate()?;
        self.p2.validate()?;
        Ok(())
    }

    /// The finite-size ratio `beta_n = m / n`.
    pub fn beta_n(&self) -> f64 {
        self.m as f64 / self.n as f64
    }
}

/// The realised bipartite witness graph: per-attribute sorted vertex lists
/// plus the realised weights.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteIncidence {
    /// `attr_lists[i]` = sorted, deduplicated vertices linked to attribute i.
    pub attr_lists: Vec<Vec<u32>>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl BipartiteIncidence {
    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn m(&self) -> usize {
        self.attr_lists.len()
    }

    pub fn link_count(&self) -> usize {
        self.attr_lists.iter().map(Vec::len).sum()
    }

    /// Edge-list CSV `(attribute_id, vertex_id)`.
    pub fn write_edges_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "attribute_id,vertex_id")?;
        for (i, list) in self.attr_lists.iter().enumerate() {
            for j in list {
                writeln!(w, "{i},{j}")?;
            }
        }
        Ok(())
    }

    /// Weight CSV `(id, weight)` for one side.
    pub fn write_weights_csv<W: Write>(&self, w: &mut W, side: &[f64]) -> io::Result<()> {
        writeln!(w, "id,weight")?;
        for (i, v) in side.iter().enumerate() {
            writeln!(w, "{i},{v}")?;
        }
        Ok(())
    }
}

/// The one-mode projection: per-vertex sorted neighbor lists and degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionView {
    pub neighbors: Vec<Vec<u32>>,
}

impl IntersectionView {
    pub fn n(&self) -> usize {
        self.neighbors.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.neighbors.iter().map(Vec::len)
    }

    /// Undirected edge count.
    pub fn edge_count(&self) -> u64 {
        self.neighbors.iter().map(|l| l.len() as u64).sum::<u64>() / 2
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&(v as u32)).is_ok()
    }

    /// Number of common neighbors of `u` and `v` (sorted-merge intersect).
    pub fn common_neighbors(&self, u: usize, v: usize) -> usize {
        let (a, b) = (&self.neighbors[u], &self.neighbors[v]);
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }
}

//! Two samplers of the same bipartite law: a per-cell naive oracle and a
//! bucketed envelope sampler with geometric skips.

use rayon::prelude::*;

use crate::rng::{StreamKind, StreamRng};
use crate::weights::WeightSpec;

use super::{BipartiteIncidence, ModelError, ModelParams};

/// Cost guard for the naive generator: at most 1e8 cells.
pub const NAIVE_CELL_GUARD: u128 = 100_000_000;

fn draw_weights(spec: &WeightSpec, kind: StreamKind, count: usize, seed: u64) -> Vec<f64> {
    (0..count)
        .map(|i| {
            let mut rng = StreamRng::new(seed, kind, i as u64);
            spec.sample(&mut rng)
        })
        .collect()
}

/// Per-cell sampler: every pair `(w_i, v_j)` is linked independently with
/// probability `min(1, X_i Y_j / sqrt(n m))`. Bit-reproducible for a given
/// seed regardless of thread count (one stream per attribute row).
pub fn generate_naive(params: &ModelParams) -> Result<BipartiteIncidence, ModelError> {
    params.validate()?;
    let cells = params.n as u128 * params.m as u128;
    if cells > NAIVE_CELL_GUARD {
        return Err(ModelError::SizeGuard {
            cells,
            cap: NAIVE_CELL_GUARD,
        });
    }
    let x = draw_weights(
        &params.p1,
        StreamKind::AttributeWeight,
        params.m,
        params.seed,
    );
    let y = draw_weights(&params.p2, StreamKind::VertexWeight, params.n, params.seed);
    let inv_sqrt_nm = 1.0 / ((params.n as f64 * params.m as f64).sqrt());
    let attr_lists: Vec<Vec<u32>> = (0..params.m)
        .into_par_iter()
        .map(|i| {
            let mut rng = StreamRng::new(params.seed, StreamKind::Edges, i as u64);
            let xi = x[i] * inv_sqrt_nm;
            let mut list = Vec::new();
            for (j, &yj) in y.iter().enumerate() {
                let lambda = xi * yj;
                // short-circuit keeps clipped cells from consuming a draw
                if lambda >= 1.0 || rng.next_f64() < lambda {
                    list.push(j as u32);
                }
            }
            list
        })
        .collect();
    Ok(BipartiteIncidence { attr_lists, x, y })
}

/// Vertices grouped by the binary exponent of their weight, with the exact
/// in-bucket maximum as the envelope.
struct Bucket {
    y_max: f64,
    verts: Vec<u32>,
}

fn bucket_by_weight(y: &[f64]) -> Vec<Bucket> {
    use std::collections::BTreeMap;
    let mut map: BTreeMap<i32, Bucket> = BTreeMap::new();
    for (j, &w) in y.iter().enumerate() {
        if w <= 0.0 {
            continue; // zero weight never links
        }
        let exp = w.log2().floor() as i32;
        let b = map.entry(exp).or_insert(Bucket {
            y_max: 0.0,
            verts: Vec::new(),
        });
        b.y_max = b.y_max.max(w);
        b.verts.push(j as u32);
    }
    map.into_values().collect()
}

/// Number of failures before the first success at probability `p`, drawn by
/// inversion; returned as f64 so that callers can compare against a remaining
/// length without overflow.
#[inline]
fn geometric_skip(rng: &mut StreamRng, p: f64) -> f64 {
    if p >= 1.0 {
        return 0.0;
    }
    let u = rng.next_open01();
    (u.ln() / (-p).ln_1p()).floor()
}

/// Envelope sampler, distributionally identical to [`generate_naive`].
///
/// Vertices are bucketed by weight; within a bucket each attribute walks the
/// vertex list with geometric gap skips at the envelope probability
/// `min(1, X_i y_max / sqrt(nm))` and thins each candidate by the exact
/// ratio. Expected work is O(sum p_ij + m * #buckets).
pub fn generate_fast(params: &ModelParams) -> Result<BipartiteIncidence, ModelError> {
    params.validate()?;
    let x = draw_weights(
        &params.p1,
        StreamKind::AttributeWeight,
        params.m,
        params.seed,
    );
    let y = draw_weights(&params.p2, StreamKind::VertexWeight, params.n, params.seed);
    let buckets = bucket_by_weight(&y);
    let inv_sqrt_nm = 1.0 / ((params.n as f64 * params.m as f64).sqrt());
    let attr_lists: Vec<Vec<u32>> = (0..params.m)
        .into_par_iter()
        .map(|i| {
            let mut rng = StreamRng::new(params.seed, StreamKind::Edges, i as u64);
            let xi = x[i] * inv_sqrt_nm;
            let mut list: Vec<u32> = Vec::new();
            if xi <= 0.0 {
                return list;
            }
            for bucket in &buckets {
                let envelope = (xi * bucket.y_max).min(1.0);
                if envelope <= 0.0 {
                    continue;
                }
                let len = bucket.verts.len();
                let mut pos = 0usize;
                loop {
                    let skip = geometric_skip(&mut rng, envelope);
                    if skip >= (len - pos) as f64 {
                        break;
                    }
                    pos += skip as usize;
                    let j = bucket.verts[pos];
                    let p_ij = (xi * y[j as usize]).min(1.0);
                    let ratio = p_ij / envelope;
                    if ratio >= 1.0 || rng.next_f64() < ratio {
                        list.push(j);
                    }
                    pos += 1;
                    if pos >= len {
                        break;
                    }
                }
            }
            list.sort_unstable();
            list
        })
        .collect();
    Ok(BipartiteIncidence { attr_lists, x, y })
}

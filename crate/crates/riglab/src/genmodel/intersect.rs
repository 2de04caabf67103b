//! One-mode projection of the bipartite witness graph.

use super::{BipartiteIncidence, IntersectionView, ModelError};

/// Build the intersection adjacency: all vertex pairs sharing an attribute
/// become adjacent, deduplicated across witnesses.
///
/// The guard rejects instances whose per-attribute pair expansion
/// `sum_w |S_w|^2` exceeds `cap` — the blow-up signal for heavy-tailed
/// attribute weights.
pub fn build_intersection(
    incidence: &BipartiteIncidence,
    cap: u128,
) -> Result<IntersectionView, ModelError> {
    let mut total: u128 = 0;
    let mut largest = 0usize;
    for list in &incidence.attr_lists {
        total += (list.len() as u128) * (list.len() as u128);
        largest = largest.max(list.len());
    }
    if total > cap {
        return Err(ModelError::CapExceeded {
            total,
            cap,
            largest,
        });
    }
    let n = incidence.n();
    let mut neighbors: Vec<Vec<u32>> = vec![Vec::new(); n];
    for list in &incidence.attr_lists {
        for (a_idx, &a) in list.iter().enumerate() {
            for &b in &list[a_idx + 1..] {
                neighbors[a as usize].push(b);
                neighbors[b as usize].push(a);
            }
        }
    }
    for l in neighbors.iter_mut() {
        l.sort_unstable();
        l.dedup();
    }
    Ok(IntersectionView { neighbors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn incidence(n: usize, lists: Vec<Vec<u32>>) -> BipartiteIncidence {
        BipartiteIncidence {
            x: vec![1.0; lists.len()],
            y: vec![1.0; n],
            attr_lists: lists,
        }
    }

    #[test]
    fn one_attribute_makes_a_triangle() {
        let view = build_intersection(&incidence(3, vec![vec![0, 1, 2]]), 1 << 20).unwrap();
        assert_eq!(view.degrees().collect::<Vec<_>>(), vec![2, 2, 2]);
        assert_eq!(view.edge_count(), 3);
        assert!(view.are_adjacent(0, 1));
    }

    #[test]
    fn two_attributes_make_a_path() {
        let view =
            build_intersection(&incidence(3, vec![vec![0, 1], vec![1, 2]]), 1 << 20).unwrap();
        assert_eq!(view.degrees().collect::<Vec<_>>(), vec![1, 2, 1]);
        // vertex 1 witnesses the pair (0, 2)
        assert_eq!(view.common_neighbors(0, 2), 1);
        assert!(!view.are_adjacent(0, 2));
    }

    #[test]
    fn disjoint_singletons_give_empty_graph() {
        let view =
            build_intersection(&incidence(3, vec![vec![0], vec![1], vec![2]]), 1 << 20).unwrap();
        assert!(view.degrees().all(|d| d == 0));
        assert_eq!(view.edge_count(), 0);
    }

    #[test]
    fn duplicate_witnesses_are_deduplicated() {
        let view =
            build_intersection(&incidence(2, vec![vec![0, 1], vec![0, 1]]), 1 << 20).unwrap();
        assert_eq!(view.neighbors[0], vec![1]);
        assert_eq!(view.degree(0), 1);
    }

    #[test]
    fn symmetry_on_realized_instances() {
        use crate::genmodel::{generate_fast, ModelParams};
        use crate::weights::WeightSpec;
        let params = ModelParams {
            n: 500,
            m: 600,
            p1: WeightSpec::pareto(1.0, 3.5),
            p2: WeightSpec::exponential(1.0),
            seed: 11,
        };
        let view = build_intersection(&generate_fast(&params).unwrap(), 1 << 30).unwrap();
        for u in 0..view.n() {
            for &v in &view.neighbors[u] {
                assert!(view.are_adjacent(v as usize, u), "asymmetric pair {u} {v}");
                assert_ne!(u as u32, v, "self loop at {u}");
            }
        }
    }

    #[test]
    fn cap_guard_reports_largest_list() {
        let big: Vec<u32> = (0..200).collect();
        let err = build_intersection(&incidence(200, vec![big]), 100).unwrap_err();
        match err {
            ModelError::CapExceeded { largest, total, .. } => {
                assert_eq!(largest, 200);
                assert_eq!(total, 200 * 200);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}

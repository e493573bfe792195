//! Seeded random connected multigraphs.

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Multigraph, TerminalSet, VertexId};

/// A connected loop-free multigraph on `vertices` vertices `v1, v2, ...`
/// with `edges` edges `e1, e2, ...` and `terminals` terminals, fixed by
/// `seed`. A random spanning tree comes first; the remaining edges join
/// random distinct vertices and may be parallel.
pub fn random_instance(vertices: usize, edges: usize, terminals: usize, seed: u64) -> Result<(Multigraph, TerminalSet)> {
    if vertices == 0 {
        return Err(Error::Infeasible("at least one vertex is required".into()));
    }
    if edges + 1 < vertices {
        return Err(Error::Infeasible(format!("{edges} edges cannot connect {vertices} vertices")));
    }
    if vertices == 1 && edges > 0 {
        return Err(Error::Infeasible("a single vertex admits no loop-free edges".into()));
    }
    if terminals > vertices {
        return Err(Error::Infeasible(format!("{terminals} terminals among {vertices} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (1..=vertices).map(|i| format!("v{i}")).collect();
    let order = sample(&mut rng, vertices, vertices).into_vec();
    let mut pairs = Vec::with_capacity(edges);
    for i in 1..vertices {
        let j = rng.gen_range(0..i);
        pairs.push((order[i], order[j]));
    }
    while pairs.len() < edges {
        let a = rng.gen_range(0..vertices);
        let b = rng.gen_range(0..vertices - 1);
        pairs.push((a, if b >= a { b + 1 } else { b }));
    }
    let g = Multigraph::new(
        names.clone(),
        pairs.iter().enumerate().map(|(i, &(a, b))| (format!("e{}", i + 1), names[a].clone(), names[b].clone())),
    )?;
    let chosen = sample(&mut rng, vertices, terminals).into_vec();
    let t = TerminalSet::new(chosen.into_iter().map(|i| g.vertex(&names[i]).expect("declared")).collect::<Vec<VertexId>>());
    Ok((g, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphDocument;

    #[test]
    fn is_deterministic() {
        let (g1, t1) = random_instance(5, 7, 3, 1).unwrap();
        let (g2, t2) = random_instance(5, 7, 3, 1).unwrap();
        assert_eq!(GraphDocument::from_graph(&g1, &t1), GraphDocument::from_graph(&g2, &t2));
        assert_eq!(g1.edge_count(), 7);
        assert_eq!(t1.len(), 3);
        assert!(g1.is_connected());
    }

    #[test]
    fn forced_shapes() {
        let (g, t) = random_instance(2, 1, 2, 0).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), t.len()), (2, 1, 2));
        let (tree, _) = random_instance(6, 5, 2, 2).unwrap();
        assert_eq!(tree.edge_count(), 5);
        assert!(tree.is_connected());
    }

    #[test]
    fn rejects_infeasible_parameters() {
        assert!(matches!(random_instance(5, 3, 2, 0), Err(Error::Infeasible(_))));
        assert!(matches!(random_instance(3, 3, 4, 0), Err(Error::Infeasible(_))));
        assert!(matches!(random_instance(1, 1, 1, 0), Err(Error::Infeasible(_))));
    }

    #[test]
    fn stays_connected_across_seeds() {
        for seed in 0..200 {
            let (g, _) = random_instance(7, 12, 4, seed).unwrap();
            assert!(g.is_connected());
            assert_eq!(g.loops_stripped(), 0);
        }
    }
}

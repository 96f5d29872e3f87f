use std::collections::VecDeque;

use super::{solve_representable, SolveError, SolveResult};
use crate::field::{FieldCtx, FieldElem, Matrix};
use crate::matroid::{Graph, Matroid};
use crate::matroidal::{construct, Construction, ConstructionConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphicSolution {
    pub construction: Construction,
    /// Spanning forest edges, ascending; tree edge `tree[i]` carries `e_i`.
    pub tree: Vec<usize>,
    pub representation: Matrix,
    pub result: SolveResult,
}

/// Breadth-first spanning forest: each component is explored from its
/// smallest vertex, scanning incident edges in input order. Loops are never
/// tree edges. Returns the tree edges in ascending order.
pub fn spanning_forest(g: &Graph) -> Vec<usize> {
    let adj = g.adjacency();
    let mut seen = vec![false; g.vertices];
    let mut tree = Vec::new();
    for root in 0..g.vertices {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &e in &adj[u] {
                let (a, b) = g.edges[e];
                let w = if a == u { b } else { a };
                if !seen[w] {
                    seen[w] = true;
                    tree.push(e);
                    queue.push_back(w);
                }
            }
        }
    }
    tree.sort_unstable();
    tree
}

/// Tree edges on the forest path between `u` and `v`.
fn tree_path(g: &Graph, tree: &[usize], u: usize, v: usize) -> Vec<usize> {
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; g.vertices];
    let mut seen = vec![false; g.vertices];
    seen[u] = true;
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        for &e in tree {
            let (a, b) = g.edges[e];
            let y = if a == x { b } else if b == x { a } else { continue };
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some((x, e));
                queue.push_back(y);
            }
        }
    }
    let mut path = Vec::new();
    let mut x = v;
    while let Some((p, e)) = parent[x] {
        path.push(e);
        x = p;
    }
    path
}

/// Solves the network built from `M(G)` over the smallest `GF(2^l)` holding
/// the alphabet. Tree edges carry standard basis vectors; every other edge
/// carries the sum of the basis vectors along its fundamental cycle, and a
/// loop carries zero.
pub fn solve_graphic(g: &Graph, alphabet_size: u64) -> Result<GraphicSolution, SolveError> {
    solve_graphic_with(g, &ConstructionConfig { alphabet_size, ..Default::default() })
}

/// As [`solve_graphic`]; the construction's base is always the spanning forest.
pub fn solve_graphic_with(g: &Graph, cfg: &ConstructionConfig) -> Result<GraphicSolution, SolveError> {
    let field = FieldCtx::at_least(2, cfg.alphabet_size.max(2))?;
    let tree = spanning_forest(g);
    let rank = tree.len();
    let mut columns = vec![vec![FieldElem::ZERO; rank]; g.edges.len()];
    for (i, &e) in tree.iter().enumerate() {
        columns[e][i] = FieldElem::ONE;
    }
    for e in 0..g.edges.len() {
        if g.is_loop(e) || tree.binary_search(&e).is_ok() {
            continue;
        }
        let (u, v) = g.edges[e];
        for h in tree_path(g, &tree, u, v) {
            let i = tree.binary_search(&h).expect("path edges are tree edges");
            columns[e][i] = field.add(columns[e][i], FieldElem::ONE);
        }
    }
    let representation = Matrix::from_columns(&field, rank, &columns)?;
    let cfg = ConstructionConfig { base: Some(tree.clone()), ..cfg.clone() };
    let construction = construct(&Matroid::graphic(g.clone()), &cfg)?;
    let result = solve_representable(&construction.network, &construction.mapping, &representation)?;
    Ok(GraphicSolution { construction, tree, representation, result })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::simulate_all;

    #[test]
    fn triangle_chord_gets_the_sum() {
        let s = solve_graphic(&Graph::complete(3), 2).unwrap();
        assert_eq!(s.tree, vec![0, 1]);
        let f = &s.result.field;
        assert_eq!(s.representation.column(2), f.vector_from_indices(&[1, 1]).unwrap());
    }

    #[test]
    fn k4_decodes_everywhere() {
        let s = solve_graphic(&Graph::complete(4), 2).unwrap();
        assert_eq!(s.tree, vec![0, 1, 2]);
        let all = simulate_all(&s.construction.network, &s.result.code, 1 << 20).unwrap();
        assert_eq!(all.assignments, 8);
        assert!(all.all_decoded());
    }

    #[test]
    fn forest_is_pure_routing() {
        let g = Graph::new(5, vec![(0, 1), (1, 2), (3, 4)]).unwrap();
        let s = solve_graphic(&g, 2).unwrap();
        assert!(s.construction.trace.relays.is_empty());
        assert!(s.construction.trace.circuit_receivers.is_empty());
        assert_eq!(s.construction.trace.base_receivers.len(), 1);
        assert_eq!(s.representation, Matrix::identity(&s.result.field, 3));
    }

    #[test]
    fn loops_and_parallel_edges() {
        let g = Graph::new(3, vec![(0, 1), (1, 1), (0, 1), (1, 2)]).unwrap();
        let s = solve_graphic(&g, 2).unwrap();
        assert_eq!(s.tree, vec![0, 3]);
        assert!(s.representation.column(1).iter().all(|a| a.is_zero()));
        assert_eq!(s.representation.column(2), s.representation.column(0));
        assert!(simulate_all(&s.construction.network, &s.result.code, 1 << 20).unwrap().all_decoded());
    }

    #[test]
    fn larger_alphabet_uses_an_extension_field() {
        let s = solve_graphic(&Graph::cycle(4), 5).unwrap();
        assert_eq!(s.result.field.order(), 8);
    }

    #[test]
    fn bfs_tree_prefers_the_smallest_root() {
        // Root 0 reaches 2 and 1 directly; 3 hangs off 2.
        let g = Graph::new(4, vec![(2, 3), (0, 2), (1, 2), (0, 1)]).unwrap();
        assert_eq!(spanning_forest(&g), vec![0, 1, 3]);
    }
}

//! Shared test corpus: small uniform, graphic and vector matroids with
//! representations, plus brute-force helpers.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use matnet::field::{FieldCtx, FieldElem, Matrix};
use matnet::matroid::{Graph, Matroid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x6d61_746e_6574;

/// Every subset of `0..n`, as sorted vectors, in bitmask order.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

/// Smallest field of characteristic 2 with at least `n` elements.
pub fn gf2_at_least(n: u64) -> FieldCtx {
    FieldCtx::at_least(2, n.max(2)).unwrap()
}

/// `c × d` representation of `U_{c,d}`: Vandermonde columns `(1, a, ..., a^{c-1})`
/// for distinct field elements `a`, plus the column `e_c` when one more
/// column is needed than the field has elements.
pub fn vandermonde(c: usize, d: usize) -> Matrix {
    let field = gf2_at_least(d.saturating_sub(1) as u64);
    let mut columns: Vec<Vec<FieldElem>> = field
        .elements()
        .take(d)
        .map(|a| (0..c).map(|i| field.pow(a, i as u64)).collect())
        .collect();
    if columns.len() < d {
        let mut inf = vec![FieldElem::ZERO; c];
        if c > 0 {
            inf[c - 1] = FieldElem::ONE;
        }
        columns.push(inf);
    }
    assert_eq!(columns.len(), d, "field too small for U({c},{d})");
    Matrix::from_columns(&field, c, &columns).unwrap()
}

/// `(c, d)` with `0 <= c <= d`, `1 <= d <= max_d`.
pub fn uniform_params(max_d: usize) -> Vec<(usize, usize)> {
    (1..=max_d).flat_map(|d| (0..=d).map(move |c| (c, d))).collect()
}

fn canonical_by_first_appearance(edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut label = [usize::MAX; 16];
    let mut next = 0;
    let mut out: Vec<(usize, usize)> = edges
        .iter()
        .map(|&(u, v)| {
            for x in [u, v] {
                if label[x] == usize::MAX {
                    label[x] = next;
                    next += 1;
                }
            }
            let (a, b) = (label[u], label[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    out.sort_unstable();
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn canonical(edges: &[(usize, usize)], vertices: usize, perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
    perms
        .iter()
        .filter(|p| p.len() == vertices)
        .map(|p| {
            let mut e: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                .collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap_or_default()
}

/// All multigraphs (loops and parallel edges allowed) with at most
/// `max_edges` edges and no isolated vertices, up to isomorphism, on at most
/// `max_vertices` vertices. The empty graph has a single vertex.
///
/// Every graphic matroid on at most 5 elements arises from a connected graph
/// on at most 6 vertices, so `small_graphs(5, 6)` covers them all.
pub fn small_graphs(max_edges: usize, max_vertices: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> =
        (0..max_vertices).flat_map(|u| (u..max_vertices).map(move |v| (u, v))).collect();
    let mut first_pass: HashSet<Vec<(usize, usize)>> = HashSet::new();
    fn grow(
        start: usize,
        current: &mut Vec<(usize, usize)>,
        pairs: &[(usize, usize)],
        max_edges: usize,
        out: &mut HashSet<Vec<(usize, usize)>>,
    ) {
        out.insert(canonical_by_first_appearance(current));
        if current.len() == max_edges {
            return;
        }
        for i in start..pairs.len() {
            current.push(pairs[i]);
            grow(i, current, pairs, max_edges, out);
            current.pop();
        }
    }
    grow(0, &mut Vec::new(), &pairs, max_edges, &mut first_pass);

    let perms: Vec<Vec<usize>> = (0..=max_vertices).flat_map(permutations).collect();
    let mut seen: BTreeSet<(usize, Vec<(usize, usize)>)> = BTreeSet::new();
    for edges in first_pass {
        let vertices = edges.iter().map(|&(_, v)| v + 1).max().unwrap_or(1);
        if vertices > max_vertices {
            continue;
        }
        seen.insert((edges.len(), canonical(&edges, vertices, &perms)));
    }
    seen.into_iter()
        .map(|(_, edges)| {
            let vertices = edges.iter().map(|&(_, v)| v + 1).max().unwrap_or(1);
            Graph::new(vertices, edges).unwrap()
        })
        .collect()
}

/// `count` random matrices with 1..=3 rows and 1..=6 columns over GF(2) or GF(3).
pub fn random_matrices(count: usize) -> Vec<Matrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..count)
        .map(|_| {
            let field = FieldCtx::prime(if rng.random_bool(0.5) { 2 } else { 3 }).unwrap();
            let rows = rng.random_range(1..=3);
            let cols = rng.random_range(1..=6);
            let q = field.order() as u64;
            let data: Vec<Vec<u64>> = (0..rows).map(|_| (0..cols).map(|_| rng.random_range(0..q)).collect()).collect();
            Matrix::from_indices(&field, &data, cols).unwrap()
        })
        .collect()
}

pub struct Instance {
    pub name: String,
    pub matroid: Matroid,
    pub representation: Matrix,
}

/// Representable matroids with a representation each: `U_{c,d}` for `d <= 5`,
/// every graphic matroid on at most 5 edges (incidence matrix over GF(2)),
/// and 100 random vector matroids over GF(2)/GF(3).
pub fn representable_corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    for (c, d) in uniform_params(5) {
        out.push(Instance {
            name: format!("U({c},{d})"),
            matroid: Matroid::uniform(c, d).unwrap(),
            representation: vandermonde(c, d),
        });
    }
    let gf2 = FieldCtx::prime(2).unwrap();
    for g in small_graphs(5, 6) {
        out.push(Instance {
            name: format!("M(G) {:?}", g.edges),
            representation: g.incidence_matrix(&gf2),
            matroid: Matroid::graphic(g),
        });
    }
    for (i, m) in random_matrices(100).into_iter().enumerate() {
        out.push(Instance { name: format!("random #{i} over {}", m.field()), matroid: Matroid::vector(m.clone()), representation: m });
    }
    out
}

/// Whether the vector matroid of `a` has exactly the independent sets of `m`.
pub fn represents(a: &Matrix, m: &Matroid) -> bool {
    a.cols() == m.ground_size()
        && subsets(a.cols()).all(|s| (a.select_columns(&s).rank() == s.len()) == m.is_independent(&s).unwrap())
}

/// Edge sets of the simple cycles of `g` (loops included), found as the
/// minimal nonempty edge sets in which every vertex has even degree.
pub fn graph_cycles(g: &Graph) -> Vec<Vec<usize>> {
    let even: Vec<Vec<usize>> = subsets(g.edges.len())
        .filter(|s| !s.is_empty())
        .filter(|s| {
            let mut deg = vec![0usize; g.vertices];
            for &e in s {
                let (u, v) = g.edges[e];
                deg[u] += 1;
                deg[v] += 1;
            }
            deg.iter().all(|d| d % 2 == 0)
        })
        .collect();
    even.iter()
        .filter(|s| !even.iter().any(|t| t.len() < s.len() && t.iter().all(|x| s.contains(x))))
        .cloned()
        .collect()
}

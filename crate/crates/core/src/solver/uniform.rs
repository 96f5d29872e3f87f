use itertools::Itertools;

use super::{solve_representable, SolveError, SolveResult};
use crate::field::{FieldCtx, FieldElem, FieldError, Matrix};
use crate::matroid::Matroid;
use crate::matroidal::{construct, Construction, ConstructionConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformSolution {
    pub construction: Construction,
    /// `c × d` representation: column `x` is the vector chosen for element `x`.
    pub representation: Matrix,
    pub result: SolveResult,
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

/// Smallest `GF(p^l)` with at least `alphabet_size` elements and, when
/// `2 <= c < d`, at least `C(d-1, c-1)` elements.
pub fn uniform_field(c: usize, d: usize, p: u32, alphabet_size: u64) -> Result<FieldCtx, FieldError> {
    let bound = if c >= 2 && d > c { binomial(d - 1, c - 1) } else { 0 };
    FieldCtx::at_least(p, alphabet_size.max(bound).max(2))
}

/// A nonzero vector orthogonal to every row of `rows`, when the rows span a
/// hyperplane of `F^c`: then `n · v = 0` exactly for `v` in that span.
fn hyperplane_normal(field: &FieldCtx, rows: &[&Vec<FieldElem>], c: usize) -> Option<Vec<FieldElem>> {
    let owned: Vec<Vec<FieldElem>> = rows.iter().map(|r| r.to_vec()).collect();
    let rref = Matrix::from_rows(field, owned, c).ok()?.rref();
    if rref.rank() + 1 != c {
        return None;
    }
    let free = (0..c).find(|j| !rref.pivots.contains(j))?;
    let mut n = vec![FieldElem::ZERO; c];
    n[free] = FieldElem::ONE;
    for (i, &p) in rref.pivots.iter().enumerate() {
        n[p] = field.neg(rref.matrix[(i, free)]);
    }
    Some(n)
}

/// Vectors in `F^c` any `c` of which form a basis.
///
/// `order` lists elements in the order they receive vectors: the first `c`
/// get the standard basis, each later one the first nonzero vector (in
/// canonical order) outside the span of every `c - 1` earlier vectors.
/// Returns `None` if the field is too small for some step.
pub fn greedy_mds_vectors(field: &FieldCtx, c: usize, order: &[usize]) -> Option<Vec<Vec<FieldElem>>> {
    let d = order.len();
    let mut by_element: Vec<Option<Vec<FieldElem>>> = vec![None; order.iter().max().map_or(0, |&m| m + 1)];
    let mut assigned: Vec<Vec<FieldElem>> = Vec::with_capacity(d);
    // Normals of the hyperplanes spanned by (c - 1)-subsets of `assigned`;
    // `v` avoids every such span exactly when no normal is orthogonal to it.
    let mut normals: Vec<Vec<FieldElem>> = if c == 1 { vec![vec![FieldElem::ONE]] } else { Vec::new() };
    for (k, &x) in order.iter().enumerate() {
        let v = if k < c {
            field.unit_vector(c, k)
        } else {
            let total = field.space_size(c) as u64;
            (1..total).map(|i| field.vector_at(c, i)).find(|v| normals.iter().all(|n| !field.dot(n, v).is_zero()))?
        };
        if c >= 2 && k + 2 >= c {
            for mut subset in assigned.iter().combinations(c - 2) {
                subset.push(&v);
                normals.push(hyperplane_normal(field, &subset, c).expect("any c - 1 chosen vectors are independent"));
            }
        }
        assigned.push(v.clone());
        by_element[x] = Some(v);
    }
    Some(by_element.into_iter().map(|v| v.unwrap_or_else(|| vec![FieldElem::ZERO; c])).collect())
}

/// Solves the network built from `U_{c,d}` over the smallest sufficient
/// field of characteristic `p`.
pub fn solve_uniform(c: usize, d: usize, p: u32, alphabet_size: u64) -> Result<UniformSolution, SolveError> {
    solve_uniform_with(c, d, p, &ConstructionConfig { alphabet_size, ..Default::default() })
}

pub fn solve_uniform_with(c: usize, d: usize, p: u32, cfg: &ConstructionConfig) -> Result<UniformSolution, SolveError> {
    if c > d {
        return Err(SolveError::BadUniform { c, d });
    }
    let field = uniform_field(c, d, p, cfg.alphabet_size)?;
    let matroid = Matroid::uniform(c, d)?;
    let construction = construct(&matroid, cfg)?;
    let trace = &construction.trace;
    let mut order = trace.base.clone();
    order.extend(trace.relays.iter().map(|r| r.x0));
    let vectors = greedy_mds_vectors(&field, c, &order).expect("the field meets the counting bound");
    // Elements never reached by the construction would only be loops; U(c,d) with c >= 1 has none.
    let columns: Vec<Vec<FieldElem>> = (0..d).map(|x| vectors.get(x).cloned().unwrap_or_else(|| vec![FieldElem::ZERO; c])).collect();
    let representation = Matrix::from_columns(&field, c, &columns)?;
    let result = solve_representable(&construction.network, &construction.mapping, &representation)?;
    Ok(UniformSolution { construction, representation, result })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{simulate_all, validate_code};

    fn every_c_subset_is_a_basis(m: &Matrix, c: usize) -> bool {
        (0..m.cols()).combinations(c).all(|s| m.select_columns(&s).rank() == c)
    }

    #[test]
    fn u23_over_gf2() {
        let s = solve_uniform(2, 3, 2, 2).unwrap();
        let f = s.result.field.clone();
        assert_eq!(f.order(), 2);
        let expect = Matrix::from_indices(&f, &[vec![1, 0, 1], vec![0, 1, 1]], 3).unwrap();
        assert_eq!(s.representation, expect);
        assert!(simulate_all(&s.construction.network, &s.result.code, 1 << 20).unwrap().all_decoded());
    }

    #[test]
    fn u24_needs_gf4() {
        let s = solve_uniform(2, 4, 2, 2).unwrap();
        assert_eq!(s.result.field.order(), 4);
        assert!(every_c_subset_is_a_basis(&s.representation, 2));
        assert!(validate_code(&s.construction.network, &s.result.code).unwrap().is_solution());
    }

    #[test]
    fn rank_one_is_routing_over_gf3() {
        let s = solve_uniform(1, 5, 3, 2).unwrap();
        assert_eq!(s.result.field.order(), 3);
        let one = vec![FieldElem::ONE];
        assert!(s.result.code.edge_vectors().values().all(|v| *v == one));
    }

    #[test]
    fn degenerate_cases() {
        let s = solve_uniform(0, 3, 2, 2).unwrap();
        assert_eq!(s.construction.network.message_count(), 0);
        let s = solve_uniform(3, 3, 2, 2).unwrap();
        assert!(s.construction.trace.relays.is_empty());
        assert!(validate_code(&s.construction.network, &s.result.code).unwrap().is_solution());
        assert!(matches!(solve_uniform(4, 3, 2, 2), Err(SolveError::BadUniform { .. })));
    }

    #[test]
    fn field_choice_meets_both_bounds() {
        assert_eq!(uniform_field(2, 4, 2, 2).unwrap().order(), 4);
        assert_eq!(uniform_field(2, 4, 3, 2).unwrap().order(), 3);
        assert_eq!(uniform_field(3, 6, 2, 2).unwrap().order(), 16);
        assert_eq!(uniform_field(2, 3, 2, 5).unwrap().order(), 8);
        assert_eq!(uniform_field(1, 3, 5, 2).unwrap().order(), 5);
    }

    /// The first canonical vector outside every span of c - 1 earlier
    /// vectors, tested with plain rank computations.
    fn naive_greedy(field: &FieldCtx, c: usize, d: usize) -> Vec<Vec<FieldElem>> {
        let mut out: Vec<Vec<FieldElem>> = (0..c).map(|i| field.unit_vector(c, i)).collect();
        while out.len() < d {
            let v = (1..field.space_size(c) as u64)
                .map(|i| field.vector_at(c, i))
                .find(|v| {
                    out.iter().combinations(c - 1).all(|s| {
                        let mut cols: Vec<Vec<FieldElem>> = s.into_iter().cloned().collect();
                        cols.push(v.clone());
                        Matrix::from_columns(field, c, &cols).unwrap().rank() == c
                    })
                })
                .unwrap();
            out.push(v);
        }
        out
    }

    #[test]
    fn greedy_matches_rank_oracle() {
        for (c, d, p) in [(2, 4, 2), (2, 5, 3), (3, 5, 2), (3, 6, 3), (4, 6, 2), (1, 4, 2)] {
            let f = uniform_field(c, d, p, 2).unwrap();
            let order: Vec<usize> = (0..d).collect();
            assert_eq!(greedy_mds_vectors(&f, c, &order).unwrap(), naive_greedy(&f, c, d), "U({c},{d}) p={p}");
        }
    }

    #[test]
    fn greedy_vectors_are_mds() {
        for (c, d) in [(2, 5), (3, 5), (3, 6), (4, 6)] {
            for p in [2, 3] {
                let f = uniform_field(c, d, p, 2).unwrap();
                let order: Vec<usize> = (0..d).collect();
                let vs = greedy_mds_vectors(&f, c, &order).unwrap();
                let m = Matrix::from_columns(&f, c, &vs).unwrap();
                assert!(every_c_subset_is_a_basis(&m, c), "U({c},{d}) over {f}");
            }
        }
    }
}

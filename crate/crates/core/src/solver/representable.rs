use super::{SolveError, SolveResult};
use crate::field::{enlarge, Matrix};
use crate::matroid::Matroid;
use crate::matroidal::{verify_matroidal, NetworkMatroidMapping};
use crate::network::{validate_code, GlobalCode, Network};

/// Scalar-linear solution of a network that is matroidal with respect to the
/// vector matroid of `a`.
///
/// The representation is embedded into a larger field first when its field
/// is smaller than the alphabet. Redundant rows are dropped, the message
/// columns are extended to a column basis (scanning left to right), the basis
/// is moved to the front and the matrix row-reduced to `[I | A']`. Each edge
/// then carries the column of its ground element. If the basis is larger than
/// the message set, extra messages on an isolated node fill the gap while
/// solving and are projected out afterwards.
pub fn solve_representable(n: &Network, f: &NetworkMatroidMapping, a: &Matrix) -> Result<SolveResult, SolveError> {
    let a = if (a.field().order() as u64) < n.alphabet_size() {
        enlarge(a.field(), n.alphabet_size())?.apply_matrix(a)?
    } else {
        a.clone()
    };
    let field = a.field().clone();
    if let Some(v) = verify_matroidal(n, &Matroid::vector(a.clone()), f)? {
        return Err(SolveError::NotMatroidal(v));
    }

    let reduced = a.rref();
    let d1 = reduced.rank();
    let rows: Vec<usize> = (0..d1).collect();
    let a1 = reduced.matrix.select_rows(&rows);

    let mut basis: Vec<usize> = f.messages.clone();
    for j in 0..a1.cols() {
        if basis.len() == d1 {
            break;
        }
        if basis.contains(&j) {
            continue;
        }
        basis.push(j);
        if a1.select_columns(&basis).rank() < basis.len() {
            basis.pop();
        }
    }
    let mut order = basis.clone();
    order.extend((0..a1.cols()).filter(|j| !basis.contains(j)));
    let normalized = a1.select_columns(&order).rref().matrix;
    let mut position = vec![0; order.len()];
    for (i, &j) in order.iter().enumerate() {
        position[j] = i;
    }

    let dummy = d1 - n.message_count();
    let padded = n.with_dummy_messages(dummy);
    let edges = f.edges.iter().map(|&x| normalized.column(position[x])).collect();
    let full = GlobalCode::from_edge_vectors(&padded, &field, edges);
    let report = validate_code(&padded, &full)?;
    if !report.is_solution() {
        return Err(SolveError::NotASolution(Box::new(report)));
    }
    let code = full.project(n.message_count());
    let report = validate_code(n, &code)?;
    if !report.is_solution() {
        return Err(SolveError::NotASolution(Box::new(report)));
    }
    Ok(SolveResult { code, field, dummy_messages: dummy, normalized, column_order: order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use crate::matroid::Graph;
    use crate::matroidal::{construct, ConstructionConfig};
    use crate::network::simulate_all;

    fn gf(p: u32) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    #[test]
    fn u23_butterfly_gets_the_xor_bottleneck() {
        let f = gf(2);
        let a = Matrix::from_indices(&f, &[vec![1, 0, 1], vec![0, 1, 1]], 3).unwrap();
        let c = construct(&Matroid::uniform(2, 3).unwrap(), &ConstructionConfig::default()).unwrap();
        let r = solve_representable(&c.network, &c.mapping, &a).unwrap();
        let relay = &c.trace.relays[0];
        let e0 = c.network.in_edges(relay.node)[0];
        assert_eq!(r.code.edge(e0).unwrap(), &f.vector_from_indices(&[1, 1]).unwrap()[..]);
        assert_eq!(r.dummy_messages, 0);
        assert!(simulate_all(&c.network, &r.code, 1 << 20).unwrap().all_decoded());
    }

    #[test]
    fn normalized_input_is_unchanged() {
        let f = gf(3);
        let a = Matrix::from_indices(&f, &[vec![1, 0, 1, 1], vec![0, 1, 1, 2]], 4).unwrap();
        let c = construct(&Matroid::vector(a.clone()), &ConstructionConfig::default()).unwrap();
        let r = solve_representable(&c.network, &c.mapping, &a).unwrap();
        assert_eq!(r.normalized, a);
        assert_eq!(r.column_order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn k4_incidence_representation_solves_over_gf2() {
        let f = gf(2);
        let g = Graph::complete(4);
        let a = g.incidence_matrix(&f);
        let c = construct(&Matroid::graphic(g), &ConstructionConfig::default()).unwrap();
        let r = solve_representable(&c.network, &c.mapping, &a).unwrap();
        assert_eq!(r.normalized.rows(), 3);
        let all = simulate_all(&c.network, &r.code, 1 << 20).unwrap();
        assert_eq!(all.assignments, 8);
        assert!(all.all_decoded());
    }

    #[test]
    fn dummy_messages_fill_a_smaller_message_set() {
        let f = gf(2);
        // Network built on the sub-base {0}; the matroid has rank 2.
        let a = Matrix::from_indices(&f, &[vec![1, 0, 1], vec![0, 1, 1]], 3).unwrap();
        let mut b = crate::network::NetworkBuilder::new(2);
        let m = b.add_message("m1");
        let s = b.add_node("s");
        let t = b.add_node("t");
        b.add_source(s, m);
        b.add_demand(t, m);
        b.add_edge(s, t);
        let n = b.build().unwrap();
        let map = NetworkMatroidMapping::new(vec![0], vec![0]);
        let r = solve_representable(&n, &map, &a).unwrap();
        assert_eq!(r.dummy_messages, 1);
        assert_eq!(r.code.dimension(), 1);
        assert!(validate_code(&n, &r.code).unwrap().is_solution());
    }

    #[test]
    fn small_field_is_enlarged_for_the_alphabet() {
        let f = gf(2);
        let a = Matrix::from_indices(&f, &[vec![1, 0, 1], vec![0, 1, 1]], 3).unwrap();
        let cfg = ConstructionConfig { alphabet_size: 3, ..Default::default() };
        let c = construct(&Matroid::vector(a.clone()), &cfg).unwrap();
        let r = solve_representable(&c.network, &c.mapping, &a).unwrap();
        assert_eq!(r.field.order(), 4);
        assert!(validate_code(&c.network, &r.code).unwrap().is_solution());
    }

    #[test]
    fn non_matroidal_input_names_the_condition() {
        let f = gf(2);
        // U(2,4) is not representable over GF(2): column 3 repeats column 2.
        let a = Matrix::from_indices(&f, &[vec![1, 0, 1, 1], vec![0, 1, 1, 1]], 4).unwrap();
        let c = construct(&Matroid::uniform(2, 4).unwrap(), &ConstructionConfig::default()).unwrap();
        match solve_representable(&c.network, &c.mapping, &a) {
            Err(SolveError::NotMatroidal(v)) => assert_eq!(v.condition(), 3),
            other => panic!("{other:?}"),
        }
    }
}

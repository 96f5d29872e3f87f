use super::SolveError;
use crate::field::{FieldElem, Matrix};
use crate::matroidal::NetworkMatroidMapping;
use crate::network::{validate_code, GlobalCode, Network};

/// Representation of a matroid the network is matroidal for, read off a
/// solution: columns are the message vectors (standard basis, message order)
/// followed by the edge vectors in tail order. `f` sends each message and
/// edge to its column.
pub fn extract_representable(n: &Network, code: &GlobalCode) -> Result<(Matrix, NetworkMatroidMapping), SolveError> {
    let report = validate_code(n, code)?;
    if !report.is_solution() {
        return Err(SolveError::NotASolution(Box::new(report)));
    }
    let field = code.field();
    let dim = n.message_count();
    let mut columns: Vec<Vec<FieldElem>> = (0..dim).map(|m| field.unit_vector(dim, m)).collect();
    let mut edges = vec![0; n.edges().len()];
    for e in n.edges_in_tail_order() {
        edges[e] = columns.len();
        columns.push(code.edge(e).expect("validated").to_vec());
    }
    let matrix = Matrix::from_columns(field, dim, &columns)?;
    Ok((matrix, NetworkMatroidMapping::new((0..dim).collect(), edges)))
}

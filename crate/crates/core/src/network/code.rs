use std::collections::BTreeMap;

use serde::Serialize;

use super::{EdgeId, InItem, MessageId, Network, NetworkError, NodeId};
use crate::field::{in_span, FieldCtx, FieldElem};

/// Global coding vectors for the edges of a network and its
/// `(node, message)` source and demand pairs.
///
/// Coordinates follow the network's message order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalCode {
    field: FieldCtx,
    dimension: usize,
    edges: BTreeMap<EdgeId, Vec<FieldElem>>,
    pairs: BTreeMap<(NodeId, MessageId), Vec<FieldElem>>,
}

impl GlobalCode {
    pub fn new(field: &FieldCtx, dimension: usize) -> Self {
        GlobalCode { field: field.clone(), dimension, edges: BTreeMap::new(), pairs: BTreeMap::new() }
    }

    /// Code with the given edge vectors; every source and demand pair gets
    /// the standard basis vector of its message.
    pub fn from_edge_vectors(network: &Network, field: &FieldCtx, edges: Vec<Vec<FieldElem>>) -> Self {
        let dim = network.message_count();
        let mut code = GlobalCode::new(field, dim);
        for (e, v) in edges.into_iter().enumerate() {
            code.set_edge(e, v);
        }
        code.fill_standard_pairs(network);
        code
    }

    /// Sets `φ_{x,m} = e_m` for every source and demand pair of `network`.
    pub fn fill_standard_pairs(&mut self, network: &Network) {
        let dim = self.dimension;
        for (x, m) in network.sources().chain(network.demands()) {
            let v = self.field.unit_vector(dim, m);
            self.pairs.insert((x, m), v);
        }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn set_edge(&mut self, edge: EdgeId, v: Vec<FieldElem>) {
        self.edges.insert(edge, v);
    }

    pub fn set_pair(&mut self, node: NodeId, message: MessageId, v: Vec<FieldElem>) {
        self.pairs.insert((node, message), v);
    }

    pub fn edge(&self, edge: EdgeId) -> Option<&[FieldElem]> {
        self.edges.get(&edge).map(|v| v.as_slice())
    }

    pub fn pair(&self, node: NodeId, message: MessageId) -> Option<&[FieldElem]> {
        self.pairs.get(&(node, message)).map(|v| v.as_slice())
    }

    pub fn edge_vectors(&self) -> &BTreeMap<EdgeId, Vec<FieldElem>> {
        &self.edges
    }

    pub fn pair_vectors(&self) -> &BTreeMap<(NodeId, MessageId), Vec<FieldElem>> {
        &self.pairs
    }

    /// Keeps only the first `dimension` coordinates of every vector.
    pub fn project(&self, dimension: usize) -> GlobalCode {
        let cut = |v: &Vec<FieldElem>| v[..dimension.min(v.len())].to_vec();
        GlobalCode {
            field: self.field.clone(),
            dimension,
            edges: self.edges.iter().map(|(&k, v)| (k, cut(v))).collect(),
            pairs: self.pairs.iter().filter(|(&(_, m), _)| m < dimension).map(|(&k, v)| (k, cut(v))).collect(),
        }
    }

    /// Vectors of `In(x)`, in `In(x)` order.
    fn in_vectors(&self, n: &Network, x: NodeId) -> Vec<&[FieldElem]> {
        n.in_items(x)
            .into_iter()
            .map(|item| match item {
                InItem::Message(m) => self.pair(x, m).expect("checked by validate"),
                InItem::Edge(e) => self.edge(e).expect("checked by validate"),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CodeViolation {
    /// `φ_{x,m}` for a generated message is not the standard basis vector of `m`.
    SourceVectorNotStandard { node: NodeId, message: MessageId },
    /// `φ_{x,m}` recorded for a demand is not the standard basis vector of `m`.
    DemandVectorNotStandard { node: NodeId, message: MessageId },
    /// An out-edge vector lies outside the span of `In(tail)`.
    EdgeOutsideSpan { node: NodeId, edge: EdgeId },
    /// `|F| < |A|`.
    FieldTooSmall { field_order: u32, alphabet_size: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeReport {
    pub valid: bool,
    pub satisfied: Vec<(NodeId, MessageId)>,
    pub unsatisfied: Vec<(NodeId, MessageId)>,
    pub violations: Vec<CodeViolation>,
}

impl CodeReport {
    /// Valid and every demand satisfied.
    pub fn is_solution(&self) -> bool {
        self.valid && self.unsatisfied.is_empty()
    }

    /// First node named by a violation or an unsatisfied demand.
    pub fn first_failing_node(&self) -> Option<NodeId> {
        self.violations
            .iter()
            .find_map(|v| match *v {
                CodeViolation::SourceVectorNotStandard { node, .. }
                | CodeViolation::DemandVectorNotStandard { node, .. }
                | CodeViolation::EdgeOutsideSpan { node, .. } => Some(node),
                CodeViolation::FieldTooSmall { .. } => None,
            })
            .or_else(|| self.unsatisfied.first().map(|&(x, _)| x))
    }
}

fn check_shape(n: &Network, code: &GlobalCode) -> Result<(), NetworkError> {
    if code.dimension != n.message_count() {
        return Err(NetworkError::DimensionMismatch { expected: n.message_count(), found: code.dimension });
    }
    let mut missing = Vec::new();
    for e in 0..n.edges().len() {
        if code.edge(e).is_none() {
            missing.push(format!("edge {e}"));
        }
    }
    for (x, m) in n.sources().chain(n.demands()) {
        if code.pair(x, m).is_none() {
            let key = format!("{x}:{}", n.messages()[m]);
            if !missing.contains(&key) {
                missing.push(key);
            }
        }
    }
    if !missing.is_empty() {
        return Err(NetworkError::MissingVectors(missing));
    }
    let lengths = code.edges.iter().map(|(e, v)| (format!("edge {e}"), v)).chain(
        code.pairs.iter().map(|((x, m), v)| (format!("{x}:{m}"), v)),
    );
    for (key, v) in lengths {
        if v.len() != code.dimension {
            return Err(NetworkError::VectorLength { key, expected: code.dimension, found: v.len() });
        }
        if let Some(&bad) = v.iter().find(|&&a| !code.field.contains(a)) {
            return Err(crate::field::FieldError::ElementOutOfRange { index: bad.index() as u64, order: code.field.order() }.into());
        }
    }
    Ok(())
}

/// Checks validity of a global code and which demands it satisfies.
///
/// A code is valid when every out-edge vector of every node lies in the span
/// of the node's `In` vectors; a demand `(x, m)` is satisfied when the
/// standard basis vector of `m` lies in that span.
pub fn validate_code(n: &Network, code: &GlobalCode) -> Result<CodeReport, NetworkError> {
    check_shape(n, code)?;
    let f = &code.field;
    let dim = code.dimension;
    let mut violations = Vec::new();
    if (f.order() as u64) < n.alphabet_size() {
        violations.push(CodeViolation::FieldTooSmall { field_order: f.order(), alphabet_size: n.alphabet_size() });
    }
    for (x, m) in n.sources() {
        if code.pair(x, m) != Some(&f.unit_vector(dim, m)[..]) {
            violations.push(CodeViolation::SourceVectorNotStandard { node: x, message: m });
        }
    }
    for (x, m) in n.demands() {
        if code.pair(x, m) != Some(&f.unit_vector(dim, m)[..]) {
            violations.push(CodeViolation::DemandVectorNotStandard { node: x, message: m });
        }
    }
    let (mut satisfied, mut unsatisfied) = (Vec::new(), Vec::new());
    for &x in n.topological_order() {
        let span = code.in_vectors(n, x);
        for &e in n.out_edges(x) {
            if in_span(f, code.edge(e).unwrap(), &span)?.is_none() {
                violations.push(CodeViolation::EdgeOutsideSpan { node: x, edge: e });
            }
        }
        for &m in &n.node(x).demands {
            if in_span(f, &f.unit_vector(dim, m), &span)?.is_some() {
                satisfied.push((x, m));
            } else {
                unsatisfied.push((x, m));
            }
        }
    }
    satisfied.sort_unstable();
    unsatisfied.sort_unstable();
    Ok(CodeReport { valid: violations.is_empty(), satisfied, unsatisfied, violations })
}

/// Local edge and decoding functions equivalent to a valid global code.
///
/// Each edge function is a coefficient vector over `In(tail)`; each decoding
/// function a coefficient vector over `In(receiver)`, absent when the demand
/// is not satisfiable from the global code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalCode {
    field: FieldCtx,
    edge_functions: Vec<Vec<FieldElem>>,
    decoders: BTreeMap<(NodeId, MessageId), Option<Vec<FieldElem>>>,
}

impl LocalCode {
    pub fn derive(n: &Network, code: &GlobalCode) -> Result<LocalCode, NetworkError> {
        let report = validate_code(n, code)?;
        if !report.valid {
            return Err(NetworkError::InvalidCode(format!("{:?}", report.violations)));
        }
        let f = &code.field;
        let mut edge_functions = vec![Vec::new(); n.edges().len()];
        let mut decoders = BTreeMap::new();
        for x in 0..n.nodes().len() {
            let span = code.in_vectors(n, x);
            for &e in n.out_edges(x) {
                edge_functions[e] = in_span(f, code.edge(e).unwrap(), &span)?.expect("code is valid");
            }
            for &m in &n.node(x).demands {
                decoders.insert((x, m), in_span(f, &f.unit_vector(code.dimension, m), &span)?);
            }
        }
        Ok(LocalCode { field: f.clone(), edge_functions, decoders })
    }

    pub fn edge_function(&self, e: EdgeId) -> &[FieldElem] {
        &self.edge_functions[e]
    }

    pub fn decoder(&self, x: NodeId, m: MessageId) -> Option<&[FieldElem]> {
        self.decoders.get(&(x, m)).and_then(|d| d.as_deref())
    }

    /// Runs the network on one message assignment.
    pub fn run(&self, n: &Network, assignment: &[FieldElem]) -> Result<Simulation, NetworkError> {
        if assignment.len() != n.message_count() {
            return Err(NetworkError::AssignmentLength { expected: n.message_count(), found: assignment.len() });
        }
        let f = &self.field;
        let mut symbols = vec![FieldElem::ZERO; n.edges().len()];
        let inputs = |x: NodeId, symbols: &[FieldElem]| -> Vec<FieldElem> {
            n.in_items(x)
                .into_iter()
                .map(|item| match item {
                    InItem::Message(m) => assignment[m],
                    InItem::Edge(e) => symbols[e],
                })
                .collect()
        };
        for &x in n.topological_order() {
            let input = inputs(x, &symbols);
            for &e in n.out_edges(x) {
                symbols[e] = f.dot(&self.edge_functions[e], &input);
            }
        }
        let decoded = n
            .demands()
            .map(|(x, m)| {
                let value = self.decoder(x, m).map(|d| f.dot(d, &inputs(x, &symbols)));
                DecodedDemand { node: x, message: m, value, expected: assignment[m] }
            })
            .collect();
        Ok(Simulation { edge_symbols: symbols, decoded })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodedDemand {
    pub node: NodeId,
    pub message: MessageId,
    /// Decoder output, `None` when no linear decoder exists.
    pub value: Option<FieldElem>,
    pub expected: FieldElem,
}

impl DecodedDemand {
    pub fn is_correct(&self) -> bool {
        self.value == Some(self.expected)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Simulation {
    /// `c(e)` for every edge.
    pub edge_symbols: Vec<FieldElem>,
    pub decoded: Vec<DecodedDemand>,
}

impl Simulation {
    pub fn all_decoded(&self) -> bool {
        self.decoded.iter().all(DecodedDemand::is_correct)
    }
}

/// Propagates one message assignment through the local functions derived
/// from `code`, in topological order, and decodes every demand.
pub fn simulate(n: &Network, code: &GlobalCode, assignment: &[FieldElem]) -> Result<Simulation, NetworkError> {
    LocalCode::derive(n, code)?.run(n, assignment)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustiveSimulation {
    pub assignments: u64,
    pub failures: u64,
    pub first_failure: Option<Vec<FieldElem>>,
}

impl ExhaustiveSimulation {
    pub fn all_decoded(&self) -> bool {
        self.failures == 0
    }
}

/// Simulates every one of the `q^|μ|` message assignments.
pub fn simulate_all(n: &Network, code: &GlobalCode, limit: u64) -> Result<ExhaustiveSimulation, NetworkError> {
    let local = LocalCode::derive(n, code)?;
    let total = code.field.space_size(n.message_count());
    if total > limit as u128 {
        return Err(NetworkError::SearchSpaceTooLarge { required: total, cap: limit as u128 });
    }
    let mut report = ExhaustiveSimulation { assignments: total as u64, failures: 0, first_failure: None };
    for idx in 0..total as u64 {
        let a = code.field.vector_at(n.message_count(), idx);
        let sim = local.run(n, &a)?;
        // Edge symbols must agree with the global vectors: c(e) = a · φ_e.
        let consistent = sim
            .edge_symbols
            .iter()
            .enumerate()
            .all(|(e, &s)| s == code.field.dot(&a, code.edge(e).unwrap()));
        if !sim.all_decoded() || !consistent {
            report.failures += 1;
            report.first_failure.get_or_insert(a);
        }
    }
    Ok(report)
}

//! Command failures, their exit codes, and the JSON diagnostic written to stderr.

use matnet::field::FieldError;
use matnet::json::DocumentError;
use matnet::matroid::MatroidError;
use matnet::matroidal::{MatroidalError, MatroidalViolation};
use matnet::network::{CodeReport, CodeViolation, Network, NetworkError};
use matnet::solver::SolveError;
use serde_json::{json, Value};

#[derive(Debug)]
pub enum Failure {
    /// The operation ran and its result did not verify.
    Verification { message: String, details: Value },
    /// Unreadable input, schema violation, or bad parameters.
    Input(anyhow::Error),
    /// An enumeration or search cap was exceeded.
    Cap(String),
}

impl Failure {
    pub fn verification(message: impl Into<String>, details: Value) -> Self {
        Failure::Verification { message: message.into(), details }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification { .. } => 1,
            Failure::Input(_) => 2,
            Failure::Cap(_) => 3,
        }
    }

    pub fn diagnostic(&self) -> Value {
        match self {
            Failure::Verification { message, details } => {
                json!({ "error": "verification", "message": message, "details": details })
            }
            Failure::Input(e) => json!({ "error": "input", "message": format!("{e:#}") }),
            Failure::Cap(message) => json!({ "error": "cap", "message": message }),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<FieldError> for Failure {
    fn from(e: FieldError) -> Self {
        Failure::Input(e.into())
    }
}

impl From<MatroidError> for Failure {
    fn from(e: MatroidError) -> Self {
        match e {
            MatroidError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.into()),
        }
    }
}

impl From<NetworkError> for Failure {
    fn from(e: NetworkError) -> Self {
        match e {
            NetworkError::SearchSpaceTooLarge { .. } => Failure::Cap(e.to_string()),
            NetworkError::InvalidCode(_)
            | NetworkError::MissingVectors(_)
            | NetworkError::VectorLength { .. }
            | NetworkError::DimensionMismatch { .. } => Failure::verification(e.to_string(), Value::Null),
            _ => Failure::Input(e.into()),
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        match e {
            DocumentError::Network(e) => e.into(),
            DocumentError::Matroid(e) => e.into(),
            _ => Failure::Input(e.into()),
        }
    }
}

impl From<MatroidalError> for Failure {
    fn from(e: MatroidalError) -> Self {
        match e {
            MatroidalError::Matroid(e) => e.into(),
            MatroidalError::Network(e) => e.into(),
            _ => Failure::Input(e.into()),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::NotMatroidal(ref v) => Failure::verification(e.to_string(), json!(v)),
            SolveError::NotASolution(report) => {
                Failure::verification("code is not a solution", json!(report))
            }
            SolveError::Matroidal(e) => e.into(),
            SolveError::Network(e) => e.into(),
            SolveError::Matroid(e) => e.into(),
            SolveError::Field(e) => e.into(),
            SolveError::BadUniform { .. } => Failure::Input(e.into()),
        }
    }
}

fn node_name(n: &Network, x: usize) -> String {
    match n.nodes().get(x) {
        Some(node) if !node.label.is_empty() => format!("node {x} ({:?})", node.label),
        _ => format!("node {x}"),
    }
}

/// One line per problem in `report`, each naming the node concerned.
pub fn describe_report(n: &Network, report: &CodeReport) -> Vec<String> {
    let msg = |m: usize| n.messages().get(m).cloned().unwrap_or_else(|| m.to_string());
    let mut out: Vec<String> = report
        .violations
        .iter()
        .map(|v| match *v {
            CodeViolation::SourceVectorNotStandard { node, message } => {
                format!("{}: vector of generated message {} is not its unit vector", node_name(n, node), msg(message))
            }
            CodeViolation::DemandVectorNotStandard { node, message } => {
                format!("{}: vector of demanded message {} is not its unit vector", node_name(n, node), msg(message))
            }
            CodeViolation::EdgeOutsideSpan { node, edge } => {
                format!("{}: edge {edge} carries a vector outside the span of the node's inputs", node_name(n, node))
            }
            CodeViolation::FieldTooSmall { field_order, alphabet_size } => {
                format!("field of order {field_order} is smaller than the alphabet ({alphabet_size} symbols)")
            }
        })
        .collect();
    out.extend(
        report
            .unsatisfied
            .iter()
            .map(|&(x, m)| format!("{}: demand {} is not in the span of its inputs", node_name(n, x), msg(m))),
    );
    out
}

pub fn describe_violation(n: &Network, v: &MatroidalViolation) -> String {
    match v {
        MatroidalViolation::MessagesShareElement { first, second, element } => {
            format!("messages {} and {} both map to element {element}", n.messages()[*first], n.messages()[*second])
        }
        MatroidalViolation::MessagesDependent { elements } => {
            format!("message elements {elements:?} are dependent")
        }
        MatroidalViolation::RankIncrease { node, in_rank, in_out_rank } => format!(
            "{}: inputs have rank {in_rank} but {in_out_rank} together with demands and out-edges",
            node_name(n, *node)
        ),
    }
}

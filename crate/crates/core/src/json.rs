//! JSON documents for matrices, matroids, networks, mappings and codes.
//!
//! Field elements are written as their canonical integer index and fields by
//! name (`"p^l"`). Codes key edge vectors by edge id and pair vectors by
//! `"node:message"`, where `message` is the message name.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldCtx, FieldError, Matrix};
use crate::matroid::{Graph, Matroid, MatroidError};
use crate::matroidal::{Construction, NetworkMatroidMapping};
use crate::network::{Edge, GlobalCode, Network, NetworkError, Node};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocumentError {
    #[error("bad code key {0:?}: expected \"node:message\"")]
    BadKey(String),
    #[error("document has no mapping \"f\"")]
    MissingMapping,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixSpec {
    pub field: String,
    pub rows: Vec<Vec<u64>>,
    /// Needed only when there are no rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
}

impl MatrixSpec {
    pub fn from_matrix(m: &Matrix) -> Self {
        let rows = m.to_indices().into_iter().map(|r| r.into_iter().map(u64::from).collect()).collect();
        MatrixSpec { field: m.field().name(), rows, cols: (m.rows() == 0).then_some(m.cols()) }
    }

    pub fn to_matrix(&self) -> Result<Matrix, DocumentError> {
        let field: FieldCtx = self.field.parse()?;
        let cols = self.cols.or_else(|| self.rows.first().map(Vec::len)).unwrap_or(0);
        Ok(Matrix::from_indices(&field, &self.rows, cols)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatroidSpec {
    Uniform { c: usize, d: usize },
    Graphic { vertices: usize, edges: Vec<(usize, usize)> },
    Vector {
        field: String,
        rows: Vec<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cols: Option<usize>,
    },
    Explicit { ground_size: usize, independent_sets: Vec<Vec<usize>> },
}

impl MatroidSpec {
    pub fn to_matroid(&self) -> Result<Matroid, DocumentError> {
        Ok(match self {
            MatroidSpec::Uniform { c, d } => Matroid::uniform(*c, *d)?,
            MatroidSpec::Graphic { vertices, edges } => Matroid::graphic(Graph::new(*vertices, edges.clone())?),
            MatroidSpec::Vector { .. } => Matroid::vector(self.matrix().expect("vector kind")?),
            MatroidSpec::Explicit { ground_size, independent_sets } => {
                Matroid::explicit(*ground_size, independent_sets.clone())?
            }
        })
    }

    /// The representation carried by a `vector` spec.
    pub fn matrix(&self) -> Option<Result<Matrix, DocumentError>> {
        match self {
            MatroidSpec::Vector { field, rows, cols } => {
                Some(MatrixSpec { field: field.clone(), rows: rows.clone(), cols: *cols }.to_matrix())
            }
            _ => None,
        }
    }

    pub fn graph(&self) -> Option<Result<Graph, DocumentError>> {
        match self {
            MatroidSpec::Graphic { vertices, edges } => Some(Graph::new(*vertices, edges.clone()).map_err(Into::into)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: usize,
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub sources: Vec<String>,
    #[serde(default)]
    pub demands: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub messages: Vec<String>,
    pub alphabet_size: u64,
    pub nodes: Vec<NodeSpec>,
    pub edges: Vec<EdgeSpec>,
}

fn check_ids(kind: &'static str, ids: impl Iterator<Item = usize>) -> Result<(), NetworkError> {
    for (expected, found) in ids.enumerate() {
        if expected != found {
            return Err(NetworkError::NonConsecutiveId { kind, expected, found });
        }
    }
    Ok(())
}

impl NetworkSpec {
    pub fn from_network(n: &Network) -> Self {
        let names = |ms: &[usize]| ms.iter().map(|&m| n.messages()[m].clone()).collect();
        NetworkSpec {
            messages: n.messages().to_vec(),
            alphabet_size: n.alphabet_size(),
            nodes: n
                .nodes()
                .iter()
                .enumerate()
                .map(|(id, x)| NodeSpec { id, label: x.label.clone(), sources: names(&x.sources), demands: names(&x.demands) })
                .collect(),
            edges: n.edges().iter().enumerate().map(|(id, e)| EdgeSpec { id, tail: e.tail, head: e.head }).collect(),
        }
    }

    pub fn to_network(&self) -> Result<Network, DocumentError> {
        check_ids("node", self.nodes.iter().map(|x| x.id))?;
        check_ids("edge", self.edges.iter().map(|e| e.id))?;
        let lookup = |names: &[String]| {
            names
                .iter()
                .map(|s| self.messages.iter().position(|m| m == s).ok_or_else(|| NetworkError::UnknownMessageName(s.clone())))
                .collect::<Result<Vec<_>, _>>()
        };
        let nodes = self
            .nodes
            .iter()
            .map(|x| Ok(Node { label: x.label.clone(), sources: lookup(&x.sources)?, demands: lookup(&x.demands)? }))
            .collect::<Result<Vec<_>, NetworkError>>()?;
        let edges = self.edges.iter().map(|e| Edge { tail: e.tail, head: e.head }).collect();
        Ok(Network::new(self.messages.clone(), nodes, edges, self.alphabet_size)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingSpec {
    pub messages: Vec<usize>,
    pub edges: Vec<usize>,
}

/// A network, optionally with its network-matroid mapping `f` and the
/// auxiliary map `g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkDocument {
    #[serde(flatten)]
    pub network: NetworkSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<MappingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Option<usize>>>,
}

impl NetworkDocument {
    pub fn from_network(n: &Network) -> Self {
        NetworkDocument { network: NetworkSpec::from_network(n), f: None, g: None }
    }

    pub fn from_construction(c: &Construction) -> Self {
        NetworkDocument::with_mapping(&c.network, &c.mapping)
    }

    pub fn with_mapping(n: &Network, f: &NetworkMatroidMapping) -> Self {
        NetworkDocument {
            network: NetworkSpec::from_network(n),
            f: Some(MappingSpec { messages: f.messages.clone(), edges: f.edges.clone() }),
            g: (!f.g.is_empty()).then(|| f.g.clone()),
        }
    }

    pub fn network(&self) -> Result<Network, DocumentError> {
        self.network.to_network()
    }

    pub fn mapping(&self) -> Result<NetworkMatroidMapping, DocumentError> {
        let f = self.f.as_ref().ok_or(DocumentError::MissingMapping)?;
        Ok(NetworkMatroidMapping { messages: f.messages.clone(), edges: f.edges.clone(), g: self.g.clone().unwrap_or_default() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDocument {
    pub field: String,
    pub edges: BTreeMap<usize, Vec<u64>>,
    #[serde(default)]
    pub nodes: BTreeMap<String, Vec<u64>>,
}

impl CodeDocument {
    pub fn from_code(n: &Network, code: &GlobalCode) -> Self {
        let idx = |v: &Vec<crate::field::FieldElem>| v.iter().map(|a| a.index() as u64).collect();
        CodeDocument {
            field: code.field().name(),
            edges: code.edge_vectors().iter().map(|(&e, v)| (e, idx(v))).collect(),
            nodes: code
                .pair_vectors()
                .iter()
                .map(|(&(x, m), v)| (format!("{x}:{}", n.messages()[m]), idx(v)))
                .collect(),
        }
    }

    /// Pairs absent from the document are left unset, so validation reports them.
    pub fn to_code(&self, n: &Network) -> Result<GlobalCode, DocumentError> {
        let field: FieldCtx = self.field.parse()?;
        let mut code = GlobalCode::new(&field, n.message_count());
        for (&e, v) in &self.edges {
            code.set_edge(e, field.vector_from_indices(v)?);
        }
        for (key, v) in &self.nodes {
            let (x, m) = key.split_once(':').ok_or_else(|| DocumentError::BadKey(key.clone()))?;
            let x: usize = x.parse().map_err(|_| DocumentError::BadKey(key.clone()))?;
            let m = n.message_id(m).ok_or_else(|| NetworkError::UnknownMessageName(m.to_string()))?;
            code.set_pair(x, m, field.vector_from_indices(v)?);
        }
        Ok(code)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroidal::{construct, ConstructionConfig};
    use crate::solver::solve_uniform;

    #[test]
    fn matroid_specs_parse() {
        let u: MatroidSpec = serde_json::from_str(r#"{"kind":"uniform","c":2,"d":4}"#).unwrap();
        assert_eq!(u.to_matroid().unwrap(), Matroid::uniform(2, 4).unwrap());
        let g: MatroidSpec = serde_json::from_str(r#"{"kind":"graphic","vertices":3,"edges":[[0,1],[1,2],[0,2]]}"#).unwrap();
        assert_eq!(g.to_matroid().unwrap().full_rank(), 2);
        let v: MatroidSpec = serde_json::from_str(r#"{"kind":"vector","field":"2^2","rows":[[1,0,1],[0,1,2]]}"#).unwrap();
        let m = v.to_matroid().unwrap();
        assert_eq!(m.ground_size(), 3);
        let e: MatroidSpec =
            serde_json::from_str(r#"{"kind":"explicit","ground_size":2,"independent_sets":[[],[0],[1]]}"#).unwrap();
        assert_eq!(e.to_matroid().unwrap().full_rank(), 1);
        assert!(serde_json::from_str::<MatroidSpec>(r#"{"kind":"vector","field":"6","rows":[]}"#)
            .unwrap()
            .to_matroid()
            .is_err());
    }

    #[test]
    fn network_document_round_trip() {
        let c = construct(&Matroid::uniform(2, 3).unwrap(), &ConstructionConfig::default()).unwrap();
        let doc = NetworkDocument::from_construction(&c);
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let back: NetworkDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.network().unwrap(), c.network);
        assert_eq!(back.mapping().unwrap(), c.mapping);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
    }

    #[test]
    fn network_errors_surface() {
        let bad_ids = r#"{"messages":["a"],"alphabet_size":2,"nodes":[{"id":1,"sources":["a"]}],"edges":[]}"#;
        let doc: NetworkDocument = serde_json::from_str(bad_ids).unwrap();
        assert!(matches!(doc.network(), Err(DocumentError::Network(NetworkError::NonConsecutiveId { .. }))));
        let bad_name = r#"{"messages":["a"],"alphabet_size":2,"nodes":[{"id":0,"sources":["b"]}],"edges":[]}"#;
        let doc: NetworkDocument = serde_json::from_str(bad_name).unwrap();
        assert!(matches!(doc.network(), Err(DocumentError::Network(NetworkError::UnknownMessageName(_)))));
        assert_eq!(doc.mapping(), Err(DocumentError::MissingMapping));
    }

    #[test]
    fn code_document_round_trip() {
        let s = solve_uniform(2, 4, 2, 2).unwrap();
        let n = &s.construction.network;
        let doc = CodeDocument::from_code(n, &s.result.code);
        assert_eq!(doc.field, "2^2");
        let text = serde_json::to_string(&doc).unwrap();
        let back: CodeDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_code(n).unwrap(), s.result.code);
        let mut broken = back.clone();
        broken.nodes.insert("x".into(), vec![1, 0]);
        assert_eq!(broken.to_code(n), Err(DocumentError::BadKey("x".into())));
    }

    #[test]
    fn matrix_spec_round_trip() {
        let f = FieldCtx::new(3, 1).unwrap();
        let m = Matrix::from_indices(&f, &[vec![1, 2], vec![0, 1]], 2).unwrap();
        assert_eq!(MatrixSpec::from_matrix(&m).to_matrix().unwrap(), m);
        let empty = Matrix::zeros(&f, 0, 3);
        assert_eq!(MatrixSpec::from_matrix(&empty).to_matrix().unwrap(), empty);
    }
}

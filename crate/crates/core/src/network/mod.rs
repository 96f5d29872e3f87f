//! Acyclic multigraph networks with messages, sources and receivers.
//!
//! For a node `x`, `In(x)` lists the messages generated at `x` followed by
//! the in-edges of `x`; `Out(x)` lists the messages demanded at `x` followed
//! by its out-edges. Both lists are in id order.

mod code;
mod dot;
mod search;

pub use code::{
    simulate, simulate_all, validate_code, CodeReport, CodeViolation, DecodedDemand, ExhaustiveSimulation,
    GlobalCode, LocalCode, Simulation,
};
pub use dot::to_dot;
pub use search::{exhaustive_solve, search_space, SearchConfig};

use std::collections::BinaryHeap;
use std::cmp::Reverse;

use thiserror::Error;

use crate::field::FieldError;

pub type NodeId = usize;
pub type EdgeId = usize;
pub type MessageId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetworkError {
    #[error("network contains a directed cycle through nodes {0:?}")]
    Cycle(Vec<NodeId>),
    #[error("edge {edge} refers to node {node}, but the network has {nodes} nodes")]
    EndpointOutOfRange { edge: EdgeId, node: NodeId, nodes: usize },
    #[error("node {node} refers to unknown message {message}")]
    UnknownMessage { node: NodeId, message: MessageId },
    #[error("unknown message name {0:?}")]
    UnknownMessageName(String),
    #[error("message {0:?} is not generated by any node")]
    MessageWithoutSource(String),
    #[error("duplicate message name {0:?}")]
    DuplicateMessage(String),
    #[error("alphabet must have at least two symbols, got {0}")]
    AlphabetTooSmall(u64),
    #[error("ids must be consecutive from 0: found {kind} id {found} at position {expected}")]
    NonConsecutiveId { kind: &'static str, expected: usize, found: usize },
    #[error("global code is missing vectors for {0:?}")]
    MissingVectors(Vec<String>),
    #[error("vector for {key} has length {found}, expected {expected}")]
    VectorLength { key: String, expected: usize, found: usize },
    #[error("global code has dimension {found}, network has {expected} messages")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("global code is not valid: {0}")]
    InvalidCode(String),
    #[error("message assignment has {found} values, network has {expected} messages")]
    AssignmentLength { expected: usize, found: usize },
    #[error("search space of {required} candidate assignments exceeds the cap of {cap}")]
    SearchSpaceTooLarge { required: u128, cap: u128 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: String,
    /// Messages generated here, `S(x)`.
    pub sources: Vec<MessageId>,
    /// Messages demanded here, `R(x)`.
    pub demands: Vec<MessageId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub tail: NodeId,
    pub head: NodeId,
}

/// One item of `In(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InItem {
    Message(MessageId),
    Edge(EdgeId),
}

/// A validated network. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    messages: Vec<String>,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    alphabet_size: u64,
    in_edges: Vec<Vec<EdgeId>>,
    out_edges: Vec<Vec<EdgeId>>,
    order: Vec<NodeId>,
}

impl Network {
    pub fn new(messages: Vec<String>, mut nodes: Vec<Node>, edges: Vec<Edge>, alphabet_size: u64) -> Result<Self, NetworkError> {
        if alphabet_size < 2 {
            return Err(NetworkError::AlphabetTooSmall(alphabet_size));
        }
        for (i, name) in messages.iter().enumerate() {
            if messages[..i].contains(name) {
                return Err(NetworkError::DuplicateMessage(name.clone()));
            }
        }
        for (id, node) in nodes.iter_mut().enumerate() {
            for list in [&mut node.sources, &mut node.demands] {
                if let Some(&message) = list.iter().find(|&&m| m >= messages.len()) {
                    return Err(NetworkError::UnknownMessage { node: id, message });
                }
                list.sort_unstable();
                list.dedup();
            }
        }
        for (m, name) in messages.iter().enumerate() {
            if !nodes.iter().any(|n| n.sources.contains(&m)) {
                return Err(NetworkError::MessageWithoutSource(name.clone()));
            }
        }
        let order = topological_order(nodes.len(), &edges)?;
        let mut in_edges = vec![Vec::new(); nodes.len()];
        let mut out_edges = vec![Vec::new(); nodes.len()];
        for (id, e) in edges.iter().enumerate() {
            out_edges[e.tail].push(id);
            in_edges[e.head].push(id);
        }
        Ok(Network { messages, nodes, edges, alphabet_size, in_edges, out_edges, order })
    }

    pub fn messages(&self) -> &[String] {
        &self.messages
    }

    pub fn message_count(&self) -> usize {
        self.messages.len()
    }

    pub fn message_id(&self, name: &str) -> Option<MessageId> {
        self.messages.iter().position(|m| m == name)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    pub fn alphabet_size(&self) -> u64 {
        self.alphabet_size
    }

    pub fn in_edges(&self, x: NodeId) -> &[EdgeId] {
        &self.in_edges[x]
    }

    pub fn out_edges(&self, x: NodeId) -> &[EdgeId] {
        &self.out_edges[x]
    }

    /// `In(x)`: generated messages first, then in-edges.
    pub fn in_items(&self, x: NodeId) -> Vec<InItem> {
        let msgs = self.nodes[x].sources.iter().map(|&m| InItem::Message(m));
        msgs.chain(self.in_edges[x].iter().map(|&e| InItem::Edge(e))).collect()
    }

    /// Deterministic topological order (smallest ready node first).
    pub fn topological_order(&self) -> &[NodeId] {
        &self.order
    }

    /// `(node, message)` demand pairs in node order.
    pub fn demands(&self) -> impl Iterator<Item = (NodeId, MessageId)> + '_ {
        self.nodes.iter().enumerate().flat_map(|(x, n)| n.demands.iter().map(move |&m| (x, m)))
    }

    pub fn sources(&self) -> impl Iterator<Item = (NodeId, MessageId)> + '_ {
        self.nodes.iter().enumerate().flat_map(|(x, n)| n.sources.iter().map(move |&m| (x, m)))
    }

    /// Edges ordered by the topological position of their tail, then by id.
    pub fn edges_in_tail_order(&self) -> Vec<EdgeId> {
        let mut position = vec![0; self.nodes.len()];
        for (i, &x) in self.order.iter().enumerate() {
            position[x] = i;
        }
        let mut ids: Vec<EdgeId> = (0..self.edges.len()).collect();
        ids.sort_by_key(|&e| (position[self.edges[e].tail], e));
        ids
    }

    /// A copy with `count` extra messages generated by a new isolated node.
    pub fn with_dummy_messages(&self, count: usize) -> Network {
        if count == 0 {
            return self.clone();
        }
        let mut builder = NetworkBuilder::from_network(self);
        let node = builder.add_node("dummy");
        let mut suffix = 0;
        for _ in 0..count {
            let name = loop {
                suffix += 1;
                let name = format!("dummy{suffix}");
                if self.message_id(&name).is_none() {
                    break name;
                }
            };
            let m = builder.add_message(name);
            builder.add_source(node, m);
        }
        builder.build().expect("adding an isolated source keeps the network valid")
    }
}

/// Incremental construction of a [`Network`].
#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder {
    messages: Vec<String>,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    alphabet_size: u64,
}

impl NetworkBuilder {
    pub fn new(alphabet_size: u64) -> Self {
        NetworkBuilder { alphabet_size, ..Default::default() }
    }

    pub fn from_network(n: &Network) -> Self {
        NetworkBuilder {
            messages: n.messages.clone(),
            nodes: n.nodes.clone(),
            edges: n.edges.clone(),
            alphabet_size: n.alphabet_size,
        }
    }

    pub fn add_message(&mut self, name: impl Into<String>) -> MessageId {
        self.messages.push(name.into());
        self.messages.len() - 1
    }

    pub fn add_node(&mut self, label: impl Into<String>) -> NodeId {
        self.nodes.push(Node { label: label.into(), sources: Vec::new(), demands: Vec::new() });
        self.nodes.len() - 1
    }

    pub fn add_source(&mut self, node: NodeId, message: MessageId) {
        self.nodes[node].sources.push(message);
    }

    pub fn add_demand(&mut self, node: NodeId, message: MessageId) {
        self.nodes[node].demands.push(message);
    }

    pub fn add_edge(&mut self, tail: NodeId, head: NodeId) -> EdgeId {
        self.edges.push(Edge { tail, head });
        self.edges.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn build(self) -> Result<Network, NetworkError> {
        Network::new(self.messages, self.nodes, self.edges, self.alphabet_size)
    }
}

/// Kahn's algorithm, always releasing the smallest ready node.
pub fn topological_order(node_count: usize, edges: &[Edge]) -> Result<Vec<NodeId>, NetworkError> {
    let mut indegree = vec![0usize; node_count];
    let mut succ = vec![Vec::new(); node_count];
    for (id, e) in edges.iter().enumerate() {
        for node in [e.tail, e.head] {
            if node >= node_count {
                return Err(NetworkError::EndpointOutOfRange { edge: id, node, nodes: node_count });
            }
        }
        indegree[e.head] += 1;
        succ[e.tail].push(e.head);
    }
    let mut ready: BinaryHeap<Reverse<NodeId>> = (0..node_count).filter(|&x| indegree[x] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(node_count);
    while let Some(Reverse(x)) = ready.pop() {
        order.push(x);
        for &y in &succ[x] {
            indegree[y] -= 1;
            if indegree[y] == 0 {
                ready.push(Reverse(y));
            }
        }
    }
    if order.len() < node_count {
        return Err(NetworkError::Cycle(find_cycle(&succ, &indegree)));
    }
    Ok(order)
}

/// Every node left over by Kahn's algorithm has a predecessor that is also
/// left over, so walking predecessor links must revisit a node.
fn find_cycle(succ: &[Vec<NodeId>], indegree: &[usize]) -> Vec<NodeId> {
    let remaining = |x: NodeId| indegree[x] > 0;
    let n = succ.len();
    let mut pred = vec![None; n];
    for x in 0..n {
        if remaining(x) {
            for &y in &succ[x] {
                if remaining(y) && pred[y].is_none() {
                    pred[y] = Some(x);
                }
            }
        }
    }
    let start = (0..n).find(|&x| remaining(x)).expect("a cycle leaves nodes behind");
    let mut seen = vec![usize::MAX; n];
    let mut walk = Vec::new();
    let mut x = start;
    while seen[x] == usize::MAX {
        seen[x] = walk.len();
        walk.push(x);
        x = pred[x].expect("remaining nodes have remaining predecessors");
    }
    let mut cycle = walk[seen[x]..].to_vec();
    cycle.reverse();
    cycle
}

//! Network-matroid mappings and the construction of matroidal networks.
//!
//! A network is matroidal with respect to a matroid `M` via a map `f` from
//! messages and edges to ground elements when
//!
//! 1. `f` is injective on messages,
//! 2. the messages map to an independent set, and
//! 3. for every node `x`, `r(f(In(x))) = r(f(In(x) ∪ Out(x)))`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matroid::{EnumerationCaps, Matroid, MatroidError};
use crate::network::{EdgeId, InItem, MessageId, Network, NetworkBuilder, NetworkError, NodeId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidalError {
    #[error("mapping is not total: expected {expected_messages} message and {expected_edges} edge images, got {messages} and {edges}")]
    NotTotal { expected_messages: usize, expected_edges: usize, messages: usize, edges: usize },
    #[error("{0:?} is not a base of the matroid")]
    UnknownBase(Vec<usize>),
    #[error("{0:?} is not a circuit of the matroid")]
    UnknownCircuit(Vec<usize>),
    #[error("element {target} of circuit {circuit:?} is not mapped to a source")]
    TargetNotSource { circuit: Vec<usize>, target: usize },
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// The map `f` on messages and edges, plus the auxiliary partial map `g`
/// from ground elements to nodes recorded by the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkMatroidMapping {
    /// `f(m)` for every message, in message order.
    pub messages: Vec<usize>,
    /// `f(e)` for every edge, in edge order.
    pub edges: Vec<usize>,
    /// `g(x)` for every ground element, when defined.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub g: Vec<Option<NodeId>>,
}

impl NetworkMatroidMapping {
    pub fn new(messages: Vec<usize>, edges: Vec<usize>) -> Self {
        NetworkMatroidMapping { messages, edges, g: Vec::new() }
    }

    pub fn message(&self, m: MessageId) -> usize {
        self.messages[m]
    }

    pub fn edge(&self, e: EdgeId) -> usize {
        self.edges[e]
    }
}

/// The first condition that fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum MatroidalViolation {
    /// Condition 1: two messages share a ground element.
    MessagesShareElement { first: MessageId, second: MessageId, element: usize },
    /// Condition 2: the message images are dependent.
    MessagesDependent { elements: Vec<usize> },
    /// Condition 3 at `node`.
    RankIncrease { node: NodeId, in_rank: usize, in_out_rank: usize },
}

impl MatroidalViolation {
    pub fn condition(&self) -> u8 {
        match self {
            MatroidalViolation::MessagesShareElement { .. } => 1,
            MatroidalViolation::MessagesDependent { .. } => 2,
            MatroidalViolation::RankIncrease { .. } => 3,
        }
    }
}

/// `f(In(x))` in `In(x)` order.
pub fn in_image(n: &Network, f: &NetworkMatroidMapping, x: NodeId) -> Vec<usize> {
    n.in_items(x)
        .into_iter()
        .map(|item| match item {
            InItem::Message(m) => f.messages[m],
            InItem::Edge(e) => f.edges[e],
        })
        .collect()
}

fn sorted_set(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Checks the three matroidal conditions; `Ok(None)` means all hold.
pub fn verify_matroidal(
    n: &Network,
    m: &Matroid,
    f: &NetworkMatroidMapping,
) -> Result<Option<MatroidalViolation>, MatroidalError> {
    if f.messages.len() != n.message_count() || f.edges.len() != n.edges().len() {
        return Err(MatroidalError::NotTotal {
            expected_messages: n.message_count(),
            expected_edges: n.edges().len(),
            messages: f.messages.len(),
            edges: f.edges.len(),
        });
    }
    if let Some(&bad) = f.messages.iter().chain(&f.edges).find(|&&x| x >= m.ground_size()) {
        return Err(MatroidError::ElementOutOfRange { element: bad, ground_size: m.ground_size() }.into());
    }
    for (i, &a) in f.messages.iter().enumerate() {
        if let Some(j) = f.messages[..i].iter().position(|&b| b == a) {
            return Ok(Some(MatroidalViolation::MessagesShareElement { first: j, second: i, element: a }));
        }
    }
    if !m.is_independent(&sorted_set(f.messages.clone()))? {
        return Ok(Some(MatroidalViolation::MessagesDependent { elements: f.messages.clone() }));
    }
    for x in 0..n.nodes().len() {
        let ins = in_image(n, f, x);
        let mut all = ins.clone();
        all.extend(n.node(x).demands.iter().map(|&d| f.messages[d]));
        all.extend(n.out_edges(x).iter().map(|&e| f.edges[e]));
        let in_rank = m.rank(&sorted_set(ins))?;
        let in_out_rank = m.rank(&sorted_set(all))?;
        if in_rank != in_out_rank {
            return Ok(Some(MatroidalViolation::RankIncrease { node: x, in_rank, in_out_rank }));
        }
    }
    Ok(None)
}

/// Checks the auxiliary map: wherever `g(x)` is defined it is either a source
/// of a message `m` with `f(m) = x`, or a node of in-degree 1 whose in-edge
/// maps to `x`. Returns the first element breaking this.
pub fn verify_auxiliary(n: &Network, f: &NetworkMatroidMapping) -> Option<usize> {
    f.g.iter().enumerate().find_map(|(x, g)| {
        let node = (*g)?;
        if node >= n.nodes().len() {
            return Some(x);
        }
        let source = n.node(node).sources.iter().any(|&m| f.messages.get(m) == Some(&x));
        let relay = matches!(n.in_edges(node), [e] if f.edges.get(*e) == Some(&x));
        (!source && !relay).then_some(x)
    })
}

/// A Step-3 choice: a circuit and the element of it whose source message the
/// new receiver demands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitChoice {
    pub circuit: Vec<usize>,
    pub target: usize,
}

/// Which circuit receivers to add.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step3Policy {
    /// One receiver for every circuit and every source-mapped element of it.
    #[default]
    Every,
    #[serde(alias = "none")]
    Disabled,
    Explicit(Vec<CircuitChoice>),
}

/// Which base receivers to add.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step4Policy {
    /// One receiver for every base.
    #[default]
    Every,
    #[serde(alias = "none")]
    Disabled,
    Explicit(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConstructionConfig {
    /// Base chosen in the first step; the lexicographically smallest base when absent.
    pub base: Option<Vec<usize>>,
    pub circuit_receivers: Step3Policy,
    pub base_receivers: Step4Policy,
    /// Copies of each chosen receiver.
    pub repeats: usize,
    /// Receivers added per step at most; extra choices are dropped and the
    /// trace is flagged.
    pub max_receivers: usize,
    pub caps: EnumerationCaps,
    pub alphabet_size: u64,
}

impl Default for ConstructionConfig {
    fn default() -> Self {
        ConstructionConfig {
            base: None,
            circuit_receivers: Step3Policy::Every,
            base_receivers: Step4Policy::Every,
            repeats: 1,
            max_receivers: 64,
            caps: EnumerationCaps::default(),
            alphabet_size: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelayRecord {
    pub circuit: Vec<usize>,
    pub x0: usize,
    pub coding_node: NodeId,
    pub node: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircuitReceiver {
    pub circuit: Vec<usize>,
    pub target: usize,
    pub node: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseReceiver {
    pub base: Vec<usize>,
    pub node: NodeId,
}

/// What each construction step added.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ConstructionTrace {
    pub base: Vec<usize>,
    pub relays: Vec<RelayRecord>,
    pub circuit_receivers: Vec<CircuitReceiver>,
    pub base_receivers: Vec<BaseReceiver>,
    /// Some receiver choices were dropped because of `max_receivers`.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub network: Network,
    pub mapping: NetworkMatroidMapping,
    pub trace: ConstructionTrace,
}

struct Builder {
    net: NetworkBuilder,
    f_edges: Vec<usize>,
}

impl Builder {
    fn edge(&mut self, tail: NodeId, head: NodeId, element: usize) {
        self.net.add_edge(tail, head);
        self.f_edges.push(element);
    }
}

/// Builds a matroidal network from `m`.
///
/// 1. Sources `n1..` with messages `m1..` for the elements of a base.
/// 2. While some circuit has exactly one element without a node, add a
///    coding node fed by the nodes of the other elements and a relay node for
///    the missing element. Circuits are scanned in lexicographic order;
///    loops are skipped.
/// 3. Receivers demanding a source message, fed by the rest of a circuit.
/// 4. Receivers demanding every message, fed by the nodes of a base.
pub fn construct(m: &Matroid, cfg: &ConstructionConfig) -> Result<Construction, MatroidalError> {
    let circuits: Vec<Vec<usize>> = m.circuits(&cfg.caps)?.into_iter().filter(|c| c.len() >= 2).collect();
    let base = match &cfg.base {
        Some(b) => {
            let b = sorted_set(b.clone());
            if !m.is_base(&b)? {
                return Err(MatroidalError::UnknownBase(b));
            }
            b
        }
        None => m.greedy_base(),
    };

    let mut b = Builder { net: NetworkBuilder::new(cfg.alphabet_size), f_edges: Vec::new() };
    let mut g: Vec<Option<NodeId>> = vec![None; m.ground_size()];
    let mut trace = ConstructionTrace { base: base.clone(), ..Default::default() };
    let mut source_message: Vec<Option<MessageId>> = vec![None; m.ground_size()];

    for (i, &x) in base.iter().enumerate() {
        let msg = b.net.add_message(format!("m{}", i + 1));
        let node = b.net.add_node(format!("n{}", i + 1));
        b.net.add_source(node, msg);
        g[x] = Some(node);
        source_message[x] = Some(msg);
    }

    loop {
        let next = circuits.iter().find_map(|c| {
            let mut undefined = c.iter().filter(|&&x| g[x].is_none());
            match (undefined.next(), undefined.next()) {
                (Some(&x0), None) => Some((c, x0)),
                _ => None,
            }
        });
        let Some((circuit, x0)) = next else { break };
        let k = trace.relays.len() + 1;
        let y = b.net.add_node(format!("y{k}"));
        for &x in circuit.iter().filter(|&&x| x != x0) {
            b.edge(g[x].unwrap(), y, x);
        }
        let relay = b.net.add_node(format!("v{x0}"));
        b.edge(y, relay, x0);
        g[x0] = Some(relay);
        trace.relays.push(RelayRecord { circuit: circuit.clone(), x0, coding_node: y, node: relay });
    }

    let covered = |set: &[usize]| set.iter().all(|&x| g[x].is_some());
    let repeats = cfg.repeats.max(1);

    let step3: Vec<CircuitChoice> = match &cfg.circuit_receivers {
        Step3Policy::Disabled => Vec::new(),
        Step3Policy::Every => circuits
            .iter()
            .filter(|c| covered(c))
            .flat_map(|c| {
                c.iter()
                    .filter(|&&x| source_message[x].is_some())
                    .map(move |&x| CircuitChoice { circuit: c.clone(), target: x })
            })
            .collect(),
        Step3Policy::Explicit(choices) => {
            for ch in choices {
                let c = sorted_set(ch.circuit.clone());
                if !circuits.contains(&c) || !covered(&c) {
                    return Err(MatroidalError::UnknownCircuit(ch.circuit.clone()));
                }
                if !c.contains(&ch.target) || source_message[ch.target].is_none() {
                    return Err(MatroidalError::TargetNotSource { circuit: ch.circuit.clone(), target: ch.target });
                }
            }
            choices.iter().map(|ch| CircuitChoice { circuit: sorted_set(ch.circuit.clone()), target: ch.target }).collect()
        }
    };
    let step3: Vec<CircuitChoice> = step3.into_iter().flat_map(|c| std::iter::repeat_n(c, repeats)).collect();
    if step3.len() > cfg.max_receivers {
        trace.truncated = true;
    }
    for ch in step3.into_iter().take(cfg.max_receivers) {
        let k = trace.circuit_receivers.len() + 1;
        let r = b.net.add_node(format!("r{k}"));
        b.net.add_demand(r, source_message[ch.target].unwrap());
        for &x in ch.circuit.iter().filter(|&&x| x != ch.target) {
            b.edge(g[x].unwrap(), r, x);
        }
        trace.circuit_receivers.push(CircuitReceiver { circuit: ch.circuit, target: ch.target, node: r });
    }

    let step4: Vec<Vec<usize>> = if base.is_empty() {
        Vec::new()
    } else {
        match &cfg.base_receivers {
            Step4Policy::Disabled => Vec::new(),
            Step4Policy::Every => m.bases(&cfg.caps)?,
            Step4Policy::Explicit(bases) => {
                let mut out = Vec::new();
                for bs in bases {
                    let s = sorted_set(bs.clone());
                    if !m.is_base(&s)? {
                        return Err(MatroidalError::UnknownBase(bs.clone()));
                    }
                    out.push(s);
                }
                out
            }
        }
    };
    let step4: Vec<Vec<usize>> = step4.into_iter().flat_map(|s| std::iter::repeat_n(s, repeats)).collect();
    if step4.len() > cfg.max_receivers {
        trace.truncated = true;
    }
    let messages: Vec<MessageId> = (0..base.len()).collect();
    for bs in step4.into_iter().take(cfg.max_receivers) {
        let k = trace.base_receivers.len() + 1;
        let t = b.net.add_node(format!("t{k}"));
        for &msg in &messages {
            b.net.add_demand(t, msg);
        }
        for &x in &bs {
            b.edge(g[x].expect("bases avoid loops, and every other element has a node"), t, x);
        }
        trace.base_receivers.push(BaseReceiver { base: bs, node: t });
    }

    let network = b.net.build()?;
    let mapping = NetworkMatroidMapping { messages: base, edges: b.f_edges, g };
    Ok(Construction { network, mapping, trace })
}

/// One entry per demand: receiver, demanded message, and the edges into it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Connection {
    pub receiver: NodeId,
    pub message: MessageId,
    pub in_edges: Vec<EdgeId>,
}

pub fn extract_connections(n: &Network) -> Vec<Connection> {
    n.demands()
        .map(|(x, m)| Connection { receiver: x, message: m, in_edges: n.in_edges(x).to_vec() })
        .collect()
}

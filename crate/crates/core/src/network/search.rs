use rayon::prelude::*;

use super::{EdgeId, GlobalCode, InItem, Network, NetworkError, NodeId};
use crate::field::{FieldCtx, FieldElem, Matrix};

/// Limits for [`exhaustive_solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of candidate assignments the search may visit.
    pub cap: u128,
    /// Worker threads; 1 searches on the calling thread.
    pub jobs: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { cap: 1 << 24, jobs: 1 }
    }
}

/// Edges split into those feeding a node with out-edges ("interior") and
/// those feeding a sink. Sink edges only influence their own sink, so each
/// sink is searched independently once the interior is fixed.
struct Plan {
    interior: Vec<EdgeId>,
    /// Interior edges whose assignment completes `In(head)`.
    completes: Vec<Option<NodeId>>,
    sinks: Vec<(NodeId, Vec<EdgeId>)>,
    /// Nodes with no in-edges that demand something.
    roots: Vec<NodeId>,
}

impl Plan {
    fn new(n: &Network) -> Plan {
        let is_sink = |x: NodeId| n.out_edges(x).is_empty();
        let order = n.edges_in_tail_order();
        let interior: Vec<EdgeId> = order.iter().copied().filter(|&e| !is_sink(n.edge(e).head)).collect();
        let completes = interior
            .iter()
            .map(|&e| {
                let head = n.edge(e).head;
                let last = interior.iter().rposition(|&f| n.edge(f).head == head);
                (interior.get(last.unwrap()) == Some(&e)).then_some(head)
            })
            .collect();
        let sinks = n
            .topological_order()
            .iter()
            .filter(|&&x| is_sink(x) && !n.in_edges(x).is_empty())
            .map(|&x| (x, n.in_edges(x).to_vec()))
            .collect();
        let roots = (0..n.nodes().len()).filter(|&x| n.in_edges(x).is_empty()).collect();
        Plan { interior, completes, sinks, roots }
    }
}

fn span_bound(n: &Network, field: &FieldCtx, e: EdgeId) -> u128 {
    let tail = n.edge(e).tail;
    let items = n.node(tail).sources.len() + n.in_edges(tail).len();
    field.space_size(items.min(n.message_count()))
}

/// Number of assignments [`exhaustive_solve`] may visit: the product over
/// interior edges of the span size bound of their tail, times the sum over
/// sinks of the same product over the sink's in-edges.
pub fn search_space(n: &Network, field: &FieldCtx) -> u128 {
    let plan = Plan::new(n);
    let product = |edges: &[EdgeId]| {
        edges.iter().fold(1u128, |acc, &e| acc.saturating_mul(span_bound(n, field, e)))
    };
    let sinks = plan.sinks.iter().fold(0u128, |acc, (_, es)| acc.saturating_add(product(es)));
    product(&plan.interior).saturating_mul(sinks.max(1))
}

struct Search<'a> {
    n: &'a Network,
    field: &'a FieldCtx,
    plan: Plan,
}

type Partial = Vec<Option<Vec<FieldElem>>>;

impl Search<'_> {
    fn in_vectors(&self, x: NodeId, vectors: &Partial) -> Vec<Vec<FieldElem>> {
        let dim = self.n.message_count();
        self.n
            .in_items(x)
            .into_iter()
            .map(|item| match item {
                InItem::Message(m) => self.field.unit_vector(dim, m),
                InItem::Edge(e) => vectors[e].clone().expect("in-edges are assigned before out-edges"),
            })
            .collect()
    }

    /// Every vector in the span of `In(tail)`, in canonical order.
    fn candidates(&self, e: EdgeId, vectors: &Partial) -> Vec<Vec<FieldElem>> {
        let f = self.field;
        let dim = self.n.message_count();
        let rows = self.in_vectors(self.n.edge(e).tail, vectors);
        let rref = Matrix::from_rows(f, rows, dim).expect("vectors have the code dimension").rref();
        let basis: Vec<&[FieldElem]> = (0..rref.rank()).map(|i| rref.matrix.row(i)).collect();
        let count = f.space_size(basis.len()) as u64;
        let mut out: Vec<Vec<FieldElem>> = (0..count)
            .map(|idx| {
                let coeffs = f.vector_at(basis.len(), idx);
                let mut v = vec![FieldElem::ZERO; dim];
                for (c, row) in coeffs.iter().zip(&basis) {
                    for (acc, &r) in v.iter_mut().zip(row.iter()) {
                        *acc = f.add(*acc, f.mul(*c, r));
                    }
                }
                v
            })
            .collect();
        out.sort_unstable();
        out
    }

    fn demands_met(&self, x: NodeId, vectors: &Partial) -> bool {
        let demands = &self.n.node(x).demands;
        if demands.is_empty() {
            return true;
        }
        let dim = self.n.message_count();
        let ins = self.in_vectors(x, vectors);
        let base = Matrix::from_rows(self.field, ins.clone(), dim).expect("dimension").rank();
        demands.iter().all(|&m| {
            let mut rows = ins.clone();
            rows.push(self.field.unit_vector(dim, m));
            Matrix::from_rows(self.field, rows, dim).expect("dimension").rank() == base
        })
    }

    fn assign(&self, i: usize, v: Vec<FieldElem>, vectors: &mut Partial) -> bool {
        let e = self.plan.interior[i];
        vectors[e] = Some(v);
        match self.plan.completes[i] {
            Some(head) => self.demands_met(head, vectors),
            None => true,
        }
    }

    fn interior(&self, i: usize, vectors: &mut Partial) -> Option<Partial> {
        if i == self.plan.interior.len() {
            return self.sinks(vectors.clone());
        }
        let e = self.plan.interior[i];
        for v in self.candidates(e, vectors) {
            if self.assign(i, v, vectors) {
                if let Some(found) = self.interior(i + 1, vectors) {
                    return Some(found);
                }
            }
        }
        vectors[e] = None;
        None
    }

    fn sinks(&self, mut vectors: Partial) -> Option<Partial> {
        for (sink, edges) in &self.plan.sinks {
            let lists: Vec<Vec<Vec<FieldElem>>> = edges.iter().map(|&e| self.candidates(e, &vectors)).collect();
            if !self.sink(*sink, edges, &lists, 0, &mut vectors) {
                return None;
            }
        }
        Some(vectors)
    }

    fn sink(&self, x: NodeId, edges: &[EdgeId], lists: &[Vec<Vec<FieldElem>>], i: usize, vectors: &mut Partial) -> bool {
        if i == edges.len() {
            return self.demands_met(x, vectors);
        }
        for v in &lists[i] {
            vectors[edges[i]] = Some(v.clone());
            if self.sink(x, edges, lists, i + 1, vectors) {
                return true;
            }
        }
        false
    }

    fn run(&self, jobs: usize) -> Result<Option<Partial>, NetworkError> {
        let mut vectors: Partial = vec![None; self.n.edges().len()];
        if !self.plan.roots.iter().all(|&x| self.demands_met(x, &vectors)) {
            return Ok(None);
        }
        if jobs <= 1 || self.plan.interior.is_empty() {
            return Ok(self.interior(0, &mut vectors));
        }
        let first = self.candidates(self.plan.interior[0], &vectors);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| NetworkError::InvalidCode(format!("cannot start worker pool: {e}")))?;
        Ok(pool.install(|| {
            first.into_par_iter().find_map_first(|v| {
                let mut local = vectors.clone();
                if self.assign(0, v, &mut local) {
                    self.interior(1, &mut local)
                } else {
                    None
                }
            })
        }))
    }
}

/// Searches all linear codes over `field` for one that solves `n`.
///
/// Returns the first solution in a fixed enumeration order (edges by tail
/// position, candidate vectors in canonical order), independent of
/// `cfg.jobs`. A field smaller than the alphabet has no solutions.
pub fn exhaustive_solve(n: &Network, field: &FieldCtx, cfg: &SearchConfig) -> Result<Option<GlobalCode>, NetworkError> {
    let required = search_space(n, field);
    if required > cfg.cap {
        return Err(NetworkError::SearchSpaceTooLarge { required, cap: cfg.cap });
    }
    if (field.order() as u64) < n.alphabet_size() {
        return Ok(None);
    }
    let search = Search { n, field, plan: Plan::new(n) };
    Ok(search.run(cfg.jobs)?.map(|vectors| {
        let vs = vectors.into_iter().map(|v| v.expect("every edge is assigned")).collect();
        GlobalCode::from_edge_vectors(n, field, vs)
    }))
}

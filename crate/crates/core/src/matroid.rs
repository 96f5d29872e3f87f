//! Matroids given by an independence oracle.
//!
//! Ground-set elements are the integers `0..ground_size`. Each backend fixes
//! what an element means: for a graphic matroid element `i` is the `i`-th edge
//! of the input graph, for a vector matroid the `i`-th column of the matrix.
//!
//! Enumeration (circuits, bases, axiom checks, isomorphism) is exhaustive and
//! therefore limited by [`EnumerationCaps`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldCtx, FieldElem, FieldError, Matrix};
use crate::union_find::UnionFind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("uniform matroid needs rank <= ground size, got U({c}, {d})")]
    RankExceedsGround { c: usize, d: usize },
    #[error("element {element} is outside the ground set of size {ground_size}")]
    ElementOutOfRange { element: usize, ground_size: usize },
    #[error("edge {edge} has endpoint {vertex} outside 0..{vertices}")]
    VertexOutOfRange { edge: usize, vertex: usize, vertices: usize },
    #[error("{operation} needs ground size <= {cap}, got {size}; use oracle queries instead")]
    CapExceeded { operation: &'static str, size: usize, cap: usize },
    #[error("{0:?} is not a base")]
    NotABase(Vec<usize>),
    #[error("element {0} already belongs to the base")]
    ElementInBase(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Limits on exhaustive enumeration. These are configuration, not constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnumerationCaps {
    /// Largest ground set for `circuits` / `bases`.
    pub enumerate: usize,
    /// Largest ground set for `verify_axioms`.
    pub axioms: usize,
    /// Largest ground set for `are_isomorphic`.
    pub isomorphism: usize,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        EnumerationCaps { enumerate: 16, axioms: 10, isomorphism: 8 }
    }
}

/// Undirected multigraph; self-loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, MatroidError> {
        for (edge, &(u, v)) in edges.iter().enumerate() {
            for vertex in [u, v] {
                if vertex >= vertices {
                    return Err(MatroidError::VertexOutOfRange { edge, vertex, vertices });
                }
            }
        }
        Ok(Graph { vertices, edges })
    }

    /// Complete graph on `n` vertices, edges in lexicographic order.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph { vertices: n, edges }
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn cycle(n: usize) -> Self {
        Graph { vertices: n, edges: (0..n).map(|i| (i, (i + 1) % n)).collect() }
    }

    pub fn is_loop(&self, edge: usize) -> bool {
        let (u, v) = self.edges[edge];
        u == v
    }

    /// Edge ids incident to each vertex, in input order. Loops are listed once.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push(e);
            if u != v {
                adj[v].push(e);
            }
        }
        adj
    }

    /// Signed vertex-edge incidence matrix: `+1` at the first endpoint, `-1`
    /// at the second, a zero column for a loop. Over characteristic 2 this is
    /// the ordinary incidence matrix mod 2. Its vector matroid is `M(G)` over
    /// any field.
    pub fn incidence_matrix(&self, field: &FieldCtx) -> Matrix {
        let mut m = Matrix::zeros(field, self.vertices, self.edges.len());
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if u != v {
                m[(u, e)] = FieldElem::ONE;
                m[(v, e)] = field.neg(FieldElem::ONE);
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    Uniform { rank: usize },
    Graphic(Graph),
    Vector(Matrix),
    /// Explicit independent sets, each sorted.
    Explicit(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matroid {
    ground_size: usize,
    backend: Backend,
}

/// First counterexample found for each matroid axiom.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct AxiomReport {
    pub empty_set_independent: bool,
    /// `(independent set, subset that is not independent)`.
    pub downward_closure: Option<(Vec<usize>, Vec<usize>)>,
    /// `(smaller, larger)` independent sets admitting no exchange element.
    pub exchange: Option<(Vec<usize>, Vec<usize>)>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.empty_set_independent && self.downward_closure.is_none() && self.exchange.is_none()
    }
}

fn mask_to_set(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

impl Matroid {
    /// `U_{c,d}`: a set is independent iff it has at most `c` elements.
    pub fn uniform(c: usize, d: usize) -> Result<Self, MatroidError> {
        if c > d {
            return Err(MatroidError::RankExceedsGround { c, d });
        }
        Ok(Matroid { ground_size: d, backend: Backend::Uniform { rank: c } })
    }

    /// `M(G)`: an edge set is independent iff it contains no cycle.
    pub fn graphic(graph: Graph) -> Self {
        Matroid { ground_size: graph.edges.len(), backend: Backend::Graphic(graph) }
    }

    /// `M(A)`: a column set is independent iff the columns are linearly independent.
    pub fn vector(matrix: Matrix) -> Self {
        Matroid { ground_size: matrix.cols(), backend: Backend::Vector(matrix) }
    }

    /// A matroid candidate given by its list of independent sets. The family
    /// is not checked against the axioms; see [`Matroid::verify_axioms`].
    pub fn explicit(ground_size: usize, sets: Vec<Vec<usize>>) -> Result<Self, MatroidError> {
        let mut family = Vec::with_capacity(sets.len());
        for mut s in sets {
            s.sort_unstable();
            s.dedup();
            if let Some(&element) = s.iter().find(|&&e| e >= ground_size) {
                return Err(MatroidError::ElementOutOfRange { element, ground_size });
            }
            family.push(s);
        }
        family.sort();
        family.dedup();
        Ok(Matroid { ground_size, backend: Backend::Explicit(family) })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    fn normalize(&self, set: &[usize]) -> Result<Vec<usize>, MatroidError> {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        if let Some(&element) = s.iter().find(|&&e| e >= self.ground_size) {
            return Err(MatroidError::ElementOutOfRange { element, ground_size: self.ground_size });
        }
        Ok(s)
    }

    pub fn is_independent(&self, set: &[usize]) -> Result<bool, MatroidError> {
        let s = self.normalize(set)?;
        Ok(self.independent_sorted(&s))
    }

    fn independent_sorted(&self, s: &[usize]) -> bool {
        match &self.backend {
            Backend::Uniform { rank } => s.len() <= *rank,
            Backend::Graphic(g) => {
                let mut uf = UnionFind::new(g.vertices);
                s.iter().all(|&e| {
                    let (u, v) = g.edges[e];
                    uf.union(u, v)
                })
            }
            Backend::Vector(m) => s.len() <= m.rows() && m.select_columns(s).rank() == s.len(),
            Backend::Explicit(family) => family.binary_search_by(|f| f.as_slice().cmp(s)).is_ok(),
        }
    }

    /// Size of a largest independent subset of `set`.
    pub fn rank(&self, set: &[usize]) -> Result<usize, MatroidError> {
        let s = self.normalize(set)?;
        Ok(match &self.backend {
            Backend::Uniform { rank } => s.len().min(*rank),
            Backend::Vector(m) => m.select_columns(&s).rank(),
            _ => {
                // Greedy is exact for matroids.
                let mut kept = Vec::with_capacity(s.len());
                for e in s {
                    kept.push(e);
                    kept.sort_unstable();
                    if !self.independent_sorted(&kept) {
                        kept.retain(|&x| x != e);
                    }
                }
                kept.len()
            }
        })
    }

    pub fn full_rank(&self) -> usize {
        let all: Vec<usize> = (0..self.ground_size).collect();
        self.rank(&all).expect("ground set is in range")
    }

    /// The lexicographically smallest base, found greedily in element order.
    pub fn greedy_base(&self) -> Vec<usize> {
        let mut base = Vec::new();
        for e in 0..self.ground_size {
            base.push(e);
            if !self.independent_sorted(&base) {
                base.pop();
            }
        }
        base
    }

    /// Whether `set` is a single-element circuit.
    pub fn is_loop(&self, element: usize) -> Result<bool, MatroidError> {
        Ok(!self.is_independent(&[element])?)
    }

    pub fn is_base(&self, set: &[usize]) -> Result<bool, MatroidError> {
        let s = self.normalize(set)?;
        Ok(s.len() == set.len() && s.len() == self.full_rank() && self.independent_sorted(&s))
    }

    pub fn is_circuit(&self, set: &[usize]) -> Result<bool, MatroidError> {
        let s = self.normalize(set)?;
        if s.len() != set.len() || s.is_empty() || self.independent_sorted(&s) {
            return Ok(false);
        }
        Ok((0..s.len()).all(|i| {
            let mut t = s.clone();
            t.remove(i);
            self.independent_sorted(&t)
        }))
    }

    fn check_cap(&self, operation: &'static str, cap: usize) -> Result<(), MatroidError> {
        if self.ground_size > cap || self.ground_size > 31 {
            return Err(MatroidError::CapExceeded { operation, size: self.ground_size, cap });
        }
        Ok(())
    }

    /// Independence of every subset, indexed by bitmask.
    fn independence_table(&self) -> Vec<bool> {
        let n = self.ground_size;
        let mut table = vec![false; 1 << n];
        for mask in 0u32..1 << n {
            // Dependent sets stay dependent under supersets; skip the oracle there.
            let top = if mask == 0 { None } else { Some(31 - mask.leading_zeros()) };
            table[mask as usize] = match top {
                Some(t) if !table[(mask & !(1 << t)) as usize] && self.is_closed_family() => false,
                _ => self.independent_sorted(&mask_to_set(mask)),
            };
        }
        table
    }

    /// True for backends whose independent sets are guaranteed downward closed.
    fn is_closed_family(&self) -> bool {
        !matches!(self.backend, Backend::Explicit(_))
    }

    /// All circuits, in lexicographic order.
    pub fn circuits(&self, caps: &EnumerationCaps) -> Result<Vec<Vec<usize>>, MatroidError> {
        self.check_cap("circuit enumeration", caps.enumerate)?;
        let table = self.independence_table();
        let mut out: Vec<Vec<usize>> = (0u32..1 << self.ground_size)
            .filter(|&m| !table[m as usize] && mask_to_set(m).iter().all(|&e| table[(m & !(1 << e)) as usize]))
            .map(mask_to_set)
            .collect();
        out.sort();
        Ok(out)
    }

    /// All bases, in lexicographic order.
    pub fn bases(&self, caps: &EnumerationCaps) -> Result<Vec<Vec<usize>>, MatroidError> {
        self.check_cap("base enumeration", caps.enumerate)?;
        let table = self.independence_table();
        let r = self.full_rank() as u32;
        let mut out: Vec<Vec<usize>> = (0u32..1 << self.ground_size)
            .filter(|&m| m.count_ones() == r && table[m as usize])
            .map(mask_to_set)
            .collect();
        out.sort();
        Ok(out)
    }

    /// The unique circuit inside `base ∪ {element}`.
    pub fn fundamental_circuit(&self, base: &[usize], element: usize) -> Result<Vec<usize>, MatroidError> {
        if !self.is_base(base)? {
            return Err(MatroidError::NotABase(base.to_vec()));
        }
        if element >= self.ground_size {
            return Err(MatroidError::ElementOutOfRange { element, ground_size: self.ground_size });
        }
        if base.contains(&element) {
            return Err(MatroidError::ElementInBase(element));
        }
        let mut set = base.to_vec();
        set.push(element);
        set.sort_unstable();
        let mut sorted_base = base.to_vec();
        sorted_base.sort_unstable();
        for b in sorted_base {
            let without: Vec<usize> = set.iter().copied().filter(|&x| x != b).collect();
            if !self.independent_sorted(&without) {
                set = without;
            }
        }
        Ok(set)
    }

    /// Exhaustive check of the three independence axioms.
    pub fn verify_axioms(&self, caps: &EnumerationCaps) -> Result<AxiomReport, MatroidError> {
        self.check_cap("axiom verification", caps.axioms)?;
        let n = self.ground_size;
        let table: Vec<bool> = (0u32..1 << n).map(|m| self.independent_sorted(&mask_to_set(m))).collect();
        let independent: Vec<u32> = (0u32..1 << n).filter(|&m| table[m as usize]).collect();

        let mut report = AxiomReport { empty_set_independent: table[0], ..Default::default() };
        // Closure under single deletions implies closure under all subsets.
        'closure: for &m in &independent {
            for e in mask_to_set(m).into_iter().rev() {
                let sub = m & !(1 << e);
                if !table[sub as usize] {
                    report.downward_closure = Some((mask_to_set(m), mask_to_set(sub)));
                    break 'closure;
                }
            }
        }
        'exchange: for &small in &independent {
            for &large in &independent {
                if small.count_ones() >= large.count_ones() {
                    continue;
                }
                let extendable = mask_to_set(large & !small).iter().any(|&e| table[(small | 1 << e) as usize]);
                if !extendable {
                    report.exchange = Some((mask_to_set(small), mask_to_set(large)));
                    break 'exchange;
                }
            }
        }
        Ok(report)
    }

    /// Brute-force search for a bijection of ground sets preserving independence.
    pub fn are_isomorphic(&self, other: &Matroid, caps: &EnumerationCaps) -> Result<bool, MatroidError> {
        self.check_cap("isomorphism test", caps.isomorphism)?;
        other.check_cap("isomorphism test", caps.isomorphism)?;
        if self.ground_size != other.ground_size || self.full_rank() != other.full_rank() {
            return Ok(false);
        }
        let n = self.ground_size;
        let a: Vec<bool> = (0u32..1 << n).map(|m| self.independent_sorted(&mask_to_set(m))).collect();
        let b: Vec<bool> = (0u32..1 << n).map(|m| other.independent_sorted(&mask_to_set(m))).collect();
        let profile = |t: &[bool]| {
            let mut counts = vec![0usize; n + 1];
            for (m, &ind) in t.iter().enumerate() {
                if ind {
                    counts[(m as u32).count_ones() as usize] += 1;
                }
            }
            counts
        };
        if profile(&a) != profile(&b) {
            return Ok(false);
        }
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        Ok(extend_bijection(0, n, &a, &b, &mut image, &mut used))
    }
}

/// Assigns `image[i]`, checking every subset whose largest element is `i`.
fn extend_bijection(i: usize, n: usize, a: &[bool], b: &[bool], image: &mut [usize], used: &mut [bool]) -> bool {
    if i == n {
        return true;
    }
    for target in 0..n {
        if used[target] {
            continue;
        }
        image[i] = target;
        let consistent = (0u32..1 << i).all(|rest| {
            let m = rest | 1 << i;
            let mapped = mask_to_set(m).iter().fold(0u32, |acc, &e| acc | 1 << image[e]);
            a[m as usize] == b[mapped as usize]
        });
        if consistent {
            used[target] = true;
            if extend_bijection(i + 1, n, a, b, image, used) {
                return true;
            }
            used[target] = false;
        }
    }
    image[i] = usize::MAX;
    false
}

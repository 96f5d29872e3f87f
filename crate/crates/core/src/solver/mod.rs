//! Code synthesis from matroid representations, and the reverse extraction.

mod extract;
mod graphic;
mod representable;
mod uniform;

pub use extract::extract_representable;
pub use graphic::{solve_graphic, solve_graphic_with, spanning_forest, GraphicSolution};
pub use representable::solve_representable;
pub use uniform::{greedy_mds_vectors, solve_uniform, solve_uniform_with, uniform_field, UniformSolution};

use thiserror::Error;

use crate::field::{FieldCtx, FieldError, Matrix};
use crate::matroid::MatroidError;
use crate::matroidal::{MatroidalError, MatroidalViolation};
use crate::network::{CodeReport, GlobalCode, NetworkError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("network is not matroidal for this representation: condition {cond} fails ({0:?})", cond = .0.condition())]
    NotMatroidal(MatroidalViolation),
    #[error("code is not a solution: {0:?}")]
    NotASolution(Box<CodeReport>),
    #[error("uniform matroid parameters need c <= d, got c = {c}, d = {d}")]
    BadUniform { c: usize, d: usize },
    #[error(transparent)]
    Matroidal(#[from] MatroidalError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    /// Solution on the original network (dummy coordinates removed).
    pub code: GlobalCode,
    pub field: FieldCtx,
    /// Messages added while solving so the representation had full row rank.
    pub dummy_messages: usize,
    /// The representation after column reordering and row reduction, `[I | A']`.
    pub normalized: Matrix,
    /// Original column index at each position of `normalized`.
    pub column_order: Vec<usize>,
}

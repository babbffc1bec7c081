//! Locating Laplacian eigenvalues of trees relative to the average degree.

pub mod cli;
pub mod diagonalize;
pub mod dot;
pub mod enumerate;
pub mod gpp;
pub mod numerics;
pub mod oracle;
pub mod transforms;
pub mod tree;

pub use diagonalize::{count_interval, diagonalize, inertia, sigma, DiagResult, Inertia};
pub use numerics::Rational;
pub use tree::{RootedTree, Tree, TreeError, VertexId};

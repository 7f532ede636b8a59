//! Exact computations with finite-dimensional DG algebras and DG modules over
//! a field: homology, semifree resolutions, Hom and tensor complexes, and
//! windowed verdicts for semidualizing, Bass, Auslander and reflexivity
//! predicates.

pub mod catalog;
pub mod complex;
pub mod constructions;
pub mod dg;
pub mod error;
pub mod field;
pub mod io;
pub mod linalg;
pub mod resolution;
pub mod semidual;
pub mod semifree;
pub mod verdict;

pub use complex::{ChainMap, DGComplex, HomologyData};
pub use dg::{DGAlgebra, DGModule, LocalityCertificate};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use linalg::{Echelon, Matrix, SparseVec};
pub use verdict::{ShiftClassVerdict, TrustWindow, Verdict, VerdictReport};

/// Version string stamped into reports.
pub const KERNEL_VERSION: &str = env!("CARGO_PKG_VERSION");

//! Exact decision procedures for k-quasi-m-isometric composition operators `Cf = f∘φ` and
//! weighted composition operators `Wf = π·(f∘φ)` on `L²(μ)`, where `φ` is the parent map of a
//! directed graph with one circuit and finitely many branches.
//!
//! Every verdict is computed in exact rational arithmetic from closed-form Radon–Nikodym
//! derivatives and can be cross-checked against a brute-force oracle that enumerates atoms and
//! evaluates the defect operator on a finite matrix truncation.

pub mod classifier;
pub mod corpus;
pub mod derivatives;
pub mod error;
pub mod graph;
pub mod numeric;
pub mod oracle;
pub mod space;
pub mod specfile;

pub use classifier::{
    classify_composition, classify_m_isometry, classify_strict, classify_weighted, ClassificationReport,
    DefectQuery,
};
pub use error::{Error, Result};
pub use graph::{GraphSpec, VertexId};
pub use numeric::{Degree, EventuallyPolynomialSeq, Polynomial, Rational};
pub use space::{EventuallyConstantSeq, MeasureSpec, ValidationReport, WeightSpec};
pub use specfile::{parse_spec, LoadedSpec, SpecFile};

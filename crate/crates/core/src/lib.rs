//! Qudit ZXW-calculus: diagrams, their matrix semantics, rewrite rules and a
//! normalizer that decides diagram equality.

pub mod basis;
pub mod diagram;
pub mod error;
pub mod interpret;
pub mod io;
pub mod normal_form;
pub mod random;
pub mod rules;

pub use diagram::{
    Diagram, DiagramBuilder, Dimension, Endpoint, GeneratorKind, NodeId, PhaseVector, Role, Wire,
};
pub use error::{Result, ZxwError};
pub use interpret::{interpret, matrices_equal, semantics, Matrix};
pub use normal_form::{decide_equal, normalize, NormalForm};
pub use rules::{
    apply_at, builtin_rules, check_soundness, verify_all, Direction, RewriteRule, RuleParams,
    SoundnessReport,
};

//! Garside calculus toolkit.
//!
//! Validates right-complemented monoid presentations, decides divisibility
//! and equality by word reversing, enumerates lattices of simple elements and
//! Garside elements, extracts roots, and mechanically builds Garside
//! presentations for cyclic amalgamated free products, stuffed cyclic HNN
//! extensions, tree products of infinite cyclic groups, and one-relator
//! groups with non-trivial centre given in chain form.

pub mod atomicity;
pub mod caps;
pub mod combinators;
pub mod complement;
pub mod lattice;
pub mod oracle;
pub mod presentation;
pub mod reversing;
pub mod structure;
pub mod tree;

pub use caps::Caps;
pub use presentation::{Letter, Presentation, Relation, Word};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("not right-complemented: {0}")]
    NotComplemented(complement::NotComplemented),
    #[error("atomicity obstruction: {0}")]
    NotAtomic(String),
    #[error("cube condition fails on {failures} letter triple(s) (mirror side: {mirror})")]
    CubeFailed { mirror: bool, failures: usize },
    #[error("not Garside: {0}")]
    NotGarside(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("reversing diverged after {steps} steps")]
    Diverged { steps: u64 },
    #[error("{element} is not a root of a Garside element within the caps")]
    NotARoot { element: String },
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// True for failures that express a resource limit rather than a
    /// mathematical verdict.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::CapExceeded(_) | Error::Diverged { .. })
    }
}

impl From<lattice::LatticeError> for Error {
    fn from(e: lattice::LatticeError) -> Self {
        match e {
            lattice::LatticeError::Diverged { steps } => Error::Diverged { steps },
            lattice::LatticeError::CapExceeded { cap } => {
                Error::CapExceeded(format!("divisor enumeration cap of {cap} nodes"))
            }
        }
    }
}

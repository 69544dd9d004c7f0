use thiserror::Error;

use crate::lattice::LatticeSite;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration is empty")]
    EmptyConfiguration,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("duplicate site {0}: two atoms closer than the hard-core distance")]
    DuplicateSite(LatticeSite),
    #[error("configuration is not connected")]
    Disconnected,
    #[error("configuration encloses an unoccupied site at {0}")]
    Hole(LatticeSite),
    #[error("boundary is not a simple polygon: {0}")]
    NotSimple(String),
    #[error("not a ground state: {bonds} bonds, formula gives {expected}")]
    NotGroundState { bonds: u64, expected: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("search stopped after {nodes} nodes before it was exhaustive")]
    Incomplete { nodes: u64 },
    #[error("N={n}: exhaustive maximum {found} differs from formula {formula}")]
    FormulaMismatch { n: u64, found: u64, formula: u64, witness: Vec<LatticeSite> },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

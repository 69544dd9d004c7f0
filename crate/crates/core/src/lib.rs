//! Ground states of the sticky-disc pair potential on the triangular lattice:
//! construction, exhaustive verification at small sizes, structural checks,
//! and deviation from the hexagonal Wulff shape.

pub mod configuration;
pub mod constructors;
pub mod error;
pub mod formula;
pub mod harness;
pub mod hull;
pub mod lattice;
pub mod oracle;
pub mod polygon;
pub mod shape;
pub mod validators;

pub use configuration::{Configuration, Energy};
pub use constructors::{degenerate, hexagon, normalize, spiral, Move, Rearrangement};
pub use error::{Error, Result};
pub use hull::{analyze_corners, corner_components, CornerComponents, HexFrame};
pub use lattice::{canonical_form, LatticeIsometry, LatticeSite};
pub use polygon::{boundary_polygon, Angle, BoundaryPolygon};
pub use oracle::{max_bonds, OracleResult};
pub use shape::{fit_hexagon, flat_norm_proxy, gamma, surface_energy, wulff_set, HexagonFit};
pub use validators::{check_angle_grammar, check_side_structure, validate, Rule, Severity, ViolationReport};
pub use harness::{ConfigFile, ExperimentRecord, Family};

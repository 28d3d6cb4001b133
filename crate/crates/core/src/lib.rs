//! Entropic uncertainty lower bounds for projective measurements.
//!
//! Two orthonormal bases related by a unitary `U_ij = <a_i|b_j>` force the
//! outcome distributions `p`, `q` of any state to satisfy
//! `H(p) + H(q) >= B(U)`. This crate computes every such bound in its family:
//!
//! | id | construction |
//! |----|--------------|
//! | `D`, `MU`, `CP1` | closed forms in the two largest overlaps `c1`, `c2` |
//! | `CP2` | `max_kappa lambda_min(-2 Delta(kappa))`, golden-section search |
//! | `RPZ1..3` | tensor-product majorizers combined with relative-entropy monotonicity; grow by `S(rho)` for mixed states |
//! | `Maj1` | `H(Q)` for the tensor-product majorizer `Q` built from submatrix singular values |
//! | `Maj2` | `H(W)` for the direct-sum majorizer `W = (s1, s2 - s1, ...)` |
//! | `Multi` | direct-sum majorizer over `L` bases at once |
//!
//! All values are in nats. [`statelab`] supplies the sampling oracle that
//! checks any bound against entropy sums of random pure and mixed states.
//!
//! ```
//! use eub_core::bounds::{compute_report, BoundId, ReportOptions};
//! use eub_core::families::o3;
//! use eub_core::statelab::MeasurementSet;
//!
//! let report = compute_report(&MeasurementSet::pair(o3()), &ReportOptions::default()).unwrap();
//! let maj2_bits = report.bits(BoundId::Maj2).unwrap();
//! assert!((maj2_bits - 0.688).abs() < 1e-3);
//! ```
//!
//! Exhaustive searches, sweeps and sampling loops run on rayon when the
//! `parallel` feature (on by default) is enabled; see [`exec`].

pub mod bounds;
pub mod entropy;
pub mod error;
pub mod exec;
pub mod families;
pub mod io;
pub mod majorants;
pub mod matrix;
pub mod optimize;
pub mod statelab;

pub use bounds::{compute_report, BoundId, BoundReport, ReportOptions};
pub use entropy::{EntropyOrder, WeightVector};
pub use error::{Error, Result};
pub use exec::ExecMode;
pub use families::{build_family, FamilyId, FamilySpec};
pub use majorants::{PairMajorants, SearchOptions};
pub use matrix::{ComplexMatrix, UnitaryMatrix};
pub use statelab::{DensityMatrix, MeasurementSet, PureState};

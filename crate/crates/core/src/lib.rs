//! Lattice workbench for the phase-ansatz reduction of SU(2) gauge theory to
//! a spin-½ operator.
//!
//! - [`su2`]: Pauli algebra, group elements, gauge transformations.
//! - [`lattice`]: periodic 4D grids, central-difference stencils, convergence studies.
//! - [`ansatz`]: the profile A_μ = e^{−iλ_μ} and every quantity derived from it.
//! - [`contraction`]: the map x ↦ x* e^{−|x*−x|/n} and Banach iteration.
//! - [`bundle`]: charts, sections, transitions and the reduced operator.
//! - [`scenario`]: configuration, checks and reports used by the command-line tool.

pub mod ansatz;
pub mod bundle;
pub mod contraction;
pub mod error;
pub mod lattice;
pub mod scenario;
pub mod su2;

pub use error::{Error, Result};

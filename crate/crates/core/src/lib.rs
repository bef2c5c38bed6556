//! Perturbed Color Code on hexagonal tori: lattices, Pauli algebra, model
//! Hamiltonians, exact frame transformations, spectra, anyon bookkeeping and
//! phase observables.

pub mod anyons;
pub mod error;
pub mod gf2;
pub mod lattice;
pub mod models;
pub mod observables;
pub mod pauli;
pub mod spectra;
pub mod transform;

pub use error::{Error, Result};
pub use lattice::{build_hex_torus, validate_lattice, Color, ColorLattice, TorusSpec};
pub use pauli::{OperatorSum, PauliString, Term};

pub use anyons::{color_code_theory, condense, toric_code_theory, AnyonTheory, CondensationResult};
pub use models::{perturbed_h, Couplings, ModelBundle};
pub use observables::{classify_phase, PhaseLabel, PhasePoint};
pub use spectra::{SpectrumResult, StateVector};
pub use transform::{transform_h_ising, EquivalenceReport, FrameSpec};

//! Numerical engine for information flow from a qubit into a symmetric
//! qubit environment under pure decoherence.
//!
//! The crate computes mutual information, quantum discord with respect to
//! the pointer basis, and redundancy of the environment's records, exactly,
//! for environments of hundreds of qubits. The fragment density matrix is
//! diagonalized in time polynomial in the fragment size by decomposing the
//! permutation-symmetric tensor power into total-spin blocks; a dense
//! brute-force simulator ([`oracle`]) provides ground truth at small sizes.

pub mod decoherence;
pub mod error;
pub mod info;
pub mod oracle;
pub mod redundancy;
pub mod spectral;
pub mod states;

pub use decoherence::ModelParams;
pub use error::{Error, Result};
pub use info::InfoPoint;
pub use oracle::{DenseState, IdentityReport};
pub use redundancy::{LimitingRedundancy, RedundancyResult};
pub use spectral::{EulerAngles, SpinBlock};
pub use states::{EnvQubit, Spectrum, SystemQubit};

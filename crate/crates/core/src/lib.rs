//! Exact representation-theoretic machinery for symmetric groups, dihedral
//! groups and wreath products `G ≀ Z₂`, together with the distributions and
//! transcript probabilities induced by Clebsch-Gordan sieve measurements.
//!
//! The crate is organised around a handful of layers:
//!
//! - [`partition`] / [`perm`]: Young diagrams, hook lengths, RSK and
//!   permutation statistics.
//! - [`character`]: Murnaghan-Nakayama character values of `S_n`, full
//!   character tables, inner products and tensor-product multiplicities.
//! - [`group`]: concrete finite groups (symmetric, dihedral, wreath) with
//!   dense element indices and per-element character data.
//! - [`dist`] / [`wreath`]: Plancherel, natural and coset distributions over
//!   irrep labels, collision probabilities, typicality.
//! - [`forest`] / [`sieve`]: labeled measurement forests, exact transcript
//!   probabilities in the trivial- and order-two-subgroup cases, audits and
//!   Monte-Carlo experiment drivers.
//! - [`oracle`]: dense regular-representation matrices and projection
//!   operators; the brute-force ground truth for every probability formula.
//! - [`trends`]: finite-n scans of the asymptotic statements (maximal
//!   dimension, typicality decay, partition growth, smoothness).
//!
//! All probability computations on groups with integer character tables are
//! carried out in exact integer/rational arithmetic; floating point appears
//! only where the character values themselves are irrational (dihedral groups
//! other than `D_2, D_3, D_4, D_6`) and in log-domain large-`n` scans.

pub mod character;
pub mod dist;
pub mod forest;
pub mod group;
pub mod oracle;
pub mod partition;
pub mod perm;
pub mod rng;
pub mod scalar;
pub mod sieve;
pub mod stats;
pub mod trends;
pub mod wreath;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

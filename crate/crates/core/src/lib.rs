//! Exact-arithmetic model of boson Fock space over the rationals.
//!
//! The objects here are finitely supported functions on `Q^n / K` for a
//! full-rank lattice `K` in `Q^n`, with values in a cyclotomic field and a
//! single positive "norm" prefactor of the form `q * sqrt(r)`.  On this space
//! the crate realizes, in exact arithmetic:
//!
//! * the Heisenberg group action (translations and characters),
//! * the Weil representation of `Sp(2n, Q)` through generator words
//!   (dilations, a Fourier atom, and quadratic multipliers),
//! * congruence-subgroup utilities (membership, generator sampling,
//!   delta-normalized operators, stabilizer levels),
//! * a floating-point bridge to classical theta functions on the Siegel
//!   half-space.
//!
//! Everything outside [`bridge`] is exact: equality of scalars, lattices and
//! elements is decidable and structural on canonical forms.

pub mod bridge;
pub mod bruhat;
pub mod congruence;
pub mod cyclo;
pub mod error;
pub mod heisenberg;
pub mod intmat;
pub mod lattice;
pub mod normfactor;
pub mod qmat;
pub mod rational;
pub mod sample;
pub mod schema;
pub mod verify;
pub mod weil;

pub use bridge::{GaussianSpec, ModularityReport, PairingValue, PoissonDistribution, SiegelPoint};
pub use bruhat::MElement;
pub use congruence::{CongruenceKind, CongruenceSpec, StabilizerReport};
pub use cyclo::CycloScalar;
pub use heisenberg::HeisElement;
pub use error::{Error, Result};
pub use lattice::{AdaptedBasis, LatticePair, QLattice};
pub use normfactor::{NormFactor, Scalar};
pub use rational::Rat;
pub use sample::Sampler;
pub use verify::{run_suite, SuiteReport, VerifyConfig};
pub use weil::{GeneratorAtom, GeneratorWord, SpMatrix};

/// Default ceiling on any coset enumeration (`[L:K]`, Fourier supports,
/// commutant bases).  Operations that would enumerate more cosets than this
/// return [`Error::IndexOverflow`] instead of running away.
pub const DEFAULT_INDEX_CAP: u64 = 1_000_000;

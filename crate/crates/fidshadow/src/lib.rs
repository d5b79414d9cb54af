//! Statistics of the operation fidelity of quantum channels.
//!
//! A quantum channel given by Kraus operators `{K_j}` maps a pure state
//! `|psi>` to `sum_j K_j |psi><psi| K_j^dag`; its operation fidelity is the
//! overlap `F = <psi| Phi(|psi><psi|) |psi> = sum_j |<psi|K_j|psi>|^2`.
//! Splitting every Kraus operator into Hermitian and anti-Hermitian parts
//! turns `F` into the squared Euclidean length of a joint-expectation vector,
//! so extreme fidelities are squares of the joint numerical radius and the
//! Crawford number of the split collection, and the distribution of `F` under
//! Haar-random states is governed by the joint numerical shadow.
//!
//! The crate provides:
//!
//! - [`channel`]: channel/state representation, validation, Haar sampling and
//!   direct Monte Carlo fidelity estimation;
//! - [`numrange`]: joint expectation vectors, numerical radius and Crawford
//!   number via multi-start optimization on the state sphere, shadow clouds;
//! - [`analytic`]: closed-form fidelity densities for qubit unitary, mixed
//!   unitary, Pauli and qutrit unitary channels;
//! - [`schur`]: exact extremal fidelity of channels with diagonal Kraus
//!   operators through the Gram-matrix quadratic form on the simplex;
//! - [`simplex_shadow`]: uniform simplex shadows of commuting Hermitian
//!   collections and the sampling route to fidelity densities, including the
//!   epsilon-family construction for arbitrary unitary channels;
//! - [`discriminate`]: distribution-based statistical channel discrimination.

pub mod analytic;
pub mod channel;
pub mod discriminate;
pub mod error;
pub mod linalg;
pub mod numrange;
pub mod quadrature;
pub mod schur;
pub mod simplex_shadow;
pub mod stats;

pub use channel::{ChannelSpec, EmpiricalDistribution, HermitianPair, PureState};
pub use error::{Error, Result};

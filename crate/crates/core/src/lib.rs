//! Covariance-matrix toolkit for localizing the entanglement of multimode
//! Gaussian states onto a chosen pair of modes.
//!
//! Everything works on covariance matrices in the interleaved quadrature
//! ordering `(x1, p1, ..., xN, pN)` with the vacuum normalized to the
//! identity. The crate provides
//!
//! * symplectic transforms and Williamson normal forms ([`symplectic`]),
//! * physical Gaussian states with reduction and transform plumbing
//!   ([`gaussian`]),
//! * conditioning on Gaussian measurements of a subset of modes, including
//!   ideal homodyne as an exact singular limit ([`conditioning`]),
//! * entanglement measures for two-mode states ([`entanglement`]),
//! * optimizers that pick the local single-mode measurements maximizing the
//!   entanglement left on the kept pair, together with a brute-force grid
//!   oracle ([`localize`]),
//! * a Fock-space treatment of photon counting on one arm of two-mode
//!   squeezed vacuum, for comparing Gaussian with non-Gaussian strategies
//!   ([`fock`]).
//!
//! The crate is `no_std` (with `alloc`); IO, file formats, and the command
//! line front end live in the companion crate `gle-cli`.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod conditioning;
pub mod entanglement;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod localize;
pub mod sampling;
pub mod symplectic;
pub mod tol;

pub use error::{Error, Result};
pub use gaussian::{GaussianState, ModePartition};
pub use symplectic::SymplecticTransform;

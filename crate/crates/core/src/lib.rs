//! Projection constants, Sidon constants and Gaussian limit constants of
//! spaces of real functions on the Boolean cube `{-1, +1}^N` spanned by a
//! fixed family of Walsh characters.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; sweeps that are worth parallelizing expose a
//! block decomposition (see [`projection::ExactSweep`] and
//! [`sidon::SidonProblem`]) so that a caller with threads can split the work
//! while keeping results bit-identical.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod combinatorics;
pub mod cube;
mod error;
pub mod hermite;
mod linalg;
pub mod lp;
pub mod primes;
pub mod projection;
mod quadrature;
pub mod rational;
pub mod rng;
pub mod sidon;
pub mod verify;

pub use cube::{
    character_eval, evaluate, make_family, walsh_transform, inverse_walsh_transform, CubePoint,
    FamilyKind, FamilySpec, GrayCode, GrayStep, SubsetMask, SupportFamily, WalshPolynomial,
};
pub use error::{Error, Result};
pub use rational::ExactRational;

//! Monodromy groups of real Enriques surfaces of hyperbolic type.
//!
//! The crate encodes topological types of real parts and their Morse
//! derivatives ([`topology`], [`morse`]), the permutation groups acting on
//! their components ([`permgroup`]), the scheme notations for the auxiliary
//! curves ([`real_scheme`], [`root_scheme`]), and the engine that computes
//! realized groups from the shipped catalog ([`monodromy`], [`catalog`]).

pub mod catalog;
pub mod cli;
pub mod monodromy;
pub mod morse;
pub mod permgroup;
pub mod real_scheme;
pub mod root_scheme;
pub mod topology;

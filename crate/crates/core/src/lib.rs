//! Generalized B.H. Neumann groups `B(d, r, r) ≤ ∏ Alt(d(n))` built to have
//! a prescribed residual finiteness growth.
//!
//! The crate constructs the parameter sequences, solves the word problem of
//! the group exactly (through the local comparison with the lamplighter group
//! `C₃ ≀ ℤ`), and computes the proven growth bounds in log domain.

pub mod cli;
pub mod growth;
pub mod neumann;
pub mod perm;
pub mod schreier;
pub mod seqgen;
pub mod words;
pub mod wreath;

//! Numerical engine for metric mixed 3-structures: ambient spaces, structure
//! axioms, submanifold calculus on explicit immersions, and a check registry.

pub mod ambient;
pub mod catalog;
pub mod config;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod structures;
pub mod submanifold;
pub mod verifier;

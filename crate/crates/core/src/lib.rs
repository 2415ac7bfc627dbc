//! Hilbert functions of graded algebras and finite point sets: Macaulay
//! growth bounds, Gotzmann persistence, monomial and lex-segment ideals,
//! exact rank computations over large prime fields, and a rule engine that
//! reads base-locus structure off flat stretches of an h-vector.

pub mod diagnose;
pub mod error;
pub mod form;
pub mod gotzmann;
pub mod macaulay;
pub mod modla;
pub mod monomial;
pub mod points;
pub mod poly;
pub mod seq;

pub use error::{Error, Result};
pub use seq::{HilbertSeq, Tail};

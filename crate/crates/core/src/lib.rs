//! Computational toolkit for twisted polynomial rings over finite fields and
//! the embedding problems they carry.

pub mod arith;
pub mod embed;
pub mod ffield;
pub mod fpoly;
pub mod groups;
pub mod orepoly;
pub mod par;
pub mod quat;
pub mod selftest;
pub mod splitcon;

pub use par::Execution;

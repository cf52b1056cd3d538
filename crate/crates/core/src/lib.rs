#![allow(clippy::result_large_err)]

pub mod adic;
pub mod complex;
pub mod error;
pub mod flatness;
pub mod free;
pub mod groebner;
pub mod koszul;
pub mod module;
pub mod monomial;
pub mod poly;
pub mod resolution;
pub mod ring;
pub mod scalar;
pub mod verdict;
pub mod wpr;

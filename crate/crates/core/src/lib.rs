//! Exhaustive analysis of n-ary associative operations.
//!
//! An n-ary operation `f : A^n -> A` is associative when every placement of a
//! nested application inside a (2n-1)-tuple yields the same value. This crate
//! works with two concrete incarnations of that definition:
//!
//! * [`finops`] — operations on finite carriers stored as flat value tables,
//!   with the derived-operation recursion and primitivity search;
//! * [`mlpoly`] — multilinear polynomials over the integers and prime fields,
//!   with symbolic composition and classification into the canonical
//!   associative forms;
//!
//! plus [`boolcls`] for the two-element classification (canonical families,
//! probe decision tree, binary derivability) and [`enumerate`] for the
//! exhaustive scan and verification harnesses. [`algebra`] supplies the exact
//! coefficient arithmetic; nothing in the crate touches floating point.

pub mod algebra;
pub mod boolcls;
pub mod enumerate;
mod error;
pub mod finops;
pub mod mlpoly;

pub use error::{Error, Result};

/// Upper bound on the number of cells or tuples a single operation may scan.
///
/// Exhaustive checks refuse to start when the required work exceeds the
/// bound, so an oversized request fails immediately instead of grinding for
/// hours. One value covers table sizes, tuple spaces and candidate counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GuardRail {
    max_cells: u64,
}

impl GuardRail {
    /// Default bound: 2^24 cells/tuples, comfortable desk scale.
    pub const DEFAULT_MAX_CELLS: u64 = 1 << 24;

    pub fn new(max_cells: u64) -> GuardRail {
        GuardRail { max_cells }
    }

    pub fn max_cells(&self) -> u64 {
        self.max_cells
    }

    /// Errors with [`Error::InfeasibleSize`] when `needed` exceeds the bound.
    pub fn check(&self, needed: u128) -> Result<()> {
        if needed > self.max_cells as u128 {
            Err(Error::InfeasibleSize { needed, bound: self.max_cells })
        } else {
            Ok(())
        }
    }
}

impl Default for GuardRail {
    fn default() -> GuardRail {
        GuardRail { max_cells: Self::DEFAULT_MAX_CELLS }
    }
}

/// `base^exp` as u128, `None` on overflow.
pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<u128> {
    let exp = u32::try_from(exp).ok()?;
    (base as u128).checked_pow(exp)
}

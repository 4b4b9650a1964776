//! Certified real and complex ball arithmetic with adaptive precision.
//!
//! Values are midpoint-radius balls over exact dyadic numbers. Every
//! operation returns a ball that contains the exact result for all members
//! of its inputs, so sign and separation queries are never wrong, only
//! possibly undecided.

mod complex;
mod dyadic;
mod real;

pub use complex::CertifiedComplex;
pub use dyadic::Dyadic;
pub use real::{ci_is_integer_near, ci_sign, ci_sqrt, CertifiedReal, Sign, FALLBACK_BITS};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum NumError {
    #[error("interval straddles the branch point of the square root")]
    IntervalStraddlesZeroBranch,
    #[error("square root of a negative interval")]
    NegativeRadicand,
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("logarithm of an interval not certifiably positive")]
    NonPositiveLogArgument,
    #[error("precision insufficient to decide")]
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    pub working_bits: u32,
    pub max_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { working_bits: 128, max_bits: 4096 }
    }
}

impl Precision {
    pub fn new(working_bits: u32, max_bits: u32) -> Self {
        let max_bits = max_bits.max(working_bits);
        Precision { working_bits: working_bits.max(16), max_bits }
    }

    pub fn fixed(bits: u32) -> Self {
        Precision::new(bits, bits)
    }

    /// The sequence of working precisions tried by a refinement loop.
    pub fn schedule(&self) -> Vec<u32> {
        let mut out = vec![self.working_bits];
        let mut b = self.working_bits;
        while b < self.max_bits {
            b = (b * 2).min(self.max_bits);
            out.push(b);
        }
        out
    }
}

/// Outcome of one attempt at a fixed precision.
pub enum Attempt<T, E> {
    Done(T),
    Refine(E),
    Fail(E),
}

/// Run `f` at doubling precisions until it resolves, fails hard, or the
/// ceiling is reached. Returns the value with the precision that produced it,
/// or the last error.
pub fn refine<T, E>(prec: Precision, mut f: impl FnMut(u32) -> Attempt<T, E>) -> Result<(T, u32), E> {
    let mut last = None;
    for bits in prec.schedule() {
        match f(bits) {
            Attempt::Done(v) => return Ok((v, bits)),
            Attempt::Fail(e) => return Err(e),
            Attempt::Refine(e) => last = Some(e),
        }
    }
    Err(last.expect("schedule is never empty"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_doubles_to_ceiling() {
        assert_eq!(Precision::default().schedule(), vec![128, 256, 512, 1024, 2048, 4096]);
        assert_eq!(Precision::new(100, 300).schedule(), vec![100, 200, 300]);
    }

    #[test]
    fn refine_stops_at_ceiling() {
        let mut calls = 0;
        let r: Result<((), u32), &str> = refine(Precision::new(64, 256), |_| {
            calls += 1;
            Attempt::Refine("never")
        });
        assert!(r.is_err());
        assert_eq!(calls, 3);
    }
}

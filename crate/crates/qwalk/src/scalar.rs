//! Coefficient fields shared by the exact and certified code paths.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::numerics::{CertifiedComplex, CertifiedReal, NumError, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroStatus {
    Zero,
    NonZero,
    Undecided,
}

pub trait Scalar: Clone + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_rational(r: &BigRational, prec: u32) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn try_div(&self, o: &Self) -> Result<Self, NumError>;
    fn zero_status(&self) -> ZeroStatus;
    fn is_exact(&self) -> bool;

    fn is_exact_zero(&self) -> bool {
        self.zero_status() == ZeroStatus::Zero
    }

    fn pow_i(&self, n: i64) -> Result<Self, NumError> {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        if n < 0 {
            Self::one().try_div(&acc)
        } else {
            Ok(acc)
        }
    }

    /// Square root up to sign, if representable in the field.
    fn try_sqrt(&self) -> Result<Self, NumError>;
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(r: &BigRational, _prec: u32) -> Self {
        r.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_div(&self, o: &Self) -> Result<Self, NumError> {
        if o.is_zero() {
            Err(NumError::DivisionByZero)
        } else {
            Ok(self / o)
        }
    }
    fn zero_status(&self) -> ZeroStatus {
        if self.is_zero() {
            ZeroStatus::Zero
        } else {
            ZeroStatus::NonZero
        }
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn try_sqrt(&self) -> Result<Self, NumError> {
        rational_sqrt(self).ok_or(NumError::Undecided)
    }
}

/// Exact square root of a non-negative rational that is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &n * &n == *r.numer() && &d * &d == *r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl Scalar for CertifiedComplex {
    fn zero() -> Self {
        CertifiedComplex::zero()
    }
    fn one() -> Self {
        CertifiedComplex::one()
    }
    fn from_i64(n: i64) -> Self {
        CertifiedComplex::from_i64(n)
    }
    fn from_rational(r: &BigRational, prec: u32) -> Self {
        CertifiedComplex::real(CertifiedReal::from_rational(r, prec))
    }
    fn add(&self, o: &Self) -> Self {
        CertifiedComplex::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        CertifiedComplex::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        CertifiedComplex::mul(self, o)
    }
    fn neg(&self) -> Self {
        CertifiedComplex::neg(self)
    }
    fn try_div(&self, o: &Self) -> Result<Self, NumError> {
        self.div(o)
    }
    fn zero_status(&self) -> ZeroStatus {
        if self.is_exact() && self.re.mid().is_zero() && self.im.mid().is_zero() {
            ZeroStatus::Zero
        } else if self.contains_zero() {
            ZeroStatus::Undecided
        } else {
            ZeroStatus::NonZero
        }
    }
    fn is_exact(&self) -> bool {
        CertifiedComplex::is_exact(self)
    }
    fn try_sqrt(&self) -> Result<Self, NumError> {
        self.any_sqrt()
    }
}

/// Relation between two nonzero values `a`, `b` with respect to the lattice
/// `q^Z`: `Same(l)` means `a = q^l b` (proved), `Distinct` means no
/// `|l| <= bound` works (proved).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum OrbitRelation {
    Same(i64),
    Distinct(OrbitEvidence),
    Undecided(OrbitEvidence),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitEvidence {
    /// Offsets checked: all `l` with `|l| <= bound`.
    pub bound: u64,
    pub reason: String,
}

pub trait QScalar: Scalar {
    fn orbit_relation(a: &Self, b: &Self, q: &Self, bound: u64) -> OrbitRelation;
    fn describe(&self) -> String;
}

impl QScalar for BigRational {
    fn orbit_relation(a: &Self, b: &Self, q: &Self, bound: u64) -> OrbitRelation {
        let ratio = a / b;
        if ratio.is_one() {
            return OrbitRelation::Same(0);
        }
        let est = log2_abs(&ratio) / log2_abs(q);
        let ev = |reason: String| OrbitEvidence { bound, reason };
        if !est.is_finite() {
            return OrbitRelation::Distinct(ev("degenerate ratio".into()));
        }
        let centre = est.round() as i64;
        for l in (centre - 2)..=(centre + 2) {
            if l.unsigned_abs() > bound || l == 0 {
                continue;
            }
            if q.pow(l as i32) == ratio {
                return OrbitRelation::Same(l);
            }
        }
        OrbitRelation::Distinct(ev(format!("exact: ratio {} is not a power of q", ratio)))
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

fn log2_abs(r: &BigRational) -> f64 {
    fn log2_int(n: &BigInt) -> f64 {
        let bits = n.bits() as i64;
        let shift = (bits - 53).max(0);
        let top = (n.abs() >> shift as u64).to_f64().unwrap_or(f64::NAN);
        top.log2() + shift as f64
    }
    log2_int(r.numer()) - log2_int(r.denom())
}

impl QScalar for CertifiedComplex {
    fn orbit_relation(a: &Self, b: &Self, q: &Self, bound: u64) -> OrbitRelation {
        certified_orbit_relation(a, b, q, bound)
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

/// Interval test of `a/b` against `q^l`, `|l| <= bound`, for real `q`.
/// Equality is never concluded here; a surviving candidate is Undecided.
pub fn certified_orbit_relation(
    a: &CertifiedComplex,
    b: &CertifiedComplex,
    q: &CertifiedComplex,
    bound: u64,
) -> OrbitRelation {
    let ev = |reason: String| OrbitEvidence { bound, reason };
    let r = match a.div(b) {
        Ok(r) => r,
        Err(_) => return OrbitRelation::Undecided(ev("divisor encloses zero".into())),
    };
    if !q.im.contains_zero() {
        return OrbitRelation::Undecided(ev("q is not real".into()));
    }
    if r.im.sign() != Sign::ZeroOrUndecided {
        return OrbitRelation::Distinct(ev("ratio has certified nonzero imaginary part".into()));
    }
    let re = &r.re;
    let r_sign = re.sign();
    if r_sign == Sign::ZeroOrUndecided {
        return OrbitRelation::Undecided(ev("ratio encloses zero".into()));
    }
    let q_re = &q.re;
    let q_sign = q_re.sign();
    if q_sign == Sign::ZeroOrUndecided {
        return OrbitRelation::Undecided(ev("q encloses zero".into()));
    }
    let abs_r = if r_sign == Sign::Negative { re.neg() } else { re.clone() };
    let abs_q = if q_sign == Sign::Negative { q_re.neg() } else { q_re.clone() };
    let (lr, lq) = match (abs_r.ln(), abs_q.ln()) {
        (Ok(x), Ok(y)) => (x, y),
        _ => return OrbitRelation::Undecided(ev("logarithm undecided".into())),
    };
    let est = match lr.div(&lq) {
        Ok(e) => e,
        Err(_) => return OrbitRelation::Undecided(ev("|q| not separated from 1".into())),
    };
    match crate::numerics::ci_is_integer_near(&est, bound) {
        Err(_) => OrbitRelation::Undecided(ev(format!("offset enclosure {} too wide", est))),
        Ok(None) => OrbitRelation::Distinct(ev(format!(
            "log|ratio|/log|q| in {} contains no admissible integer",
            est
        ))),
        Ok(Some(l)) => {
            let sign_ok = match (r_sign, q_sign) {
                (Sign::Positive, _) => q_sign == Sign::Positive || l % 2 == 0,
                (Sign::Negative, Sign::Negative) => l % 2 != 0,
                _ => false,
            };
            if !sign_ok {
                return OrbitRelation::Distinct(ev(format!("sign of ratio excludes candidate offset {}", l)));
            }
            // Check the candidate directly: a disjoint enclosure refutes it.
            match q.pow_i(l) {
                Ok(ql) if !ql.overlaps(&r) => OrbitRelation::Distinct(ev(format!(
                    "candidate offset {} refuted by enclosure of q^{}",
                    l, l
                ))),
                _ => OrbitRelation::Undecided(ev(format!("ratio is within tolerance of q^{}", l))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_orbits() {
        let q = rat(2, 1);
        assert_eq!(BigRational::orbit_relation(&rat(8, 1), &rat(1, 1), &q, 10), OrbitRelation::Same(3));
        assert_eq!(BigRational::orbit_relation(&rat(1, 4), &rat(1, 1), &q, 10), OrbitRelation::Same(-2));
        assert!(matches!(BigRational::orbit_relation(&rat(5, 1), &rat(1, 1), &q, 10), OrbitRelation::Distinct(_)));
        assert!(matches!(BigRational::orbit_relation(&rat(-2, 1), &rat(1, 1), &q, 10), OrbitRelation::Distinct(_)));
    }

    #[test]
    fn certified_orbits() {
        let prec = 128;
        let q = CertifiedComplex::from_rational(&rat(3, 2), prec);
        let a = CertifiedComplex::from_rational(&rat(7, 3), prec);
        let b = CertifiedComplex::from_rational(&rat(1, 1), prec);
        assert!(matches!(certified_orbit_relation(&a, &b, &q, 200), OrbitRelation::Distinct(_)));
        let a = CertifiedComplex::from_rational(&rat(27, 8), prec);
        assert!(matches!(certified_orbit_relation(&a, &b, &q, 200), OrbitRelation::Undecided(_)));
        let a = CertifiedComplex::new(CertifiedReal::from_i64(1), CertifiedReal::from_i64(1)).with_precision(prec);
        assert!(matches!(certified_orbit_relation(&a, &b, &q, 200), OrbitRelation::Distinct(_)));
    }
}

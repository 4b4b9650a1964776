//! Rectangular complex enclosures built from two real balls.

use std::fmt;

use num_rational::BigRational;

use super::real::{CertifiedReal, Sign};
use super::NumError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedComplex {
    pub re: CertifiedReal,
    pub im: CertifiedReal,
}

impl CertifiedComplex {
    pub fn new(re: CertifiedReal, im: CertifiedReal) -> Self {
        CertifiedComplex { re, im }
    }

    pub fn real(re: CertifiedReal) -> Self {
        CertifiedComplex { re, im: CertifiedReal::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        CertifiedComplex::real(CertifiedReal::from_i64(n))
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        CertifiedComplex::real(CertifiedReal::from_rational(r, prec))
    }

    pub fn i() -> Self {
        CertifiedComplex { re: CertifiedReal::zero(), im: CertifiedReal::one() }
    }

    pub fn zero() -> Self {
        CertifiedComplex::from_i64(0)
    }

    pub fn one() -> Self {
        CertifiedComplex::from_i64(1)
    }

    pub fn precision(&self) -> u32 {
        self.re.precision().max(self.im.precision())
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        CertifiedComplex { re: self.re.with_precision(prec), im: self.im.with_precision(prec) }
    }

    pub fn is_exact(&self) -> bool {
        self.re.is_exact() && self.im.is_exact()
    }

    /// True when the imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.im.is_exact() && self.im.mid().is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn overlaps(&self, o: &CertifiedComplex) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    /// Largest of the two component widths.
    pub fn width(&self) -> super::Dyadic {
        self.re.width().max(self.im.width())
    }

    pub fn neg(&self) -> Self {
        CertifiedComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        CertifiedComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn add(&self, o: &CertifiedComplex) -> Self {
        CertifiedComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CertifiedComplex) -> Self {
        CertifiedComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn mul(&self, o: &CertifiedComplex) -> Self {
        if self.is_real() && o.is_real() {
            return CertifiedComplex::real(self.re.mul(&o.re));
        }
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        CertifiedComplex { re, im }
    }

    pub fn scale(&self, r: &CertifiedReal) -> Self {
        CertifiedComplex { re: self.re.mul(r), im: self.im.mul(r) }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        CertifiedComplex { re: self.re.mul_pow2(k), im: self.im.mul_pow2(k) }
    }

    pub fn norm_sqr(&self) -> CertifiedReal {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn recip(&self) -> Result<Self, NumError> {
        if self.is_real() {
            return Ok(CertifiedComplex::real(self.re.recip()?));
        }
        let n = self.norm_sqr();
        let inv = n.recip()?;
        Ok(self.conj().scale(&inv))
    }

    pub fn div(&self, o: &CertifiedComplex) -> Result<Self, NumError> {
        if o.is_real() {
            let inv = o.re.recip()?;
            return Ok(self.scale(&inv));
        }
        Ok(self.mul(&o.recip()?))
    }

    pub fn pow_u(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CertifiedComplex::one().with_precision(self.precision());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn pow_i(&self, n: i64) -> Result<Self, NumError> {
        if n >= 0 {
            Ok(self.pow_u(n as u64))
        } else {
            self.pow_u(n.unsigned_abs()).recip()
        }
    }

    pub fn abs(&self) -> Result<CertifiedReal, NumError> {
        if self.is_real() {
            let r = &self.re;
            return Ok(match r.sign() {
                Sign::Negative => r.neg(),
                Sign::Positive => r.clone(),
                Sign::ZeroOrUndecided => {
                    let m = r.mag();
                    CertifiedReal::from_endpoints(&super::Dyadic::zero(), &m, r.precision())
                }
            });
        }
        let n = self.norm_sqr();
        match n.sqrt() {
            Ok(v) => Ok(v),
            Err(_) => {
                let hi = n.hi().sqrt_ceil(n.precision().max(64));
                Ok(CertifiedReal::from_endpoints(&super::Dyadic::zero(), &hi, n.precision()))
            }
        }
    }

    /// Principal square root (branch cut on the negative real axis).
    pub fn sqrt(&self) -> Result<Self, NumError> {
        let a = &self.re;
        let b = &self.im;
        if self.is_real() {
            return match a.sign() {
                Sign::Negative => Ok(CertifiedComplex { re: CertifiedReal::zero(), im: a.neg().sqrt()? }),
                _ => Ok(CertifiedComplex::real(a.sqrt()?)),
            };
        }
        let r = self.abs()?;
        let via_re = || -> Result<Self, NumError> {
            let re = r.add(a).mul_pow2(-1).sqrt()?;
            let im = b.div(&re.mul_pow2(1))?;
            Ok(CertifiedComplex { re, im })
        };
        let via_im = || -> Result<Self, NumError> {
            let im_abs = r.sub(a).mul_pow2(-1).sqrt()?;
            let im = if b.sign() == Sign::Negative { im_abs.neg() } else { im_abs };
            let re = b.div(&im.mul_pow2(1))?;
            Ok(CertifiedComplex { re, im })
        };
        match (a.sign(), b.sign()) {
            (Sign::Positive, _) => via_re(),
            (_, Sign::ZeroOrUndecided) => Err(NumError::IntervalStraddlesZeroBranch),
            (Sign::Negative, _) => via_im(),
            _ => via_re().or_else(|_| via_im()),
        }
    }

    /// Some square root, chosen to stay continuous when the argument sits
    /// near the negative real axis. Suitable wherever only `±w` matters.
    pub fn any_sqrt(&self) -> Result<Self, NumError> {
        if self.re.sign() == Sign::Negative && self.im.sign() == Sign::ZeroOrUndecided {
            let w = self.neg().sqrt()?;
            return Ok(w.mul(&CertifiedComplex::i()));
        }
        self.sqrt()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl From<CertifiedReal> for CertifiedComplex {
    fn from(r: CertifiedReal) -> Self {
        CertifiedComplex::real(r)
    }
}

impl fmt::Display for CertifiedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_minus_four() {
        let z = CertifiedComplex::from_i64(-4);
        let w = z.sqrt().unwrap();
        assert!(w.re.contains_zero());
        assert!(w.im.contains(&super::super::Dyadic::from_i64(2)));
    }

    #[test]
    fn sqrt_squares_back() {
        let z = CertifiedComplex::new(
            CertifiedReal::from_i64(-3).with_precision(96),
            CertifiedReal::from_i64(4).with_precision(96),
        );
        let w = z.sqrt().unwrap();
        // principal root of -3+4i is 1+2i
        assert!(w.re.contains(&super::super::Dyadic::from_i64(1)));
        assert!(w.im.contains(&super::super::Dyadic::from_i64(2)));
        assert!(w.mul(&w).overlaps(&z));
    }

    #[test]
    fn division_roundtrip() {
        let a = CertifiedComplex::new(CertifiedReal::from_i64(2), CertifiedReal::from_i64(-5)).with_precision(80);
        let b = CertifiedComplex::new(CertifiedReal::from_i64(1), CertifiedReal::from_i64(3)).with_precision(80);
        let c = a.div(&b).unwrap().mul(&b);
        assert!(c.overlaps(&a));
    }
}

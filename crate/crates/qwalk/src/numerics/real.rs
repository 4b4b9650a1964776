//! Midpoint-radius enclosures of real numbers.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dyadic::Dyadic;
use super::NumError;

/// Bits kept in radii; radii are always rounded upward.
const RAD_BITS: u32 = 30;

/// Precision used when both operands are exact and an operation must round.
pub const FALLBACK_BITS: u32 = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedReal {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    ZeroOrUndecided,
    Positive,
}

fn rad_up(d: Dyadic) -> Dyadic {
    d.round_ceil(RAD_BITS)
}

impl CertifiedReal {
    pub fn exact(mid: Dyadic) -> Self {
        CertifiedReal { mid, rad: Dyadic::zero(), prec: 0 }
    }

    pub fn from_i64(n: i64) -> Self {
        CertifiedReal::exact(Dyadic::from_i64(n))
    }

    pub fn zero() -> Self {
        CertifiedReal::from_i64(0)
    }

    pub fn one() -> Self {
        CertifiedReal::from_i64(1)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let lo = Dyadic::from_rational_floor(r, prec);
        if lo.to_rational() == *r {
            return CertifiedReal { mid: lo, rad: Dyadic::zero(), prec };
        }
        let hi = Dyadic::from_rational_ceil(r, prec);
        CertifiedReal::from_endpoints(&lo, &hi, prec)
    }

    /// Smallest ball with a dyadic midpoint containing `[lo, hi]`.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Self {
        let mid = lo.add(hi).half();
        let rad = hi.sub(lo).half();
        CertifiedReal { mid, rad: rad_up(rad), prec }.rounded()
    }

    pub fn with_radius(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        CertifiedReal { mid, rad: rad_up(rad.abs()), prec }.rounded()
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        CertifiedReal { prec, ..self.clone() }.rounded()
    }

    fn work_prec(&self, o: &CertifiedReal) -> u32 {
        self.prec.max(o.prec)
    }

    fn eff_prec(&self) -> u32 {
        if self.prec == 0 {
            FALLBACK_BITS
        } else {
            self.prec
        }
    }

    /// Round the midpoint to the working precision, widening the radius.
    fn rounded(mut self) -> Self {
        if self.prec == 0 || self.mid.bits() <= self.prec as u64 {
            return self;
        }
        // Midpoint bits beyond what the radius resolves carry no information.
        let lo = self.mid.round_floor(self.prec);
        let err = self.mid.sub(&lo);
        self.mid = lo;
        self.rad = rad_up(self.rad.add(&err));
        self
    }

    pub fn lo(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn hi(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn width(&self) -> Dyadic {
        self.rad.mul_pow2(1)
    }

    /// Upper bound on `|x|` for all members.
    pub fn mag(&self) -> Dyadic {
        self.mid.abs().add(&self.rad)
    }

    /// Lower bound on `|x|` for all members (zero if the ball meets 0).
    pub fn mig(&self) -> Dyadic {
        let m = self.mid.abs().sub(&self.rad);
        if m.signum() > 0 {
            m
        } else {
            Dyadic::zero()
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mig().is_zero()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        self.lo() <= *x && *x <= self.hi()
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo().to_rational() <= *r && *r <= self.hi().to_rational()
    }

    pub fn overlaps(&self, o: &CertifiedReal) -> bool {
        self.lo() <= o.hi() && o.lo() <= self.hi()
    }

    pub fn neg(&self) -> Self {
        CertifiedReal { mid: self.mid.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn add(&self, o: &CertifiedReal) -> Self {
        CertifiedReal {
            mid: self.mid.add(&o.mid),
            rad: rad_up(self.rad.add(&o.rad)),
            prec: self.work_prec(o),
        }
        .rounded()
    }

    pub fn sub(&self, o: &CertifiedReal) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &CertifiedReal) -> Self {
        let rad = self
            .mid
            .abs()
            .mul(&o.rad)
            .add(&o.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&o.rad));
        CertifiedReal { mid: self.mid.mul(&o.mid), rad: rad_up(rad), prec: self.work_prec(o) }.rounded()
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        CertifiedReal { mid: self.mid.mul_pow2(k), rad: self.rad.mul_pow2(k), prec: self.prec }
    }

    pub fn sqr(&self) -> Self {
        self.mul(self)
    }

    pub fn recip(&self) -> Result<Self, NumError> {
        let mig = self.mig();
        if mig.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        let prec = self.eff_prec();
        let one = Dyadic::from_i64(1);
        let q = one.div_floor(&self.mid, prec + 2);
        let ulp = one.div_ceil(&self.mid, prec + 2).sub(&q);
        let spread = if self.rad.is_zero() {
            Dyadic::zero()
        } else {
            self.rad.div_ceil(&self.mid.abs().mul(&mig), RAD_BITS)
        };
        Ok(CertifiedReal { mid: q, rad: rad_up(spread.add(&ulp)), prec }.rounded())
    }

    pub fn div(&self, o: &CertifiedReal) -> Result<Self, NumError> {
        if o.is_exact() && self.is_exact() && o.mid.abs() == Dyadic::from_i64(1) {
            return Ok(if o.mid.signum() > 0 { self.clone() } else { self.neg() });
        }
        Ok(self.mul(&o.recip()?))
    }

    pub fn pow_u(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CertifiedReal { prec: self.prec, ..CertifiedReal::one() };
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr();
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

    /// Principal square root of a non-negative enclosure.
    pub fn sqrt(&self) -> Result<Self, NumError> {
        let lo = self.lo();
        let hi = self.hi();
        if hi.signum() < 0 {
            return Err(NumError::NegativeRadicand);
        }
        if lo.signum() < 0 {
            return Err(NumError::IntervalStraddlesZeroBranch);
        }
        let prec = self.eff_prec();
        if self.is_exact() {
            let s = self.mid.sqrt_floor(prec + 2);
            if s.mul(&s) == self.mid {
                return Ok(CertifiedReal { mid: s, rad: Dyadic::zero(), prec: self.prec });
            }
        }
        let a = lo.sqrt_floor(prec + 2);
        let b = hi.sqrt_ceil(prec + 2);
        Ok(CertifiedReal::from_endpoints(&a, &b, prec))
    }

    pub fn sign(&self) -> Sign {
        if self.lo().signum() > 0 {
            Sign::Positive
        } else if self.hi().signum() < 0 {
            Sign::Negative
        } else {
            Sign::ZeroOrUndecided
        }
    }

    /// Natural logarithm of a positive enclosure.
    pub fn ln(&self) -> Result<Self, NumError> {
        if self.lo().signum() <= 0 {
            return Err(NumError::NonPositiveLogArgument);
        }
        let prec = self.eff_prec() + 8;
        let center = ln_dyadic(&self.mid, prec);
        let spread = if self.rad.is_zero() {
            Dyadic::zero()
        } else {
            self.rad.div_ceil(&self.lo(), RAD_BITS)
        };
        Ok(CertifiedReal {
            mid: center.mid,
            rad: rad_up(center.rad.add(&spread)),
            prec: self.eff_prec(),
        }
        .rounded())
    }

    /// Approximate value for diagnostics.
    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn to_rational_mid(&self) -> BigRational {
        self.mid.to_rational()
    }

    /// Decimal midpoint with `digits` significant digits and a radius bound
    /// that also covers the decimal truncation.
    pub fn render(&self, digits: u32) -> (String, String) {
        let (m, err) = self.mid.to_decimal(digits);
        let r = rad_up(self.rad.add(&err)).round_ceil(12);
        let (rs, rerr) = r.to_decimal(4);
        let rs = if rerr.is_zero() {
            rs
        } else {
            // Round the radius text upward in its last digit.
            let up = r.add(&rerr).to_rational() * BigRational::new(BigInt::from(1001), BigInt::from(1000));
            Dyadic::from_rational_ceil(&up, 16).to_decimal(4).0
        };
        (m, rs)
    }
}

/// ln of a positive dyadic as a ball, by range reduction to [1/sqrt2, sqrt2)
/// and the series 2 atanh(z).
fn ln_dyadic(x: &Dyadic, prec: u32) -> CertifiedReal {
    let n = x.bits() as i64;
    let mut k = n + x.exponent();
    // f = x / 2^k lies in [1/2, 1)
    let mut f = CertifiedReal { mid: x.mul_pow2(-k), rad: Dyadic::zero(), prec };
    let threshold = Dyadic::new(BigInt::from(181), -8); // 0.707
    if f.mid < threshold {
        f = f.mul_pow2(1);
        k -= 1;
    }
    let one = CertifiedReal { prec, ..CertifiedReal::one() };
    let z = f.sub(&one).div(&f.add(&one)).expect("f + 1 > 0");
    let lnf = atanh2(&z, prec, 0.18);
    if k == 0 {
        return lnf;
    }
    let third = CertifiedReal::one().div(&CertifiedReal { prec, ..CertifiedReal::from_i64(3) }).expect("nonzero");
    let ln2 = atanh2(&third, prec, 1.0 / 3.0);
    ln2.mul(&CertifiedReal::from_i64(k)).add(&lnf)
}

/// 2 * atanh(z) for |z| <= zmax < 1 with a rigorous tail bound.
fn atanh2(z: &CertifiedReal, prec: u32, zmax: f64) -> CertifiedReal {
    let z2 = z.sqr();
    let mut term = z.clone();
    let mut sum = z.clone();
    let per_term = -(zmax * zmax).log2();
    let n_terms = ((prec as f64 + 8.0) / per_term).ceil() as i64 + 1;
    for i in 1..=n_terms {
        term = term.mul(&z2);
        let t = term.div(&CertifiedReal::from_i64(2 * i + 1)).expect("odd denominators");
        sum = sum.add(&t);
    }
    // Tail: sum_{i>N} |z|^{2i+1}/(2i+1) <= |z|^{2N+3} / (1 - z^2)
    let zb = z.mag();
    let mut tail = zb.clone();
    for _ in 0..(2 * n_terms + 2) {
        tail = tail.mul(&zb).round_ceil(RAD_BITS);
    }
    let denom = Dyadic::from_i64(1).sub(&zb.mul(&zb).round_ceil(RAD_BITS));
    let tail = tail.div_ceil(&denom, RAD_BITS);
    let s = sum.mul_pow2(1);
    CertifiedReal { mid: s.mid, rad: rad_up(s.rad.add(&tail.mul_pow2(1))), prec: s.prec }
}

/// `Some(l)` when `x` encloses exactly one integer `l` with `|l| <= bound`,
/// `None` when it certifiably encloses none, `Undecided` when it is too wide.
pub fn ci_is_integer_near(x: &CertifiedReal, bound: u64) -> Result<Option<i64>, NumError> {
    let quarter = Dyadic::pow2(-2);
    if x.width() >= quarter {
        return Err(NumError::Undecided);
    }
    let lo = x.lo().to_rational().ceil().to_integer();
    let hi = x.hi().to_rational().floor().to_integer();
    if lo > hi {
        return Ok(None);
    }
    let b = BigInt::from(bound);
    if lo.abs() > b {
        return Ok(None);
    }
    let v: i64 = lo.to_string().parse().map_err(|_| NumError::Undecided)?;
    Ok(Some(v))
}

pub fn ci_sqrt(x: &CertifiedReal) -> Result<CertifiedReal, NumError> {
    x.sqrt()
}

pub fn ci_sign(x: &CertifiedReal) -> Sign {
    x.sign()
}

impl fmt::Display for CertifiedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (m, r) = self.render(20);
        write!(f, "[{} ± {}]", m, r)
    }
}

impl From<&BigRational> for CertifiedReal {
    fn from(r: &BigRational) -> Self {
        if r.denom().is_one() || (r.denom() & (r.denom() - BigInt::one())).is_zero() {
            let d = Dyadic::from_rational_floor(r, (r.numer().bits() + r.denom().bits()) as u32 + 2);
            if d.to_rational() == *r {
                return CertifiedReal::exact(d);
            }
        }
        CertifiedReal::from_rational(r, FALLBACK_BITS)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn recip_encloses() {
        let x = CertifiedReal::from_rational(&rat(7, 3), 64);
        let y = x.recip().unwrap();
        assert!(y.contains_rational(&rat(3, 7)));
        assert!(y.width() < Dyadic::pow2(-60));
    }

    #[test]
    fn ln_of_two() {
        let l = CertifiedReal::from_i64(2).with_precision(128).ln().unwrap();
        let reference = 0.6931471805599453f64;
        assert!((l.to_f64() - reference).abs() < 1e-15);
        assert!(l.width() < Dyadic::pow2(-120));
        let l1 = CertifiedReal::from_i64(1).with_precision(64).ln().unwrap();
        assert!(l1.contains_zero());
    }

    #[test]
    fn rendering_covers_value() {
        let x = CertifiedReal::from_rational(&rat(1, 3), 100);
        let (m, r) = x.render(10);
        assert!(m.starts_with("3.333333333e-1"));
        assert!(r.parse::<f64>().unwrap() >= 3.3e-11);
    }
}

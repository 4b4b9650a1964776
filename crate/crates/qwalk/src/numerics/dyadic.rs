//! Exact binary floating values `man * 2^exp` with directed rounding.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { man, exp };
        d.normalize();
        d
    }

    pub fn from_i64(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    pub fn pow2(e: i64) -> Self {
        Dyadic { man: BigInt::one(), exp: e }
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.man.trailing_zeros() {
            if tz > 0 {
                self.man >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Exponent of the most significant bit plus one: `|self| < 2^magnitude()`.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN / 4
        } else {
            self.exp + self.man.bits() as i64
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    pub fn add(&self, o: &Dyadic) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &o.man << (o.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, o: &Dyadic) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dyadic) -> Self {
        Dyadic::new(&self.man * &o.man, self.exp + o.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    pub fn half(&self) -> Self {
        self.mul_pow2(-1)
    }

    /// Largest dyadic with at most `prec` significant bits that is `<= self`.
    pub fn round_floor(&self, prec: u32) -> Self {
        let bits = self.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let m = self.man.div_floor(&pow2(shift));
        Dyadic::new(m, self.exp + shift as i64)
    }

    pub fn round_ceil(&self, prec: u32) -> Self {
        self.neg().round_floor(prec).neg()
    }

    /// Floor of `r` with roughly `prec` significant bits.
    pub fn from_rational_floor(r: &BigRational, prec: u32) -> Self {
        if r.is_zero() {
            return Dyadic::zero();
        }
        let nb = r.numer().bits() as i64;
        let db = r.denom().bits() as i64;
        let k = (prec as i64 + 2 + db - nb).max(0);
        let num = r.numer() << k as u64;
        let m = num.div_floor(r.denom());
        Dyadic::new(m, -k).round_floor(prec.max(1))
    }

    pub fn from_rational_ceil(r: &BigRational, prec: u32) -> Self {
        Dyadic::from_rational_floor(&(-r), prec).neg()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << self.exp as u64)
        } else {
            BigRational::new(self.man.clone(), pow2((-self.exp) as u64))
        }
    }

    /// `self / o` rounded toward minus infinity with about `prec` bits.
    pub fn div_floor(&self, o: &Dyadic, prec: u32) -> Self {
        assert!(!o.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let k = (prec as i64 + 2 + o.bits() as i64 - self.bits() as i64).max(0);
        let num = &self.man << k as u64;
        let q = num.div_floor(&o.man);
        Dyadic::new(q, self.exp - o.exp - k)
    }

    pub fn div_ceil(&self, o: &Dyadic, prec: u32) -> Self {
        self.neg().div_floor(o, prec).neg()
    }

    /// Floor of the square root of a non-negative value.
    pub fn sqrt_floor(&self, prec: u32) -> Self {
        assert!(self.signum() >= 0, "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let (s, e, _) = self.sqrt_parts(prec);
        Dyadic::new(s, e)
    }

    pub fn sqrt_ceil(&self, prec: u32) -> Self {
        assert!(self.signum() >= 0, "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let (s, e, exact) = self.sqrt_parts(prec);
        if exact {
            Dyadic::new(s, e)
        } else {
            Dyadic::new(s + 1, e)
        }
    }

    fn sqrt_parts(&self, prec: u32) -> (BigInt, i64, bool) {
        let want = 2 * (prec as i64 + 2);
        let mut k = (want - self.bits() as i64).max(0);
        if (self.exp - k).rem_euclid(2) != 0 {
            k += 1;
        }
        let m = &self.man << k as u64;
        let s = m.sqrt();
        let exact = &s * &s == m;
        (s, (self.exp - k) / 2, exact)
    }

    /// Approximate conversion for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.bits() as i64;
        let shift = (b - 60).max(0);
        let top = &self.man >> shift as u64;
        let t: f64 = top.to_string().parse().unwrap_or(0.0);
        t * 2f64.powi((self.exp + shift).clamp(-2000, 2000) as i32)
    }

    /// Decimal scientific rendering with `digits` significant digits, truncated.
    /// Returns the text and an upper bound on the rendering error.
    pub fn to_decimal(&self, digits: u32) -> (String, Dyadic) {
        if self.is_zero() {
            return ("0".to_string(), Dyadic::zero());
        }
        let r = self.to_rational();
        let neg = r.is_negative();
        let a = r.abs();
        let approx_log10 = (self.magnitude() as f64 - 1.0) * std::f64::consts::LOG10_2;
        let mut e10 = approx_log10.floor() as i64;
        let pow10 = |e: i64| -> BigRational {
            if e >= 0 {
                BigRational::from_integer(BigInt::from(10).pow(e as u32))
            } else {
                BigRational::new(BigInt::one(), BigInt::from(10).pow((-e) as u32))
            }
        };
        while a >= pow10(e10 + 1) {
            e10 += 1;
        }
        while a < pow10(e10) {
            e10 -= 1;
        }
        let scale = pow10(digits as i64 - 1 - e10);
        let scaled = &a * &scale;
        let int = scaled.floor().to_integer();
        let digits_str = int.to_string();
        let (head, tail) = digits_str.split_at(1);
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push_str(head);
        let tail = tail.trim_end_matches('0');
        if !tail.is_empty() {
            s.push('.');
            s.push_str(tail);
        }
        if e10 != 0 {
            s.push_str(&format!("e{}", e10));
        }
        let err = (scaled - BigRational::from_integer(int)) / scale;
        (s, Dyadic::from_rational_ceil(&err, 8))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.sub(other);
        match d.signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

//! Dense univariate polynomials over a [`Scalar`] field.

use crate::numerics::NumError;
use crate::scalar::{Scalar, ZeroStatus};

/// Coefficients in ascending degree. Leading coefficients that are exactly
/// zero are trimmed; certified coefficients that merely enclose zero are kept.
#[derive(Clone, Debug)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> PartialEq for Poly<F>
where
    F: PartialEq,
{
    fn eq(&self, o: &Self) -> bool {
        self.coeffs == o.coeffs
    }
}

impl<F: Scalar> Default for Poly<F> {
    fn default() -> Self {
        Poly::zero()
    }
}

impl<F: Scalar> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c * s^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    /// `s - r`.
    pub fn linear_root(r: &F) -> Self {
        Poly::new(vec![r.neg(), F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect())
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::constant(F::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by `s^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![F::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly::new(v)
    }

    pub fn deriv(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&F::from_i64(k as i64)))
                .collect(),
        )
    }

    /// `p(c * s)`.
    pub fn dilate(&self, c: &F) -> Self {
        let mut pw = F::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.mul(&pw));
            pw = pw.mul(c);
        }
        Poly::new(out)
    }

    /// Coefficients of `p(r + h)` in powers of `h`, up to `h^(n-1)`.
    pub fn taylor_at(&self, r: &F, n: usize) -> Vec<F> {
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            if work.is_empty() {
                out.push(F::zero());
                continue;
            }
            // synthetic division by (s - r): remainder is the next coefficient
            let mut q = vec![F::zero(); work.len().saturating_sub(1)];
            let mut acc = F::zero();
            for k in (0..work.len()).rev() {
                acc = acc.mul(r).add(&work[k]);
                if k > 0 {
                    q[k - 1] = acc.clone();
                }
            }
            out.push(acc);
            work = q;
        }
        out
    }

    /// Euclidean division; the divisor's leading coefficient must be invertible.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self), NumError> {
        let dd = d.degree().ok_or(NumError::DivisionByZero)?;
        let lead = d.lead().expect("nonzero divisor").clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k].try_div(&lead)?;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k - dd + j] = rem[k - dd + j].sub(&c.mul(dc));
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        // the cancelled leading terms are exact zeros by construction
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Monic gcd over an exact field.
    pub fn gcd(&self, o: &Self) -> Result<Self, NumError> {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            if r.coeffs.iter().any(|c| c.zero_status() == ZeroStatus::Undecided) {
                return Err(NumError::Undecided);
            }
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Result<Self, NumError> {
        match self.lead() {
            None => Ok(Poly::zero()),
            Some(l) => {
                let l = l.clone();
                Ok(Poly::new(self.coeffs.iter().map(|c| c.try_div(&l)).collect::<Result<_, _>>()?))
            }
        }
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

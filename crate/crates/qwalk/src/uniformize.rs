//! Rational parameterization of a genus-zero kernel curve.
//!
//! `x(s) = 4 a2 s / (Rx s^2 - 2 a3 s + Rx)` and
//! `y(s) = 4 b2 L s / (Ry s^2 - 2 b3 L s + Ry L^2)` with `Rx, Ry` the
//! radicals of the residual quadratics and `L = lambda`. The curve
//! involutions pull back to `s -> 1/s` and `s -> q/s`, `q = L^2`.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::kernel::{
    quartic_branch_pair, CurveClassification, CurveKind, KernelError, KernelModel, ProjPoint, RatPoly, StepWeights,
};
use crate::numerics::{refine, Attempt, CertifiedComplex, CertifiedReal, NumError, Precision, Sign};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum UniformizeError {
    #[error("kernel curve is not a canonical genus-zero curve")]
    NotGenusZero,
    #[error("precision exhausted at {0} bits: {1}")]
    PrecisionExhausted(u32, NumError),
    #[error("s encloses a pole of the parameterization")]
    PoleOfMap,
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// The six coefficient polynomials of the residual quadratics in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaBeta {
    pub a2: RatPoly,
    pub a3: RatPoly,
    pub a4: RatPoly,
    pub b2: RatPoly,
    pub b3: RatPoly,
    pub b4: RatPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaBetaValues {
    pub a2: BigRational,
    pub a3: BigRational,
    pub a4: BigRational,
    pub b2: BigRational,
    pub b3: BigRational,
    pub b4: BigRational,
}

fn c(r: BigRational) -> RatPoly {
    Poly::constant(r)
}

fn t_pow(k: usize) -> RatPoly {
    Poly::monomial(BigRational::one(), k)
}

impl AlphaBeta {
    pub fn from_weights(w: &StepWeights) -> Self {
        let d = |i, j| w.get(i, j).clone();
        let two = BigRational::from_integer(2.into());
        let four = BigRational::from_integer(4.into());
        let t = t_pow(1);
        let t2 = t_pow(2);
        let a2 = c(BigRational::one())
            .sub(&t.scale(&(&two * d(0, 0))))
            .add(&t2.scale(&(d(0, 0) * d(0, 0) - &four * d(-1, 1) * d(1, -1))));
        let a3 = t2
            .scale(&(&two * d(1, 0) * d(0, 0) - &four * d(0, 1) * d(1, -1)))
            .sub(&t.scale(&(&two * d(1, 0))));
        let a4 = t2.scale(&(d(1, 0) * d(1, 0) - &four * d(1, 1) * d(1, -1)));
        let b3 = t2
            .scale(&(&two * d(0, 1) * d(0, 0) - &four * d(1, 0) * d(-1, 1)))
            .sub(&t.scale(&(&two * d(0, 1))));
        let b4 = t2.scale(&(d(0, 1) * d(0, 1) - &four * d(1, 1) * d(-1, 1)));
        AlphaBeta { b2: a2.clone(), a2, a3, a4, b3, b4 }
    }

    pub fn eval(&self, t: &BigRational) -> AlphaBetaValues {
        AlphaBetaValues {
            a2: self.a2.eval(t),
            a3: self.a3.eval(t),
            a4: self.a4.eval(t),
            b2: self.b2.eval(t),
            b3: self.b3.eval(t),
            b4: self.b4.eval(t),
        }
    }
}

/// A parameter value on the projective line.
#[derive(Clone, Debug)]
pub enum SParam {
    Finite(CertifiedComplex),
    Infinity,
}

#[derive(Clone, Debug)]
pub struct Uniformization {
    pub weights: StepWeights,
    pub t_value: BigRational,
    pub ab: AlphaBeta,
    pub ab_values: AlphaBetaValues,
    /// Working precision that resolved every branch decision.
    pub bits: u32,
    pub sqrt_ax: CertifiedComplex,
    pub sqrt_by: CertifiedComplex,
    /// Set when `a4 = 0` (resp. `b4 = 0`) and the radical is taken as
    /// `a3` (resp. `b3`) so that `x(1)` lands on `[1:0]`.
    pub radical_from_linear: (bool, bool),
    pub lambda: CertifiedComplex,
    /// Normalized so that `|q| > 1`.
    pub q: CertifiedReal,
    /// Whether the closed-form ratio had to be inverted to reach `|q| > 1`.
    pub q_inverted: bool,
    pub x_num: Poly<CertifiedComplex>,
    pub x_den: Poly<CertifiedComplex>,
    pub y_num: Poly<CertifiedComplex>,
    pub y_den: Poly<CertifiedComplex>,
    pub branch_x: [ProjPoint; 4],
    pub branch_y: [ProjPoint; 4],
}

fn cc(r: &BigRational, prec: u32) -> CertifiedComplex {
    CertifiedComplex::from_rational(r, prec)
}

fn num_refinable(e: &NumError) -> bool {
    !matches!(e, NumError::NegativeRadicand)
}

/// `(-1 + d00 t - S) / (-1 + d00 t + S)` with
/// `S = sqrt((1 - d00 t)^2 - 4 d(1,-1) d(-1,1) t^2)`.
pub fn q_formula(w: &StepWeights, t: &BigRational, prec: Precision) -> Result<CertifiedReal, UniformizeError> {
    let (v, _) = refine(prec, |bits| match q_formula_at(w, t, bits) {
        Ok(v) => Attempt::Done(v),
        Err(e) if num_refinable(&e) => Attempt::Refine(UniformizeError::PrecisionExhausted(bits, e)),
        Err(e) => Attempt::Fail(UniformizeError::PrecisionExhausted(bits, e)),
    })?;
    Ok(v)
}

fn q_formula_at(w: &StepWeights, t: &BigRational, bits: u32) -> Result<CertifiedReal, NumError> {
    let d00 = w.get(0, 0);
    let m = BigRational::one() - d00 * t;
    let rad = &m * &m - BigRational::from_integer(4.into()) * w.get(1, -1) * w.get(-1, 1) * t * t;
    let s = CertifiedReal::from_rational(&rad, bits).sqrt()?;
    let mm = CertifiedReal::from_rational(&-m, bits);
    mm.sub(&s).div(&mm.add(&s))
}

/// Slopes `y/x` of the two branches through the node, `+` radical first.
fn node_slopes(w: &StepWeights, t: &BigRational, bits: u32) -> Result<[CertifiedComplex; 2], NumError> {
    let m = BigRational::one() - w.get(0, 0) * t;
    let rad = &m * &m - BigRational::from_integer(4.into()) * w.get(1, -1) * w.get(-1, 1) * t * t;
    let s = cc(&rad, bits).sqrt()?;
    let den = cc(&(BigRational::from_integer(2.into()) * t * w.get(-1, 1)), bits);
    let mc = cc(&m, bits);
    Ok([mc.add(&s).div(&den)?, mc.sub(&s).div(&den)?])
}

/// Radical of `c3^2 - 4 c2 c4`, or `c3` itself when `c4 = 0`.
fn residual_radical(c2: &BigRational, c3: &BigRational, c4: &BigRational, bits: u32) -> Result<(CertifiedComplex, bool), NumError> {
    if c4.is_zero() {
        return Ok((cc(c3, bits), true));
    }
    let rad = c3 * c3 - BigRational::from_integer(4.into()) * c2 * c4;
    Ok((cc(&rad, bits).sqrt()?, false))
}

pub fn build_uniformization(
    km: &KernelModel,
    cls: &CurveClassification,
    prec: Precision,
) -> Result<Uniformization, UniformizeError> {
    if cls.kind != CurveKind::GenusZero {
        return Err(UniformizeError::NotGenusZero);
    }
    let (u, _) = refine(prec, |bits| match build_at(km, bits) {
        Ok(u) => Attempt::Done(u),
        Err(UniformizeError::PrecisionExhausted(b, e)) if num_refinable(&e) => {
            Attempt::Refine(UniformizeError::PrecisionExhausted(b, e))
        }
        Err(e) => Attempt::Fail(e),
    })?;
    Ok(u)
}

fn build_at(km: &KernelModel, bits: u32) -> Result<Uniformization, UniformizeError> {
    let w = &km.weights;
    let t = &km.t_value;
    let ex = |e: NumError| UniformizeError::PrecisionExhausted(bits, e);
    let ab = AlphaBeta::from_weights(w);
    let v = ab.eval(t);
    let (rx, lin_x) = residual_radical(&v.a2, &v.a3, &v.a4, bits).map_err(ex)?;
    let (ry, lin_y) = residual_radical(&v.b2, &v.b3, &v.b4, bits).map_err(ex)?;

    // lambda = slope * Ry / Rx on the branch giving |lambda| > 1
    let slopes = node_slopes(w, t, bits).map_err(ex)?;
    let one = CertifiedReal::one();
    let mut lambda = None;
    for r in &slopes {
        let l = r.mul(&ry).div(&rx).map_err(ex)?;
        if l.norm_sqr().sub(&one).sign() == Sign::Positive {
            lambda = Some(l);
            break;
        }
    }
    let lambda = lambda.ok_or(ex(NumError::Undecided))?;

    let qf = q_formula_at(w, t, bits).map_err(ex)?;
    let big = qf.mul(&qf).sub(&one).sign();
    let (q, q_inverted) = match big {
        Sign::Positive => (qf, false),
        Sign::Negative => (qf.recip().map_err(ex)?, true),
        Sign::ZeroOrUndecided => return Err(ex(NumError::Undecided)),
    };
    let l2 = lambda.mul(&lambda);
    if !l2.overlaps(&CertifiedComplex::real(q.clone())) {
        return Err(UniformizeError::Inconsistent(format!("lambda^2 = {} but q = {}", l2, q)));
    }

    let four = CertifiedComplex::from_i64(4);
    let two = CertifiedComplex::from_i64(2);
    let x_num = Poly::monomial(four.mul(&cc(&v.a2, bits)), 1);
    let x_den = Poly::new(vec![rx.clone(), two.mul(&cc(&v.a3, bits)).neg(), rx.clone()]);
    let y_num = Poly::monomial(four.mul(&cc(&v.b2, bits)).mul(&lambda), 1);
    let y_den = Poly::new(vec![
        ry.mul(&lambda).mul(&lambda),
        two.mul(&cc(&v.b3, bits)).mul(&lambda).neg(),
        ry.clone(),
    ]);

    let (a3, a4) = quartic_branch_pair(&v.a2, &v.a3, &v.a4, bits).map_err(ex)?;
    let (b3, b4) = quartic_branch_pair(&v.b2, &v.b3, &v.b4, bits).map_err(ex)?;

    Ok(Uniformization {
        weights: w.clone(),
        t_value: t.clone(),
        ab,
        ab_values: v,
        bits,
        sqrt_ax: rx,
        sqrt_by: ry,
        radical_from_linear: (lin_x, lin_y),
        lambda,
        q,
        q_inverted,
        x_num,
        x_den,
        y_num,
        y_den,
        branch_x: [ProjPoint::zero(), ProjPoint::zero(), a3, a4],
        branch_y: [ProjPoint::zero(), ProjPoint::zero(), b3, b4],
    })
}

impl Uniformization {
    pub fn q_complex(&self) -> CertifiedComplex {
        CertifiedComplex::real(self.q.clone())
    }

    /// `x(s)` as a projective point; never fails.
    pub fn x_proj(&self, s: &SParam) -> ProjPoint {
        match s {
            SParam::Infinity => ProjPoint::zero(),
            SParam::Finite(s) => ProjPoint { x0: self.x_num.eval(s), x1: self.x_den.eval(s) },
        }
    }

    pub fn y_proj(&self, s: &SParam) -> ProjPoint {
        match s {
            SParam::Infinity => ProjPoint::zero(),
            SParam::Finite(s) => ProjPoint { x0: self.y_num.eval(s), x1: self.y_den.eval(s) },
        }
    }

    pub fn x(&self, s: &CertifiedComplex) -> Result<CertifiedComplex, UniformizeError> {
        self.x_num.eval(s).div(&self.x_den.eval(s)).map_err(|_| UniformizeError::PoleOfMap)
    }

    pub fn y(&self, s: &CertifiedComplex) -> Result<CertifiedComplex, UniformizeError> {
        self.y_num.eval(s).div(&self.y_den.eval(s)).map_err(|_| UniformizeError::PoleOfMap)
    }

    /// `s = 0` and `s = infinity` first, then `1, -1, lambda, -lambda`.
    pub fn distinguished_points(&self) -> [SParam; 6] {
        [
            SParam::Finite(CertifiedComplex::zero()),
            SParam::Infinity,
            SParam::Finite(CertifiedComplex::one()),
            SParam::Finite(CertifiedComplex::from_i64(-1)),
            SParam::Finite(self.lambda.clone()),
            SParam::Finite(self.lambda.neg()),
        ]
    }

    /// Kernel `K(x, y, t)` evaluated on certified arguments.
    pub fn kernel_at(&self, x: &CertifiedComplex, y: &CertifiedComplex) -> Result<CertifiedComplex, NumError> {
        let bits = self.bits;
        let t = cc(&self.t_value, bits);
        let mut s = CertifiedComplex::zero();
        for i in -1..=1 {
            for j in -1..=1 {
                let d = self.weights.get(i, j);
                if !d.is_zero() {
                    s = s.add(&cc(d, bits).mul(&x.pow_i(i as i64)?).mul(&y.pow_i(j as i64)?));
                }
            }
        }
        Ok(x.mul(y).mul(&CertifiedComplex::one().sub(&t.mul(&s))))
    }

    pub fn iota1(&self, s: &CertifiedComplex) -> Result<CertifiedComplex, NumError> {
        s.recip()
    }

    pub fn iota2(&self, s: &CertifiedComplex) -> Result<CertifiedComplex, NumError> {
        self.q_complex().div(s)
    }

    pub fn sigma(&self, s: &CertifiedComplex) -> CertifiedComplex {
        self.q_complex().mul(s)
    }
}

/// Evaluate `(x(s), y(s))`; `s = infinity` maps to the node `(0, 0)`.
pub fn eval_phi(u: &Uniformization, s: &SParam) -> Result<(CertifiedComplex, CertifiedComplex), UniformizeError> {
    match s {
        SParam::Infinity => Ok((CertifiedComplex::zero(), CertifiedComplex::zero())),
        SParam::Finite(s) => Ok((u.x(s)?, u.y(s)?)),
    }
}

/// Ratios `y(1/s) / y(s)` at `s = 10^-k` and their polynomial extrapolation
/// to `s = 0`, which tends to `lambda^2`.
#[derive(Clone, Debug)]
pub struct QLimit {
    pub exponents: Vec<u32>,
    pub ratios: Vec<CertifiedComplex>,
    pub extrapolated: CertifiedComplex,
}

pub fn q_limit(u: &Uniformization, exponents: &[u32]) -> Result<QLimit, UniformizeError> {
    let bits = u.bits;
    let ex = |e: NumError| UniformizeError::PrecisionExhausted(bits, e);
    let nodes: Vec<CertifiedComplex> = exponents
        .iter()
        .map(|&k| cc(&BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(k)), bits))
        .collect();
    let mut ratios = Vec::with_capacity(nodes.len());
    for h in &nodes {
        let far = u.y(&h.recip().map_err(ex)?)?;
        ratios.push(far.div(&u.y(h)?).map_err(ex)?);
    }
    // Neville's scheme evaluated at 0
    let mut p = ratios.clone();
    let n = p.len();
    for m in 1..n {
        for i in 0..(n - m) {
            let (hi, hj) = (&nodes[i], &nodes[i + m]);
            p[i] = hi.mul(&p[i + 1]).sub(&hj.mul(&p[i])).div(&hi.sub(hj)).map_err(ex)?;
        }
    }
    Ok(QLimit { exponents: exponents.to_vec(), ratios, extrapolated: p[0].clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{build_kernel, genus_classify, Dir};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn alpha_matches_discriminant() {
        let w = StepWeights::uniform(&[Dir::NW, Dir::N, Dir::NE, Dir::E, Dir::SE]);
        let km = build_kernel(&w, &rat(1, 3)).unwrap();
        let ab = AlphaBeta::from_weights(&w);
        assert_eq!(km.disc_x[2], ab.a2);
        assert_eq!(km.disc_x[3], ab.a3);
        assert_eq!(km.disc_x[4], ab.a4);
        assert_eq!(km.disc_y[2], ab.b2);
        assert_eq!(km.disc_y[3], ab.b3);
        assert_eq!(km.disc_y[4], ab.b4);
    }

    #[test]
    fn projection_model_q() {
        let w = StepWeights::from_dirs(&[(Dir::NW, rat(1, 2)), (Dir::N, rat(1, 4)), (Dir::SE, rat(1, 4))]).unwrap();
        let km = build_kernel(&w, &rat(1, 2)).unwrap();
        let cls = genus_classify(&km, 128).unwrap();
        let u = build_uniformization(&km, &cls, Precision::default()).unwrap();
        assert!((u.q.to_f64() - 29.96).abs() < 0.01, "{}", u.q);
    }
}

//! Exact enumeration of `q(i,j,k)`, the number (weight) of walks of length
//! `k` from the origin to `(i,j)` staying in the quarter plane, and checks of
//! the kernel functional equation and of the pulled-back q-difference
//! equations.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::kernel::{KernelModel, StepWeights};
use crate::numerics::{CertifiedComplex, CertifiedReal, NumError, Sign};
use crate::transcendence::TelescoperRHS;
use crate::uniformize::{UniformizeError, Uniformization};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SeriesError {
    #[error("functional equation residual has {count} nonzero terms, first at x^{}y^{}t^{}", first.0, first.1, first.2)]
    ResidualNonzero { count: usize, first: (u32, u32, u32) },
    #[error("sample s = {0} is outside the convergence domain")]
    SampleOutsideDomain(String),
    #[error(transparent)]
    Uniformize(#[from] UniformizeError),
    #[error(transparent)]
    Numeric(#[from] NumError),
}

/// Coefficients `q(i,j,k)` for `k <= order`; layer `k` is a `(k+1) x (k+1)`
/// grid since both coordinates move by at most one per step.
#[derive(Clone, Debug)]
pub struct SeriesTruncation {
    pub order: usize,
    pub weights: StepWeights,
    layers: Vec<Vec<Vec<BigRational>>>,
}

impl SeriesTruncation {
    pub fn coeff(&self, i: i64, j: i64, k: usize) -> BigRational {
        if k > self.order || i < 0 || j < 0 || i as usize > k || j as usize > k {
            return BigRational::zero();
        }
        self.layers[k][i as usize][j as usize].clone()
    }

    /// Total weight of length-`k` walks.
    pub fn layer_mass(&self, k: usize) -> BigRational {
        self.layers[k].iter().flatten().sum()
    }

    /// Nonzero `(i, j, k, q(i,j,k))`.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, BigRational)> {
        let mut out = Vec::new();
        for (k, layer) in self.layers.iter().enumerate() {
            for (i, row) in layer.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn full(&self) -> TriPoly {
        let mut p = TriPoly::default();
        for (i, j, k, c) in self.nonzero() {
            p.add_term((i as u32, j as u32, k as u32), c);
        }
        p
    }

    /// `Q(x,0,t)` as a trivariate polynomial.
    pub fn section_x(&self) -> TriPoly {
        self.full().filter(|(_, j, _)| j == 0)
    }

    pub fn section_y(&self) -> TriPoly {
        self.full().filter(|(i, _, _)| i == 0)
    }

    /// `F1(x,t) = -K(x,0,t) Q(x,0,t) = t sum_i d(i,-1) x^(i+1) Q(x,0,t)`.
    pub fn f1(&self) -> TriPoly {
        let mut kx = TriPoly::default();
        for i in -1..=1 {
            kx.add_term(((i + 1) as u32, 0, 1), self.weights.get(i, -1).clone());
        }
        kx.mul(&self.section_x())
    }

    pub fn f2(&self) -> TriPoly {
        let mut ky = TriPoly::default();
        for j in -1..=1 {
            ky.add_term((0, (j + 1) as u32, 1), self.weights.get(-1, j).clone());
        }
        ky.mul(&self.section_y())
    }
}

pub fn enumerate(w: &StepWeights, order: usize) -> SeriesTruncation {
    let support = w.support();
    let mut layers: Vec<Vec<Vec<BigRational>>> = vec![vec![vec![BigRational::one()]]];
    for k in 0..order {
        let prev = &layers[k];
        let n = k + 2;
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for (i, row) in prev.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &(a, b) in &support {
                    let (ni, nj) = (i as i64 + a as i64, j as i64 + b as i64);
                    if ni >= 0 && nj >= 0 {
                        next[ni as usize][nj as usize] += c * w.get(a, b);
                    }
                }
            }
        }
        layers.push(next);
    }
    SeriesTruncation { order, weights: w.clone(), layers }
}

/// Sparse polynomial in `x, y, t` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TriPoly(BTreeMap<(u32, u32, u32), BigRational>);

impl TriPoly {
    pub fn add_term(&mut self, e: (u32, u32, u32), c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32, u32), &BigRational)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn filter(&self, keep: impl Fn((u32, u32, u32)) -> bool) -> TriPoly {
        TriPoly(self.0.iter().filter(|(e, _)| keep(**e)).map(|(e, c)| (*e, c.clone())).collect())
    }

    /// Drop terms of t-degree above `k`.
    pub fn truncate_t(&self, k: u32) -> TriPoly {
        self.filter(|(_, _, d)| d <= k)
    }

    pub fn add(&self, o: &TriPoly) -> TriPoly {
        let mut r = self.clone();
        for (e, c) in &o.0 {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &TriPoly) -> TriPoly {
        let mut r = self.clone();
        for (e, c) in &o.0 {
            r.add_term(*e, -c.clone());
        }
        r
    }

    pub fn mul(&self, o: &TriPoly) -> TriPoly {
        let mut r = TriPoly::default();
        for (a, c) in &self.0 {
            for (b, d) in &o.0 {
                r.add_term((a.0 + b.0, a.1 + b.1, a.2 + b.2), c * d);
            }
        }
        r
    }

    /// Evaluate at certified points.
    pub fn eval(&self, x: &CertifiedComplex, y: &CertifiedComplex, t: &CertifiedComplex, bits: u32) -> CertifiedComplex {
        let mut acc = CertifiedComplex::zero();
        for ((i, j, k), c) in &self.0 {
            let term = CertifiedComplex::from_rational(c, bits)
                .mul(&x.pow_u(*i as u64))
                .mul(&y.pow_u(*j as u64))
                .mul(&t.pow_u(*k as u64));
            acc = acc.add(&term);
        }
        acc
    }
}

/// `K(x,y,t) = xy - t sum d(i,j) x^(i+1) y^(j+1)`, including the `(0,0)` step.
pub fn kernel_poly(w: &StepWeights) -> TriPoly {
    let mut k = TriPoly::default();
    k.add_term((1, 1, 0), BigRational::one());
    for (i, j) in w.support() {
        k.add_term(((i + 1) as u32, (j + 1) as u32, 1), -w.get(i, j).clone());
    }
    k
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctionalEquationReport {
    pub order: usize,
    /// Terms of `K Q - (xy - F1 - F2 + t d(-1,-1) Q(0,0,t))` up to `t^order`.
    pub residual_terms: usize,
    pub sw_term_present: bool,
}

/// Exact check of `K Q = xy - F1 - F2 + t d(-1,-1) Q(0,0,t)` mod `t^(K+1)`.
pub fn check_functional_equation(
    st: &SeriesTruncation,
    km: &KernelModel,
) -> Result<FunctionalEquationReport, SeriesError> {
    let w = &km.weights;
    let k = st.order as u32;
    let lhs = kernel_poly(w).mul(&st.full()).truncate_t(k);
    let mut rhs = TriPoly::default();
    rhs.add_term((1, 1, 0), BigRational::one());
    rhs = rhs.sub(&st.f1()).sub(&st.f2());
    let sw = w.get(-1, -1);
    if !sw.is_zero() {
        let q00 = st.full().filter(|(i, j, _)| i == 0 && j == 0);
        let mut tw = TriPoly::default();
        tw.add_term((0, 0, 1), sw.clone());
        rhs = rhs.add(&tw.mul(&q00));
    }
    let res = lhs.sub(&rhs.truncate_t(k));
    if let Some((e, _)) = res.terms().next() {
        return Err(SeriesError::ResidualNonzero { count: res.len(), first: *e });
    }
    Ok(FunctionalEquationReport { order: st.order, residual_terms: 0, sw_term_present: !sw.is_zero() })
}

#[derive(Clone, Debug)]
pub struct QDiffSample {
    pub s: CertifiedComplex,
    /// `F1(x(qs)) - F1(x(s)) - b1(s)` with truncated `F1`.
    pub residual1: CertifiedComplex,
    /// `F2(y(qs)) - F2(y(s)) - b2(s)`.
    pub residual2: CertifiedComplex,
    /// Certified upper bounds of the residual moduli.
    pub abs1: CertifiedReal,
    pub abs2: CertifiedReal,
}

#[derive(Clone, Debug)]
pub struct QDiffReport {
    pub order: usize,
    /// `4 t^(K+1) / (1 - t)`.
    pub bound: CertifiedReal,
    pub samples: Vec<QDiffSample>,
}

impl QDiffReport {
    pub fn within_bound(&self) -> bool {
        self.samples.iter().all(|s| {
            s.abs1.hi().sub(&self.bound.lo()).signum() <= 0 && s.abs2.hi().sub(&self.bound.lo()).signum() <= 0
        })
    }
}

fn inside_unit_disc(z: &CertifiedComplex) -> bool {
    z.norm_sqr().sub(&CertifiedReal::one()).sign() == Sign::Negative
}

fn eval_univariate(p: &TriPoly, z: &CertifiedComplex, t: &CertifiedComplex, bits: u32, in_x: bool) -> CertifiedComplex {
    let zero = CertifiedComplex::zero();
    if in_x {
        p.eval(z, &zero, t, bits)
    } else {
        p.eval(&zero, z, t, bits)
    }
}

/// Sample points of modulus `10^-2` in several directions, divided by `q`
/// until both evaluation sites lie in the domain.
pub fn default_samples(u: &Uniformization) -> Vec<CertifiedComplex> {
    let bits = u.bits;
    let r = |n: i64, d: i64| CertifiedReal::from_rational(&BigRational::new(n.into(), d.into()), bits);
    let dirs = [(1, 0, 1), (3, 4, 5), (-5, 12, 13), (-1, 0, 1), (8, -15, 17)];
    let q = u.q_complex();
    let mut out = Vec::new();
    for (a, b, c) in dirs {
        let mut s = CertifiedComplex::new(r(a, 100 * c), r(b, 100 * c));
        for _ in 0..4 {
            if sample_in_domain(u, &s) {
                out.push(s);
                break;
            }
            match s.div(&q) {
                Ok(v) => s = v,
                Err(_) => break,
            }
        }
    }
    out
}

fn sample_in_domain(u: &Uniformization, s: &CertifiedComplex) -> bool {
    let qs = u.sigma(s);
    [u.x(s), u.y(s), u.x(&qs), u.y(&qs)].iter().all(|v| matches!(v, Ok(z) if inside_unit_disc(z)))
}

/// Check the q-difference equations `F1(x(qs)) - F1(x(s)) = b1(s)` and
/// `F2(y(qs)) - F2(y(s)) = b2(s)` with truncated sections.
pub fn check_qdiff_equation(
    st: &SeriesTruncation,
    u: &Uniformization,
    rhs: &TelescoperRHS,
    samples: &[CertifiedComplex],
) -> Result<QDiffReport, SeriesError> {
    let bits = u.bits;
    let t = CertifiedComplex::from_rational(&u.t_value, bits);
    let f1 = st.f1();
    let f2 = st.f2();
    let mut out = Vec::new();
    for s in samples {
        if !sample_in_domain(u, s) {
            return Err(SeriesError::SampleOutsideDomain(s.to_string()));
        }
        let qs = u.sigma(s);
        let (x0, x1) = (u.x(s)?, u.x(&qs)?);
        let (y0, y1) = (u.y(s)?, u.y(&qs)?);
        let b1 = rhs.b1.eval(s)?;
        let b2 = rhs.b2.eval(s)?;
        let r1 = eval_univariate(&f1, &x1, &t, bits, true).sub(&eval_univariate(&f1, &x0, &t, bits, true)).sub(&b1);
        let r2 = eval_univariate(&f2, &y1, &t, bits, false).sub(&eval_univariate(&f2, &y0, &t, bits, false)).sub(&b2);
        let abs1 = r1.abs()?;
        let abs2 = r2.abs()?;
        out.push(QDiffSample { s: s.clone(), residual1: r1, residual2: r2, abs1, abs2 });
    }
    let tr = CertifiedReal::from_rational(&u.t_value, bits);
    let bound = CertifiedReal::from_i64(4)
        .mul(&tr.pow_u(st.order as u64 + 1))
        .div(&CertifiedReal::one().sub(&tr))?;
    Ok(QDiffReport { order: st.order, bound, samples: out })
}

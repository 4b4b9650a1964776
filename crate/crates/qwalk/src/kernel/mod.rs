//! Kernel polynomial, kernel curve and its discriminants.
//!
//! Everything here is exact over Q[t] except the branch-point radicals,
//! which are enclosed with certified numerics at the chosen value of `t`.
//! Zero tests that depend on `t` are done with `t` symbolic.

mod doublezero;
mod weights;

pub use doublezero::{
    configuration_supports, verify_double_zero_classification, DoubleZeroReport, CONFIGURATIONS,
};
pub use weights::{Dir, StepWeights};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{CertifiedComplex, NumError};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum KernelError {
    #[error("t must lie strictly between 0 and 1, got {0}")]
    InvalidT(String),
    #[error("invalid weights: {0}")]
    InvalidWeight(String),
    #[error("walk is degenerate (case {0})")]
    DegenerateInput(u8),
    #[error("numeric failure: {0}")]
    Numeric(#[from] NumError),
}

pub type RatPoly = Poly<BigRational>;

/// A binary form `sum_k c[k] x0^k x1^(deg-k)` with coefficients in Q[t].
pub type Form = Vec<RatPoly>;

fn rp(c: &BigRational) -> RatPoly {
    Poly::constant(c.clone())
}

/// `c * t^k` as a polynomial in t.
fn t_mono(c: &BigRational, k: usize) -> RatPoly {
    Poly::monomial(c.clone(), k)
}

fn form_mul(a: &Form, b: &Form) -> Form {
    let mut out = vec![RatPoly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn form_sub(a: &Form, b: &Form) -> Form {
    (0..a.len().max(b.len()))
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_else(RatPoly::zero);
            let y = b.get(k).cloned().unwrap_or_else(RatPoly::zero);
            x.sub(&y)
        })
        .collect()
}

fn form_scale(a: &Form, c: &RatPoly) -> Form {
    a.iter().map(|x| x.mul(c)).collect()
}

#[derive(Clone, Debug)]
pub struct KernelModel {
    pub weights: StepWeights,
    pub t_value: BigRational,
    /// `k_coeffs[i][j]` multiplies `x0^i x1^(2-i) y0^j y1^(2-j)` in the
    /// bihomogeneous kernel.
    pub k_coeffs: [[RatPoly; 3]; 3],
    /// `x A_{-1}, x A_0, x A_1` as polynomials in x (ascending).
    pub a_polys: [Vec<BigRational>; 3],
    /// `y B_{-1}, y B_0, y B_1` as polynomials in y (ascending).
    pub b_polys: [Vec<BigRational>; 3],
    pub disc_x: Form,
    pub disc_y: Form,
}

pub fn build_kernel(w: &StepWeights, t: &BigRational) -> Result<KernelModel, KernelError> {
    if *t <= BigRational::zero() || *t >= BigRational::one() {
        return Err(KernelError::InvalidT(t.to_string()));
    }
    let mut k_coeffs: [[RatPoly; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let d = w.get(i as i32 - 1, j as i32 - 1);
            let mut c = t_mono(&-d, 1);
            if i == 1 && j == 1 {
                c = c.add(&rp(&BigRational::one()));
            }
            k_coeffs[i][j] = c;
        }
    }
    let a_polys = [-1, 0, 1].map(|j| (-1..=1).map(|i| w.get(i, j).clone()).collect());
    let b_polys = [-1, 0, 1].map(|i| (-1..=1).map(|j| w.get(i, j).clone()).collect());
    let (disc_x, disc_y) = closed_form_discriminants(w);
    Ok(KernelModel { weights: w.clone(), t_value: t.clone(), k_coeffs, a_polys, b_polys, disc_x, disc_y })
}

/// The displayed discriminant formulas, written as
/// `(t L - x0 x1)^2 - 4 t^2 U D` with quadratic forms `L, U, D`.
fn closed_form_discriminants(w: &StepWeights) -> (Form, Form) {
    let quad = |a: &BigRational, b: &BigRational, c: &BigRational| -> Form { vec![rp(a), rp(b), rp(c)] };
    let t1 = t_mono(&BigRational::one(), 1);
    let t2 = t_mono(&BigRational::from_integer(4.into()), 2);
    let build = |l: Form, u: Form, d: Form| -> Form {
        let mut tl = form_scale(&l, &t1);
        tl[1] = tl[1].sub(&rp(&BigRational::one()));
        form_sub(&form_mul(&tl, &tl), &form_scale(&form_mul(&u, &d), &t2))
    };
    let g = |i, j| w.get(i, j);
    // forms in (x0, x1): coefficient index is the power of x0
    let dx = build(
        quad(g(-1, 0), g(0, 0), g(1, 0)),
        quad(g(-1, 1), g(0, 1), g(1, 1)),
        quad(g(-1, -1), g(0, -1), g(1, -1)),
    );
    let dy = build(
        quad(g(0, -1), g(0, 0), g(0, 1)),
        quad(g(1, -1), g(1, 0), g(1, 1)),
        quad(g(-1, -1), g(-1, 0), g(-1, 1)),
    );
    (dx, dy)
}

impl KernelModel {
    /// `K(x,y,t) = xy(1 - t S(x,y))` evaluated exactly (x, y nonzero).
    pub fn eval_k(&self, x: &BigRational, y: &BigRational, t: &BigRational) -> BigRational {
        let mut s = BigRational::zero();
        for i in -1..=1 {
            for j in -1..=1 {
                let d = self.weights.get(i, j);
                if !d.is_zero() {
                    s += d * pow_i(x, i) * pow_i(y, j);
                }
            }
        }
        x * y * (BigRational::one() - t * s)
    }

    /// The bihomogeneous kernel at `(x0, x1, y0, y1, t)`.
    pub fn eval_kbar(
        &self,
        x0: &BigRational,
        x1: &BigRational,
        y0: &BigRational,
        y1: &BigRational,
        t: &BigRational,
    ) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..3 {
            for j in 0..3 {
                let c = self.k_coeffs[i][j].eval(t);
                acc += c * x0.pow(i as i32) * x1.pow(2 - i as i32) * y0.pow(j as i32) * y1.pow(2 - j as i32);
            }
        }
        acc
    }

    /// `K̄` as a quadratic form in `(y0, y1)`: entry `j` multiplies
    /// `y0^j y1^(2-j)` and is itself a form in `(x0, x1)`.
    pub fn y_quadratic(&self) -> [Form; 3] {
        [0, 1, 2].map(|j| (0..3).map(|i| self.k_coeffs[i][j].clone()).collect())
    }

    /// `K̄` as a quadratic form in `(x0, x1)`.
    pub fn x_quadratic(&self) -> [Form; 3] {
        [0, 1, 2].map(|i| (0..3).map(|j| self.k_coeffs[i][j].clone()).collect())
    }
}

fn pow_i(x: &BigRational, e: i32) -> BigRational {
    if e >= 0 {
        x.pow(e)
    } else {
        BigRational::one() / x.pow(-e)
    }
}

/// Discriminants computed generically as `b^2 - 4ac` of the kernel viewed as
/// a quadratic in the other variable.
pub fn generic_discriminants(km: &KernelModel) -> (Form, Form) {
    let four = rp(&BigRational::from_integer(4.into()));
    let disc = |q: [Form; 3]| form_sub(&form_mul(&q[1], &q[1]), &form_scale(&form_mul(&q[2], &q[0]), &four));
    (disc(km.y_quadratic()), disc(km.x_quadratic()))
}

pub fn discriminants(km: &KernelModel) -> (Form, Form) {
    (km.disc_x.clone(), km.disc_y.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Degeneracy {
    NonDegenerate,
    Degenerate(u8),
}

pub fn classify_degeneracy(w: &StepWeights) -> Degeneracy {
    let row_empty = |i: i32| (-1..=1).all(|j| !w.has(i, j));
    let col_empty = |j: i32| (-1..=1).all(|i| !w.has(i, j));
    if row_empty(-1) || row_empty(1) {
        return Degeneracy::Degenerate(1);
    }
    if col_empty(-1) || col_empty(1) {
        return Degeneracy::Degenerate(2);
    }
    let supp = w.support();
    let diag = [(1, 1), (0, 0), (-1, -1)];
    let anti = [(-1, 1), (0, 0), (1, -1)];
    if supp.iter().all(|p| diag.contains(p)) || supp.iter().all(|p| anti.contains(p)) {
        return Degeneracy::Degenerate(3);
    }
    Degeneracy::NonDegenerate
}

/// Where a binary quartic has repeated roots in P^1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleZero {
    pub identically_zero: bool,
    /// The root `[0:1]` has multiplicity at least 2.
    pub at_origin: bool,
    /// The root `[1:0]` has multiplicity at least 2.
    pub at_infinity: bool,
    /// Some repeated root beyond a single double root at `[0:1]` or `[1:0]`.
    pub other: bool,
}

impl DoubleZero {
    pub fn present(&self) -> bool {
        self.identically_zero || self.at_origin || self.at_infinity || self.other
    }
}

/// Discriminant of the binary quartic `sum c[k] x0^k x1^(4-k)` over Q[t].
/// It vanishes identically iff the form has a repeated root in P^1.
pub fn quartic_discriminant(form: &Form) -> RatPoly {
    let c = |k: usize| form.get(k).cloned().unwrap_or_else(RatPoly::zero);
    let (a, b, cc, d, e) = (c(4), c(3), c(2), c(1), c(0));
    let terms: [(i64, [u32; 5]); 16] = [
        (256, [3, 0, 0, 0, 3]),
        (-192, [2, 1, 0, 1, 2]),
        (-128, [2, 0, 2, 0, 2]),
        (144, [2, 0, 1, 2, 1]),
        (-27, [2, 0, 0, 4, 0]),
        (144, [1, 2, 1, 0, 2]),
        (-6, [1, 2, 0, 2, 1]),
        (-80, [1, 1, 2, 1, 1]),
        (18, [1, 1, 1, 3, 0]),
        (16, [1, 0, 4, 0, 1]),
        (-4, [1, 0, 3, 2, 0]),
        (-27, [0, 4, 0, 0, 2]),
        (18, [0, 3, 1, 1, 1]),
        (-4, [0, 3, 0, 3, 0]),
        (-4, [0, 2, 3, 0, 1]),
        (1, [0, 2, 2, 2, 0]),
    ];
    let vars = [&a, &b, &cc, &d, &e];
    let mut acc = RatPoly::zero();
    for (k, ex) in terms {
        let mut m = Poly::constant(BigRational::from_integer(k.into()));
        for (v, n) in vars.iter().zip(ex) {
            m = m.mul(&v.pow(n));
        }
        acc = acc.add(&m);
    }
    acc
}

fn quadratic_degenerate(a: &RatPoly, b: &RatPoly, c: &RatPoly) -> bool {
    // a X^2 + b X + c has a repeated root in P^1 (or a root at 0 when c = 0)
    c.is_zero() || b.mul(b).sub(&a.mul(c).scale(&BigRational::from_integer(4.into()))).is_zero()
}

/// Exact repeated-root analysis of a binary quartic with `t` symbolic.
pub fn double_zero(form: &Form) -> DoubleZero {
    let c = |k: usize| form.get(k).cloned().unwrap_or_else(RatPoly::zero);
    let mut out = DoubleZero::default();
    if (0..5).all(|k| c(k).is_zero()) {
        out.identically_zero = true;
        return out;
    }
    if !quartic_discriminant(form).is_zero() {
        return out;
    }
    out.at_origin = c(0).is_zero() && c(1).is_zero();
    out.at_infinity = c(4).is_zero() && c(3).is_zero();
    out.other = match (out.at_origin, out.at_infinity) {
        (true, true) => false,
        (true, false) => quadratic_degenerate(&c(4), &c(3), &c(2)),
        (false, true) => quadratic_degenerate(&c(0), &c(1), &c(2)),
        (false, false) => true,
    };
    out
}

/// A point of P^1 over the certified complex numbers.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    pub x0: CertifiedComplex,
    pub x1: CertifiedComplex,
}

impl ProjPoint {
    pub fn infinity() -> Self {
        ProjPoint { x0: CertifiedComplex::one(), x1: CertifiedComplex::zero() }
    }

    pub fn zero() -> Self {
        ProjPoint { x0: CertifiedComplex::zero(), x1: CertifiedComplex::one() }
    }

    pub fn affine(v: CertifiedComplex) -> Self {
        ProjPoint { x0: v, x1: CertifiedComplex::one() }
    }

    pub fn is_infinity(&self) -> bool {
        self.x1.is_exact() && self.x1.re.mid().is_zero() && self.x1.im.mid().is_zero()
    }

    /// Whether two points might coincide: the 2x2 determinant encloses 0.
    pub fn compatible(&self, o: &ProjPoint) -> bool {
        self.x0.mul(&o.x1).sub(&self.x1.mul(&o.x0)).contains_zero()
    }

    pub fn value(&self) -> Option<CertifiedComplex> {
        self.x0.div(&self.x1).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    Degenerate(u8),
    GenusZero,
    /// Genus zero, but the repeated discriminant root is not at `[0:1]`.
    GenusZeroNonCanonical,
    GenusOne,
}

#[derive(Clone, Debug)]
pub struct CurveClassification {
    pub kind: CurveKind,
    pub double_zero_x: DoubleZero,
    pub double_zero_y: DoubleZero,
    pub singular_point: Option<(ProjPoint, ProjPoint)>,
    pub branch_x: Option<[ProjPoint; 4]>,
    pub branch_y: Option<[ProjPoint; 4]>,
}

/// Roots `r3, r4` of `c4 X^2 + c3 X + c2` as in the branch-point table:
/// minus-radical root first, and `([1:0], [-c2:c3])` when `c4 = 0`.
pub fn quartic_branch_pair(
    c2: &BigRational,
    c3: &BigRational,
    c4: &BigRational,
    prec: u32,
) -> Result<(ProjPoint, ProjPoint), NumError> {
    if c4.is_zero() {
        return Ok((
            ProjPoint::infinity(),
            ProjPoint {
                x0: CertifiedComplex::from_rational(&-c2, prec),
                x1: CertifiedComplex::from_rational(c3, prec),
            },
        ));
    }
    let four = BigRational::from_integer(4.into());
    let rad = CertifiedComplex::from_rational(&(c3 * c3 - four * c2 * c4), prec).sqrt()?;
    let mc3 = CertifiedComplex::from_rational(&-c3, prec);
    let den = CertifiedComplex::from_rational(&(c4 * BigRational::from_integer(2.into())), prec);
    let r3 = mc3.sub(&rad).div(&den)?;
    let r4 = mc3.add(&rad).div(&den)?;
    Ok((ProjPoint::affine(r3), ProjPoint::affine(r4)))
}

pub fn genus_classify(km: &KernelModel, prec: u32) -> Result<CurveClassification, KernelError> {
    if let Degeneracy::Degenerate(c) = classify_degeneracy(&km.weights) {
        return Err(KernelError::DegenerateInput(c));
    }
    let dzx = double_zero(&km.disc_x);
    let dzy = double_zero(&km.disc_y);
    let genus_zero = dzx.present() && dzy.present();
    // the repeated root must be the node ([0:1],[0:1]) of the curve itself
    let w = &km.weights;
    let node = !w.has(-1, -1) && !w.has(-1, 0) && !w.has(0, -1);
    let canonical = node && dzx.at_origin && dzy.at_origin && !dzx.other && !dzy.other;
    let kind = match (genus_zero, canonical) {
        (false, _) => CurveKind::GenusOne,
        (true, true) => CurveKind::GenusZero,
        (true, false) => CurveKind::GenusZeroNonCanonical,
    };
    let mut cc = CurveClassification {
        kind,
        double_zero_x: dzx,
        double_zero_y: dzy,
        singular_point: None,
        branch_x: None,
        branch_y: None,
    };
    if kind == CurveKind::GenusZero {
        let t = &km.t_value;
        let ev = |f: &Form, k: usize| f[k].eval(t);
        let (a3, a4) = quartic_branch_pair(&ev(&km.disc_x, 2), &ev(&km.disc_x, 3), &ev(&km.disc_x, 4), prec)?;
        let (b3, b4) = quartic_branch_pair(&ev(&km.disc_y, 2), &ev(&km.disc_y, 3), &ev(&km.disc_y, 4), prec)?;
        cc.branch_x = Some([ProjPoint::zero(), ProjPoint::zero(), a3, a4]);
        cc.branch_y = Some([ProjPoint::zero(), ProjPoint::zero(), b3, b4]);
        cc.singular_point = Some((ProjPoint::zero(), ProjPoint::zero()));
    }
    Ok(cc)
}

//! q-difference telescoping for rational functions of one variable.
//!
//! A rational function is decomposed as
//! `c + s p1(s) + sum_k b_k s^-k + sum_blocks sum_(l,j) alpha / (s - q^l beta)^j`
//! with poles grouped into q-orbits `beta q^Z`. It is q-summable, i.e.
//! `b = g(qs) - g(s)` for a rational `g`, iff `c = 0` and every q-residue
//! `sum_l q^(-l j) alpha_(l,j)` vanishes.

use std::collections::VecDeque;

use thiserror::Error;

use crate::numerics::NumError;
use crate::poly::Poly;
use crate::scalar::{OrbitEvidence, OrbitRelation, QScalar, ZeroStatus};

pub const DEFAULT_ORBIT_BOUND: u64 = 200;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum QSumError {
    #[error("cannot decide whether roots {0} and {1} share a q-orbit: {2}")]
    OrbitUndecided(usize, usize, String),
    #[error("denominator factor of degree {0} given without roots")]
    RootDegreeUnsupported(usize),
    #[error("q is not certifiably off the unit circle")]
    QOnUnitCircle,
    #[error("numeric failure: {0}")]
    Numeric(#[from] NumError),
}

/// Structural orbit label: the root equals `q^shift * base(family)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitTag {
    pub family: u32,
    pub shift: i64,
}

#[derive(Clone, Debug)]
pub struct Root<F> {
    pub value: F,
    pub mult: u32,
    pub tag: Option<OrbitTag>,
}

impl<F> Root<F> {
    pub fn new(value: F, mult: u32) -> Self {
        Root { value, mult, tag: None }
    }

    pub fn tagged(value: F, mult: u32, family: u32, shift: i64) -> Self {
        Root { value, mult, tag: Some(OrbitTag { family, shift }) }
    }
}

/// `num(s) / (lead * s^origin * prod (s - r)^m)` with nonzero distinct roots.
#[derive(Clone, Debug)]
pub struct RatFunc<F> {
    num: Poly<F>,
    lead: F,
    origin: u32,
    roots: Vec<Root<F>>,
}

fn same_root<F: QScalar>(a: &Root<F>, b: &Root<F>) -> bool {
    match (a.tag, b.tag) {
        (Some(x), Some(y)) if x == y => true,
        _ => a.value.is_exact() && b.value.is_exact() && a.value.sub(&b.value).is_exact_zero(),
    }
}

fn root_poly<F: QScalar>(r: &Root<F>, mult: u32) -> Poly<F> {
    Poly::linear_root(&r.value).pow(mult)
}

impl<F: QScalar> RatFunc<F> {
    pub fn new(num: Poly<F>, lead: F, origin: u32, roots: Vec<Root<F>>) -> Self {
        RatFunc { num, lead, origin, roots }
    }

    pub fn polynomial(p: Poly<F>) -> Self {
        RatFunc { num: p, lead: F::one(), origin: 0, roots: Vec::new() }
    }

    /// Build from a numerator and a list of denominator factors of degree at
    /// most 2, finding their roots in closed form.
    pub fn from_factors(num: Poly<F>, factors: &[Poly<F>]) -> Result<Self, QSumError> {
        let mut out = RatFunc::polynomial(num);
        for f in factors {
            match f.degree() {
                None => return Err(QSumError::Numeric(NumError::DivisionByZero)),
                Some(0) => out.lead = out.lead.mul(&f.coeff(0)),
                Some(1) => {
                    out.lead = out.lead.mul(&f.coeff(1));
                    let r = f.coeff(0).neg().try_div(&f.coeff(1))?;
                    out.push_root(r, 1);
                }
                Some(2) => {
                    let (a, b, c) = (f.coeff(2), f.coeff(1), f.coeff(0));
                    out.lead = out.lead.mul(&a);
                    let disc = b.mul(&b).sub(&a.mul(&c).mul(&F::from_i64(4)));
                    let two_a = a.mul(&F::from_i64(2));
                    if disc.is_exact_zero() {
                        out.push_root(b.neg().try_div(&two_a)?, 2);
                    } else {
                        let sq = disc.try_sqrt().map_err(|_| QSumError::RootDegreeUnsupported(2))?;
                        out.push_root(b.neg().sub(&sq).try_div(&two_a)?, 1);
                        out.push_root(b.neg().add(&sq).try_div(&two_a)?, 1);
                    }
                }
                Some(d) => return Err(QSumError::RootDegreeUnsupported(d)),
            }
        }
        Ok(out)
    }

    fn push_root(&mut self, r: F, mult: u32) {
        if r.is_exact_zero() {
            self.origin += mult;
            return;
        }
        let new = Root::new(r, mult);
        if let Some(old) = self.roots.iter_mut().find(|o| same_root(o, &new)) {
            old.mult += mult;
        } else {
            self.roots.push(new);
        }
    }

    pub fn numerator(&self) -> &Poly<F> {
        &self.num
    }

    pub fn roots(&self) -> &[Root<F>] {
        &self.roots
    }

    pub fn origin_order(&self) -> u32 {
        self.origin
    }

    pub fn lead(&self) -> &F {
        &self.lead
    }

    /// The full denominator, expanded.
    pub fn denominator(&self) -> Poly<F> {
        self.denominator_without(None)
    }

    fn denominator_without(&self, skip: Option<usize>) -> Poly<F> {
        let mut d = Poly::monomial(self.lead.clone(), self.origin as usize);
        for (k, r) in self.roots.iter().enumerate() {
            if Some(k) != skip {
                d = d.mul(&root_poly(r, r.mult));
            }
        }
        d
    }

    pub fn eval(&self, s: &F) -> Result<F, NumError> {
        self.num.eval(s).try_div(&self.denominator().eval(s))
    }

    pub fn scale(&self, c: &F) -> Self {
        RatFunc { num: self.num.scale(c), ..self.clone() }
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), ..self.clone() }
    }

    /// `s -> c s`; root tags shift by `-1` when `c = q`.
    pub fn dilate(&self, c: &F, tag_shift: i64) -> Result<Self, NumError> {
        // (c s - r) = c (s - r/c)
        let mut lead = self.lead.clone();
        let mut deg = self.origin;
        let mut roots = Vec::with_capacity(self.roots.len());
        for r in &self.roots {
            deg += r.mult;
            roots.push(Root {
                value: r.value.try_div(c)?,
                mult: r.mult,
                tag: r.tag.map(|t| OrbitTag { family: t.family, shift: t.shift + tag_shift }),
            });
        }
        lead = lead.mul(&c.pow_i(deg as i64)?);
        Ok(RatFunc { num: self.num.dilate(c), lead, origin: self.origin, roots })
    }

    pub fn add(&self, o: &Self) -> Result<Self, NumError> {
        // common denominator: lcm of the factored denominators
        let mut roots: Vec<Root<F>> = self.roots.clone();
        for r in &o.roots {
            if let Some(x) = roots.iter_mut().find(|x| same_root(x, r)) {
                x.mult = x.mult.max(r.mult);
                if x.tag.is_none() {
                    x.tag = r.tag;
                }
            } else {
                roots.push(r.clone());
            }
        }
        let origin = self.origin.max(o.origin);
        let cofactor = |f: &Self| -> Poly<F> {
            let mut p = Poly::monomial(F::one(), (origin - f.origin) as usize);
            for r in &roots {
                let have = f.roots.iter().find(|x| same_root(x, r)).map_or(0, |x| x.mult);
                p = p.mul(&root_poly(r, r.mult - have));
            }
            p
        };
        let lead = self.lead.mul(&o.lead);
        let n1 = self.num.mul(&cofactor(self)).scale(&o.lead);
        let n2 = o.num.mul(&cofactor(o)).scale(&self.lead);
        Ok(RatFunc { num: n1.add(&n2), lead, origin, roots })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, NumError> {
        self.add(&o.neg())
    }
}

/// A principal-part term `coeff / (s - root)^order`.
#[derive(Clone, Debug)]
pub struct PoleTerm<F> {
    pub root: F,
    pub order: u32,
    pub coeff: F,
}

/// A rational function kept as a sum of simple pieces.
#[derive(Clone, Debug)]
pub struct PfSum<F> {
    /// Polynomial part including the constant.
    pub poly: Poly<F>,
    /// `origin[k-1]` multiplies `s^-k`.
    pub origin: Vec<F>,
    pub terms: Vec<PoleTerm<F>>,
}

impl<F: QScalar> PfSum<F> {
    pub fn eval(&self, s: &F) -> Result<F, NumError> {
        let mut acc = self.poly.eval(s);
        let inv = F::one().try_div(s)?;
        let mut p = inv.clone();
        for b in &self.origin {
            acc = acc.add(&b.mul(&p));
            p = p.mul(&inv);
        }
        for t in &self.terms {
            let d = s.sub(&t.root).pow_i(t.order as i64)?;
            acc = acc.add(&t.coeff.try_div(&d)?);
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug)]
pub struct BlockEntry<F> {
    /// The pole sits at `q^shift * representative`.
    pub shift: i64,
    pub order: u32,
    pub alpha: F,
    /// Index into the input root list.
    pub root_index: usize,
}

#[derive(Clone, Debug)]
pub struct OrbitBlock<F> {
    pub representative: F,
    pub entries: Vec<BlockEntry<F>>,
}

impl<F: QScalar> OrbitBlock<F> {
    pub fn max_order(&self) -> u32 {
        self.entries.iter().map(|e| e.order).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct OrbitDecomposition<F> {
    /// Constant term, the q-residue at infinity.
    pub c: F,
    /// `s p1(s)`: the polynomial part without its constant.
    pub poly_part: Poly<F>,
    /// `origin_part[k-1]` multiplies `s^-k`.
    pub origin_part: Vec<F>,
    pub blocks: Vec<OrbitBlock<F>>,
    /// Certified relations between roots in different blocks.
    pub separations: Vec<(usize, usize, OrbitRelation)>,
    pub q: F,
    pub orbit_bound: u64,
}

impl<F: QScalar> OrbitDecomposition<F> {
    pub fn to_pf_sum(&self) -> Result<PfSum<F>, NumError> {
        let mut terms = Vec::new();
        for b in &self.blocks {
            for e in &b.entries {
                terms.push(PoleTerm {
                    root: self.q.pow_i(e.shift)?.mul(&b.representative),
                    order: e.order,
                    coeff: e.alpha.clone(),
                });
            }
        }
        let mut coeffs = self.poly_part.coeffs().to_vec();
        if coeffs.is_empty() {
            coeffs.push(F::zero());
        }
        coeffs[0] = coeffs[0].add(&self.c);
        Ok(PfSum { poly: Poly::new(coeffs), origin: self.origin_part.clone(), terms })
    }
}

/// Leading `n` coefficients of the power series `a / b`.
fn series_div<F: QScalar>(a: &[F], b: &[F], n: usize) -> Result<Vec<F>, NumError> {
    let b0 = b.first().cloned().unwrap_or_else(F::zero);
    let mut out: Vec<F> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = a.get(k).cloned().unwrap_or_else(F::zero);
        for i in 1..=k {
            if let Some(bi) = b.get(i) {
                acc = acc.sub(&bi.mul(&out[k - i]));
            }
        }
        out.push(acc.try_div(&b0)?);
    }
    Ok(out)
}

fn check_q<F: QScalar>(q: &F) -> Result<(), QSumError> {
    // q is real: |q| != 1 iff q^2 - 1 != 0
    match q.mul(q).sub(&F::one()).zero_status() {
        ZeroStatus::NonZero => Ok(()),
        _ => Err(QSumError::QOnUnitCircle),
    }
}

fn relation<F: QScalar>(a: &Root<F>, b: &Root<F>, q: &F, bound: u64) -> OrbitRelation {
    if let (Some(x), Some(y)) = (a.tag, b.tag) {
        if x.family == y.family {
            return OrbitRelation::Same(x.shift - y.shift);
        }
    }
    F::orbit_relation(&a.value, &b.value, q, bound)
}

pub fn partial_fractions<F: QScalar>(b: &RatFunc<F>, q: &F, orbit_bound: u64) -> Result<OrbitDecomposition<F>, QSumError> {
    check_q(q)?;
    let den = b.denominator();
    let (quot, _) = b.num.divrem(&den)?;
    let c = quot.coeff(0);
    let mut pc = quot.coeffs().to_vec();
    if !pc.is_empty() {
        pc[0] = F::zero();
    }
    let poly_part = Poly::new(pc);

    // principal part at the origin
    let mut origin_part = Vec::new();
    if b.origin > 0 {
        let n = b.origin as usize;
        let mut rest = Poly::constant(b.lead.clone());
        for r in &b.roots {
            rest = rest.mul(&root_poly(r, r.mult));
        }
        let ser = series_div(&b.num.taylor_at(&F::zero(), n), &rest.taylor_at(&F::zero(), n), n)?;
        origin_part = (1..=n).map(|k| ser[n - k].clone()).collect();
    }

    // principal parts at the other roots: alpha_j is the coefficient of
    // h^(m-j) in num / rest around the root
    let mut alphas: Vec<Vec<F>> = Vec::with_capacity(b.roots.len());
    for (i, r) in b.roots.iter().enumerate() {
        let m = r.mult as usize;
        let rest = b.denominator_without(Some(i));
        let ser = series_div(&b.num.taylor_at(&r.value, m), &rest.taylor_at(&r.value, m), m)?;
        alphas.push((1..=m).map(|j| ser[m - j].clone()).collect());
    }

    // orbit grouping with offsets: root_i = q^pot_i * representative
    let n = b.roots.len();
    let mut rel = vec![vec![None; n]; n];
    for i in 0..n {
        for k in (i + 1)..n {
            rel[i][k] = Some(relation(&b.roots[i], &b.roots[k], q, orbit_bound));
        }
    }
    let get = |i: usize, k: usize| -> OrbitRelation {
        if i < k {
            rel[i][k].clone().expect("filled")
        } else {
            match rel[k][i].clone().expect("filled") {
                OrbitRelation::Same(l) => OrbitRelation::Same(-l),
                o => o,
            }
        }
    };
    let mut comp = vec![usize::MAX; n];
    let mut pot = vec![0i64; n];
    let mut n_comp = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = n_comp;
        let mut queue = VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            for k in 0..n {
                if k == i {
                    continue;
                }
                if let OrbitRelation::Same(l) = get(i, k) {
                    // root_i = q^l root_k
                    if comp[k] == usize::MAX {
                        comp[k] = n_comp;
                        pot[k] = pot[i] - l;
                        queue.push_back(k);
                    }
                }
            }
        }
        n_comp += 1;
    }
    let mut separations = Vec::new();
    for i in 0..n {
        for k in (i + 1)..n {
            if comp[i] == comp[k] {
                continue;
            }
            match get(i, k) {
                r @ OrbitRelation::Distinct(_) => separations.push((i, k, r)),
                OrbitRelation::Undecided(OrbitEvidence { reason, .. }) => {
                    return Err(QSumError::OrbitUndecided(i, k, reason));
                }
                OrbitRelation::Same(_) => unreachable!("same-orbit roots share a component"),
            }
        }
    }

    let mut blocks = Vec::with_capacity(n_comp);
    for cidx in 0..n_comp {
        let members: Vec<usize> = (0..n).filter(|&i| comp[i] == cidx).collect();
        let min = members.iter().map(|&i| pot[i]).min().expect("nonempty");
        let rep_i = *members.iter().find(|&&i| pot[i] == min).expect("nonempty");
        let mut entries = Vec::new();
        for &i in &members {
            for (j, a) in alphas[i].iter().enumerate() {
                entries.push(BlockEntry { shift: pot[i] - min, order: j as u32 + 1, alpha: a.clone(), root_index: i });
            }
        }
        blocks.push(OrbitBlock { representative: b.roots[rep_i].value.clone(), entries });
    }

    Ok(OrbitDecomposition { c, poly_part, origin_part, blocks, separations, q: q.clone(), orbit_bound })
}

/// `sum_l q^(-l j) alpha_(l, j)` over the entries of order `j`.
pub fn q_residue<F: QScalar>(d: &OrbitDecomposition<F>, block: usize, j: u32) -> Result<F, NumError> {
    let mut acc = F::zero();
    for e in d.blocks[block].entries.iter().filter(|e| e.order == j) {
        acc = acc.add(&d.q.pow_i(-e.shift * j as i64)?.mul(&e.alpha));
    }
    Ok(acc)
}

/// The q-residue at infinity.
pub fn q_residue_infinity<F: QScalar>(d: &OrbitDecomposition<F>) -> F {
    d.c.clone()
}

#[derive(Clone, Debug)]
pub enum NotSummableWitness<F> {
    AtInfinity { c: F },
    Residue {
        block: usize,
        representative: F,
        order: u32,
        residue: F,
        /// The pole of this order has no other pole of order at least this
        /// large in its orbit.
        lone_pole: bool,
    },
}

#[derive(Clone, Debug)]
pub enum SummabilityVerdict<F> {
    Summable { witness: PfSum<F> },
    NotSummable(NotSummableWitness<F>),
    Undecided(String),
}

impl<F> SummabilityVerdict<F> {
    pub fn is_summable(&self) -> bool {
        matches!(self, SummabilityVerdict::Summable { .. })
    }

    pub fn is_not_summable(&self) -> bool {
        matches!(self, SummabilityVerdict::NotSummable(_))
    }
}

/// Whether the order-`j` pole of entry `e` is the only pole of order at
/// least `j` in its block (entries with exactly zero coefficients ignored).
fn lone_pole<F: QScalar>(blk: &OrbitBlock<F>, j: u32) -> bool {
    let mut sites: Vec<usize> = blk
        .entries
        .iter()
        .filter(|e| e.order >= j && !e.alpha.is_exact_zero())
        .map(|e| e.root_index)
        .collect();
    sites.sort_unstable();
    sites.dedup();
    sites.len() == 1
}

pub fn decide_summability<F: QScalar>(b: &RatFunc<F>, q: &F, orbit_bound: u64) -> Result<SummabilityVerdict<F>, QSumError> {
    let d = partial_fractions(b, q, orbit_bound)?;
    decide_decomposition(&d)
}

pub fn decide_decomposition<F: QScalar>(d: &OrbitDecomposition<F>) -> Result<SummabilityVerdict<F>, QSumError> {
    let mut undecided = Vec::new();
    match d.c.zero_status() {
        ZeroStatus::NonZero => return Ok(SummabilityVerdict::NotSummable(NotSummableWitness::AtInfinity { c: d.c.clone() })),
        ZeroStatus::Undecided => undecided.push("residue at infinity encloses zero".to_string()),
        ZeroStatus::Zero => {}
    }
    let mut found: Option<NotSummableWitness<F>> = None;
    for (bi, blk) in d.blocks.iter().enumerate() {
        for j in (1..=blk.max_order()).rev() {
            let r = q_residue(d, bi, j)?;
            match r.zero_status() {
                ZeroStatus::NonZero => {
                    let lone = lone_pole(blk, j);
                    let better = match &found {
                        None => true,
                        Some(NotSummableWitness::Residue { lone_pole, order, .. }) => {
                            (lone && !lone_pole) || (lone == *lone_pole && j > *order)
                        }
                        Some(_) => false,
                    };
                    if better {
                        found = Some(NotSummableWitness::Residue {
                            block: bi,
                            representative: blk.representative.clone(),
                            order: j,
                            residue: r,
                            lone_pole: lone,
                        });
                    }
                }
                ZeroStatus::Undecided => undecided.push(format!("q-residue of block {} at order {} encloses zero", bi, j)),
                ZeroStatus::Zero => {}
            }
        }
    }
    if let Some(w) = found {
        return Ok(SummabilityVerdict::NotSummable(w));
    }
    if !undecided.is_empty() {
        return Ok(SummabilityVerdict::Undecided(undecided.join("; ")));
    }
    Ok(SummabilityVerdict::Summable { witness: telescoper(d)? })
}

/// A `g` with `g(qs) - g(s) = b`, assuming every q-residue vanishes.
fn telescoper<F: QScalar>(d: &OrbitDecomposition<F>) -> Result<PfSum<F>, NumError> {
    let q = &d.q;
    let mut pc = vec![F::zero()];
    for (k, a) in d.poly_part.coeffs().iter().enumerate().skip(1) {
        pc.push(a.try_div(&q.pow_i(k as i64)?.sub(&F::one()))?);
    }
    let mut origin = Vec::with_capacity(d.origin_part.len());
    for (k, a) in d.origin_part.iter().enumerate() {
        let k = k as i64 + 1;
        origin.push(a.try_div(&q.pow_i(-k)?.sub(&F::one()))?);
    }
    let mut terms = Vec::new();
    for blk in &d.blocks {
        for e in &blk.entries {
            if e.alpha.is_exact_zero() {
                continue;
            }
            let j = e.order as i64;
            for k in 1..=e.shift {
                let c = e.alpha.neg().mul(&q.pow_i(-j * (e.shift - k))?);
                terms.push(PoleTerm { root: q.pow_i(k)?.mul(&blk.representative), order: e.order, coeff: c });
            }
        }
    }
    Ok(PfSum { poly: Poly::new(pc), origin, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn p(v: &[i64]) -> Poly<BigRational> {
        Poly::new(v.iter().map(|&n| r(n)).collect())
    }

    #[test]
    fn polynomial_only() {
        let b = RatFunc::polynomial(p(&[1, 1]));
        let d = partial_fractions(&b, &r(2), 200).unwrap();
        assert_eq!(d.c, r(1));
        assert_eq!(d.poly_part, p(&[0, 1]));
        assert!(d.blocks.is_empty());
    }

    #[test]
    fn single_pole_is_lone() {
        let b = RatFunc::from_factors(p(&[1]), &[p(&[-3, 1])]).unwrap();
        match decide_summability(&b, &r(2), 200).unwrap() {
            SummabilityVerdict::NotSummable(NotSummableWitness::Residue { lone_pole, .. }) => assert!(lone_pole),
            v => panic!("{:?}", v),
        }
    }
}

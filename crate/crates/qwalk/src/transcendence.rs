//! Differential transcendence of the section series via the q-summability
//! of the pulled-back right-hand side `b2(s) = x(s) (y(qs) - y(s))`.
//!
//! The poles of `b1`, `b2` sit at the preimages of eight named points:
//! `P1, P2` (x infinite), `Q1, Q2` (y infinite), `i1(Q2) = s^-1(Q1)`,
//! `i1(Q1) = s^-1(Q2)` and `s^-1(P1), s^-1(P2)`, where `s^-1` is the
//! inverse of the curve automorphism pulled back to `s -> s/q`. Which of
//! them coincide depends only on the weight support, so coincidences and
//! orbit links come from a symbolic table and the numerics only confirm
//! the table and separate what it leaves distinct.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::kernel::{
    build_kernel, classify_degeneracy, genus_classify, CurveKind, Degeneracy, Dir, KernelError, ProjPoint, StepWeights,
};
use crate::numerics::{CertifiedComplex, NumError, Precision};
use crate::poly::Poly;
use crate::qsummation::{decide_summability, NotSummableWitness, QSumError, RatFunc, Root, SummabilityVerdict};
use crate::scalar::{certified_orbit_relation, OrbitRelation};
use crate::uniformize::{build_uniformization, SParam, UniformizeError, Uniformization};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TranscendenceError {
    #[error("walk is degenerate (case {0})")]
    DegenerateWalk(u8),
    #[error("kernel curve is not of canonical genus zero ({0:?})")]
    NotGenusZero(CurveKind),
    #[error("support outside the supported family: {0}")]
    UnsupportedSupport(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Uniformize(#[from] UniformizeError),
    #[error(transparent)]
    QSum(#[from] QSumError),
    #[error("numeric failure: {0}")]
    Numeric(#[from] NumError),
}

/// Which of `d11, d10, d01` vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    D11D10Zero,
    D11D01Zero,
    D11ZeroMixed,
    D11NonZero,
}

impl CaseLabel {
    pub fn of(w: &StepWeights) -> CaseLabel {
        match (w.has(1, 1), w.has(1, 0), w.has(0, 1)) {
            (true, _, _) => CaseLabel::D11NonZero,
            (false, false, _) => CaseLabel::D11D10Zero,
            (false, true, false) => CaseLabel::D11D01Zero,
            (false, true, true) => CaseLabel::D11ZeroMixed,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseLabel::D11D10Zero => "d11=d10=0",
            CaseLabel::D11D01Zero => "d11=d01=0",
            CaseLabel::D11ZeroMixed => "d11=0 & d10*d01!=0",
            CaseLabel::D11NonZero => "d11!=0",
        }
    }

    /// The expected polar divisor of `b2`.
    pub fn expected_divisor(&self) -> &'static str {
        match self {
            CaseLabel::D11D10Zero => "3P1 + Q2 + i1(Q2)",
            CaseLabel::D11D01Zero => "3P1 + 3P2 with P2 = s^-1(P1)",
            CaseLabel::D11ZeroMixed => "2P1 + 2P2 + Q2 + i1(Q2)",
            CaseLabel::D11NonZero => "P1 + P2 + Q1 + Q2 + i1(Q1) + i1(Q2)",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Support inside `{NW, N, NE, E, SE}` plus the origin, with `NW` and `SE`.
pub fn check_support(w: &StepWeights) -> Result<(), TranscendenceError> {
    use Dir::*;
    let allowed: Vec<(i32, i32)> = [NW, N, NE, E, SE].iter().map(|d| d.offset()).collect();
    for p in w.step_set() {
        if !allowed.contains(&p) {
            return Err(TranscendenceError::UnsupportedSupport(format!(
                "step ({},{}) is not among NW, N, NE, E, SE",
                p.0, p.1
            )));
        }
    }
    if !w.has(-1, 1) || !w.has(1, -1) || !(w.has(0, 1) || w.has(1, 1) || w.has(1, 0)) {
        return Err(TranscendenceError::UnsupportedSupport("needs NW, SE and one of N, NE, E".into()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Slot {
    P1,
    P2,
    Q1,
    Q2,
    /// `i1(Q2) = s^-1(Q1)`.
    IotaQ2,
    /// `i1(Q1) = s^-1(Q2)`.
    IotaQ1,
    SigmaInvP1,
    SigmaInvP2,
}

impl Slot {
    pub const ALL: [Slot; 8] =
        [Slot::P1, Slot::P2, Slot::Q1, Slot::Q2, Slot::IotaQ2, Slot::IotaQ1, Slot::SigmaInvP1, Slot::SigmaInvP2];

    pub fn name(&self) -> &'static str {
        match self {
            Slot::P1 => "P1",
            Slot::P2 => "P2",
            Slot::Q1 => "Q1",
            Slot::Q2 => "Q2",
            Slot::IotaQ2 => "i1(Q2)",
            Slot::IotaQ1 => "i1(Q1)",
            Slot::SigmaInvP1 => "s^-1(P1)",
            Slot::SigmaInvP2 => "s^-1(P2)",
        }
    }

    fn index(&self) -> usize {
        Slot::ALL.iter().position(|s| s == self).expect("listed")
    }
}

/// Denominator slots of `b2`: `D_x(s) D_y(s) D_y(qs)`.
const B2_SLOTS: [Slot; 6] = [Slot::P1, Slot::P2, Slot::Q1, Slot::Q2, Slot::IotaQ2, Slot::IotaQ1];
/// Denominator slots of `b1`: `D_x(s) D_x(qs) D_y(qs)`.
const B1_SLOTS: [Slot; 6] = [Slot::P1, Slot::P2, Slot::SigmaInvP1, Slot::SigmaInvP2, Slot::IotaQ2, Slot::IotaQ1];

/// Coincidences forced by the support, closed under `s -> s/q`.
pub fn symbolic_coincidences(w: &StepWeights) -> Vec<(Slot, Slot)> {
    let four = BigRational::from_integer(4.into());
    let d = |i, j| w.get(i, j).clone();
    let a4_zero = d(1, 0) * d(1, 0) == &four * d(1, 1) * d(1, -1);
    let b4_zero = d(0, 1) * d(0, 1) == &four * d(1, 1) * d(-1, 1);
    let mut out = Vec::new();
    if a4_zero {
        out.push((Slot::P1, Slot::P2));
        out.push((Slot::SigmaInvP1, Slot::SigmaInvP2));
    }
    if b4_zero {
        out.push((Slot::Q1, Slot::Q2));
        out.push((Slot::IotaQ2, Slot::IotaQ1));
    }
    if !w.has(1, 1) {
        out.push((Slot::P1, Slot::Q1));
        out.push((Slot::SigmaInvP1, Slot::IotaQ2));
        out.push((Slot::P2, Slot::IotaQ1));
    }
    out
}

/// Orbit links `a = s^-1(b)` between slots.
const SIGMA_LINKS: [(Slot, Slot); 4] = [
    (Slot::IotaQ2, Slot::Q1),
    (Slot::IotaQ1, Slot::Q2),
    (Slot::SigmaInvP1, Slot::P1),
    (Slot::SigmaInvP2, Slot::P2),
];

/// A point of the curve that is a preimage class of one or more slots.
#[derive(Clone, Debug)]
pub struct PointClass {
    pub slots: Vec<Slot>,
    pub s: CertifiedComplex,
    /// Structural orbit: the preimage is `q^shift` times the family base.
    pub family: u32,
    pub shift: i64,
    pub x: ProjPoint,
    pub y: ProjPoint,
}

impl PointClass {
    pub fn label(&self) -> String {
        self.slots.iter().map(|s| s.name()).collect::<Vec<_>>().join("=")
    }
}

#[derive(Clone, Debug)]
pub struct DivisorEntry {
    pub class: usize,
    pub order: u32,
}

#[derive(Clone, Debug)]
pub struct PoleDivisor {
    pub entries: Vec<DivisorEntry>,
}

impl PoleDivisor {
    pub fn order_of(&self, class: usize) -> u32 {
        self.entries.iter().find(|e| e.class == class).map_or(0, |e| e.order)
    }

    pub fn max_order(&self) -> u32 {
        self.entries.iter().map(|e| e.order).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct TelescoperRHS {
    pub classes: Vec<PointClass>,
    pub b1: RatFunc<CertifiedComplex>,
    pub b2: RatFunc<CertifiedComplex>,
    pub b1_divisor: PoleDivisor,
    pub b2_divisor: PoleDivisor,
}

impl TelescoperRHS {
    pub fn class_of(&self, slot: Slot) -> usize {
        self.classes.iter().position(|c| c.slots.contains(&slot)).expect("every slot has a class")
    }

    /// Render a divisor as `3[P1=P2=Q1=i1(Q1)] + [Q2] + ...`.
    pub fn describe(&self, d: &PoleDivisor) -> String {
        d.entries
            .iter()
            .map(|e| {
                let n = if e.order > 1 { e.order.to_string() } else { String::new() };
                format!("{}[{}]", n, self.classes[e.class].label())
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

/// Preimages of the eight slots, before any merging.
fn slot_values(u: &Uniformization) -> Result<[CertifiedComplex; 8], NumError> {
    let bits = u.bits;
    let v = &u.ab_values;
    let w = &u.weights;
    let cc = |r: &BigRational| CertifiedComplex::from_rational(r, bits);
    let two = CertifiedComplex::from_i64(2);
    let (p_minus, p_plus) = if v.a4.is_zero() {
        (CertifiedComplex::one(), CertifiedComplex::one())
    } else {
        let r = cc(&(&v.a2 * &v.a4)).sqrt()?.mul(&two);
        let a3 = cc(&v.a3);
        (a3.sub(&r).div(&u.sqrt_ax)?, a3.add(&r).div(&u.sqrt_ax)?)
    };
    let (q_minus, q_plus) = if v.b4.is_zero() {
        (u.lambda.clone(), u.lambda.clone())
    } else {
        let r = cc(&(&v.b2 * &v.b4)).sqrt()?.mul(&two);
        let b3 = cc(&v.b3);
        let f = u.lambda.div(&u.sqrt_by)?;
        (b3.sub(&r).mul(&f), b3.add(&r).mul(&f))
    };
    // with d11 = 0, P1 = Q1 names the preimage shared by both denominators
    let (p1, p2, q1, q2) = if w.has(1, 1) {
        (p_minus, p_plus, q_minus, q_plus)
    } else {
        let pairs = [(&p_minus, &q_minus), (&p_minus, &q_plus), (&p_plus, &q_minus), (&p_plus, &q_plus)];
        let hits: Vec<usize> = (0..4).filter(|&k| pairs[k].0.overlaps(pairs[k].1)).collect();
        let k = match hits.as_slice() {
            [k] => *k,
            // both P (or both Q) preimages coincide: any overlapping pair works
            [k, ..] if v.a4.is_zero() || v.b4.is_zero() => *k,
            _ => return Err(NumError::Undecided),
        };
        let (p1, p2) = if k < 2 { (p_minus, p_plus) } else { (p_plus, p_minus) };
        let (q1, q2) = if k % 2 == 0 { (q_minus, q_plus) } else { (q_plus, q_minus) };
        (p1, p2, q1, q2)
    };
    let q = u.q_complex();
    Ok([
        p1.clone(),
        p2.clone(),
        q1.clone(),
        q2.clone(),
        q1.div(&q)?,
        q2.div(&q)?,
        p1.div(&q)?,
        p2.div(&q)?,
    ])
}

/// Classes of coincident slots, their structural orbits, and numeric checks
/// that coincident slots overlap while distinct classes are disjoint.
pub fn point_classes(u: &Uniformization) -> Result<Vec<PointClass>, TranscendenceError> {
    let vals = slot_values(u)?;
    let mut parent: Vec<usize> = (0..8).collect();
    for (a, b) in symbolic_coincidences(&u.weights) {
        let (ra, rb) = (find(&mut parent, a.index()), find(&mut parent, b.index()));
        parent[rb] = ra;
    }
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..8 {
        let r = find(&mut parent, i);
        if !reps.contains(&r) {
            reps.push(r);
        }
    }
    let class_of = |parent: &mut Vec<usize>, i: usize| -> usize {
        let r = find(parent, i);
        reps.iter().position(|&x| x == r).expect("rep")
    };
    let n = reps.len();
    let mut members: Vec<Vec<Slot>> = vec![Vec::new(); n];
    for s in Slot::ALL {
        let c = class_of(&mut parent, s.index());
        members[c].push(s);
    }

    // orbit potentials: value(a) = q^-1 value(b) for each link (a, b)
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (a, b) in SIGMA_LINKS {
        edges.push((class_of(&mut parent, a.index()), class_of(&mut parent, b.index())));
    }
    let mut family = vec![u32::MAX; n];
    let mut shift = vec![0i64; n];
    let mut nf = 0;
    for start in 0..n {
        if family[start] != u32::MAX {
            continue;
        }
        family[start] = nf;
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            for &(a, b) in &edges {
                let (other, pot) = if a == c {
                    (b, shift[c] + 1)
                } else if b == c {
                    (a, shift[c] - 1)
                } else {
                    continue;
                };
                if family[other] == u32::MAX {
                    family[other] = nf;
                    shift[other] = pot;
                    stack.push(other);
                } else if shift[other] != pot {
                    return Err(TranscendenceError::Uniformize(UniformizeError::Inconsistent(
                        "a point would lie at two offsets of one orbit".into(),
                    )));
                }
            }
        }
        nf += 1;
    }

    let mut classes = Vec::with_capacity(n);
    for c in 0..n {
        let idx: Vec<usize> = members[c].iter().map(|s| s.index()).collect();
        for &i in &idx {
            for &k in &idx {
                if !vals[i].overlaps(&vals[k]) {
                    return Err(TranscendenceError::Uniformize(UniformizeError::Inconsistent(format!(
                        "{} and {} should coincide but their enclosures are disjoint",
                        Slot::ALL[i].name(),
                        Slot::ALL[k].name()
                    ))));
                }
            }
        }
        let s = idx.iter().map(|&i| vals[i].clone()).find(|v| v.is_exact()).unwrap_or_else(|| vals[idx[0]].clone());
        let sp = SParam::Finite(s.clone());
        classes.push(PointClass {
            slots: members[c].clone(),
            x: u.x_proj(&sp),
            y: u.y_proj(&sp),
            s,
            family: family[c],
            shift: shift[c],
        });
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if classes[a].s.overlaps(&classes[b].s) {
                return Err(TranscendenceError::Numeric(NumError::Undecided));
            }
        }
    }
    Ok(classes)
}

fn divisor_for(classes: &[PointClass], slots: &[Slot], cancel: Option<usize>) -> PoleDivisor {
    let mut entries: Vec<DivisorEntry> = Vec::new();
    for (ci, c) in classes.iter().enumerate() {
        let mut order = slots.iter().filter(|s| c.slots.contains(s)).count() as u32;
        if cancel == Some(ci) {
            order -= 1;
        }
        if order > 0 {
            entries.push(DivisorEntry { class: ci, order });
        }
    }
    entries.sort_by(|a, b| b.order.cmp(&a.order).then(a.class.cmp(&b.class)));
    PoleDivisor { entries }
}

fn ratfunc_for(
    classes: &[PointClass],
    divisor: &PoleDivisor,
    numerator: Poly<CertifiedComplex>,
    lead: CertifiedComplex,
) -> RatFunc<CertifiedComplex> {
    let roots = divisor
        .entries
        .iter()
        .map(|e| {
            let c = &classes[e.class];
            Root::tagged(c.s.clone(), e.order, c.family, c.shift)
        })
        .collect();
    RatFunc::new(numerator, lead, 0, roots)
}

/// `b1` and `b2` in factored form:
/// `b2 = 16 a2 b2 L q (q-1) Ry s^2 (1-s^2) / (D_x(s) D_y(s) D_y(qs))`,
/// `b1 = 16 a2 b2 L q (q-1) Rx s^2 (1-q s^2) / (D_x(s) D_x(qs) D_y(qs))`,
/// with the numerator factor cancelled where the denominator vanishes on it.
pub fn build_rhs(u: &Uniformization) -> Result<TelescoperRHS, TranscendenceError> {
    let classes = point_classes(u)?;
    let bits = u.bits;
    let v = &u.ab_values;
    let q = u.q_complex();
    let one = CertifiedComplex::one();
    let k = CertifiedComplex::from_rational(&(BigRational::from_integer(16.into()) * &v.a2 * &v.b2), bits)
        .mul(&u.lambda)
        .mul(&q)
        .mul(&q.sub(&one));
    let s2 = Poly::monomial(one.clone(), 2);
    let find_slot = |slot: Slot| classes.iter().position(|c| c.slots.contains(&slot)).expect("slot");

    // b2: s^2 (1 - s^2) = -s^2 (s - 1)(s + 1); s = 1 is a double root of
    // D_x exactly when a4 = 0
    let mut num2 = s2.mul(&Poly::new(vec![one.neg(), CertifiedComplex::zero(), one.clone()])).scale(&one.neg());
    let mut cancel2 = None;
    if v.a4.is_zero() {
        num2 = s2.mul(&Poly::new(vec![one.clone(), one.clone()])).scale(&one.neg());
        cancel2 = Some(find_slot(Slot::P1));
    }
    let b2_div = divisor_for(&classes, &B2_SLOTS, cancel2);
    let lead2 = u.sqrt_ax.mul(&u.sqrt_by).mul(&u.sqrt_by).mul(&q).mul(&q);
    let b2 = ratfunc_for(&classes, &b2_div, num2.scale(&k.mul(&u.sqrt_by)), lead2);

    // b1: s^2 (1 - q s^2) = -q s^2 (s - 1/L)(s + 1/L); s = 1/L is the double
    // preimage of i1(Q1) = i1(Q2) exactly when b4 = 0
    let il = one.div(&u.lambda)?;
    let mut num1 = s2.mul(&Poly::new(vec![il.mul(&il).neg(), CertifiedComplex::zero(), one.clone()])).scale(&q.neg());
    let mut cancel1 = None;
    if v.b4.is_zero() {
        num1 = s2.mul(&Poly::new(vec![il, one.clone()])).scale(&q.neg());
        cancel1 = Some(find_slot(Slot::IotaQ2));
    }
    let b1_div = divisor_for(&classes, &B1_SLOTS, cancel1);
    let lead1 = u.sqrt_ax.mul(&u.sqrt_ax).mul(&u.sqrt_by).mul(&q.pow_u(4));
    let b1 = ratfunc_for(&classes, &b1_div, num1.scale(&k.mul(&u.sqrt_ax)), lead1);

    Ok(TelescoperRHS { classes, b1, b2, b1_divisor: b1_div, b2_divisor: b2_div })
}

/// Certified check that each slot of a class satisfies its defining
/// quadratic on the curve.
pub fn named_point_checks(u: &Uniformization, rhs: &TelescoperRHS) -> Vec<(String, bool)> {
    let bits = u.bits;
    let w = &u.weights;
    let cc = |r: &BigRational| CertifiedComplex::from_rational(r, bits);
    // a y1^2 + b y0 y1 + c y0^2 at a projective point
    let quad = |p: &ProjPoint, a: &BigRational, b: &BigRational, c: &BigRational| -> bool {
        cc(a).mul(&p.x1).mul(&p.x1).add(&cc(b).mul(&p.x0).mul(&p.x1)).add(&cc(c).mul(&p.x0).mul(&p.x0)).contains_zero()
    };
    let at_inf = |p: &ProjPoint| p.x1.contains_zero() && !p.x0.contains_zero();
    let mut out = Vec::new();
    for c in &rhs.classes {
        for s in &c.slots {
            let ok = match s {
                Slot::P1 | Slot::P2 => at_inf(&c.x) && quad(&c.y, w.get(1, -1), w.get(1, 0), w.get(1, 1)),
                Slot::Q1 | Slot::Q2 => at_inf(&c.y) && quad(&c.x, w.get(-1, 1), w.get(0, 1), w.get(1, 1)),
                Slot::IotaQ1 | Slot::IotaQ2 => quad(&c.x, w.get(-1, 1), w.get(0, 1), w.get(1, 1)),
                Slot::SigmaInvP1 | Slot::SigmaInvP2 => true,
            };
            out.push((s.name().to_string(), ok));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Separation {
    pub a: usize,
    pub b: usize,
    pub relation: OrbitRelation,
    /// Whether the relation comes from the symbolic orbit links.
    pub structural: bool,
}

/// Orbit relations between all pairs of poles of `b2`.
pub fn orbit_separation(rhs: &TelescoperRHS, u: &Uniformization, orbit_bound: u64) -> Vec<Separation> {
    let q = u.q_complex();
    let e = &rhs.b2_divisor.entries;
    let mut out = Vec::new();
    for i in 0..e.len() {
        for k in (i + 1)..e.len() {
            let (a, b) = (&rhs.classes[e[i].class], &rhs.classes[e[k].class]);
            let (relation, structural) = if a.family == b.family {
                (OrbitRelation::Same(a.shift - b.shift), true)
            } else {
                (certified_orbit_relation(&a.s, &b.s, &q, orbit_bound), false)
            };
            out.push(Separation { a: e[i].class, b: e[k].class, relation, structural });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Conclusion {
    Transcendental,
    Algebraic,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    /// Class label of the witness pole, e.g. `P1=Q1`.
    pub witness: String,
    pub order: u32,
    pub s_preimage: CertifiedComplex,
    /// Orbit-separation evidence against every other pole of order at least
    /// `order`.
    pub evidence: Vec<String>,
    pub citation: String,
}

#[derive(Clone, Debug)]
pub struct ModelAnalysis {
    pub weights: StepWeights,
    pub uniformization: Uniformization,
    pub rhs: TelescoperRHS,
    pub separations: Vec<Separation>,
    pub named_points: Vec<(String, bool)>,
    pub summability: SummabilityVerdict<CertifiedComplex>,
    pub witness: Option<Certificate>,
}

#[derive(Clone, Debug)]
pub struct TranscendenceVerdict {
    pub conclusion: Conclusion,
    pub case_label: CaseLabel,
    /// Set when the certificate was obtained on the transposed walk.
    pub via_transpose: bool,
    pub certificate: Option<Certificate>,
    pub analysis: ModelAnalysis,
    pub transposed: Option<ModelAnalysis>,
    pub notes: Vec<String>,
    pub bits: u32,
}

fn pick_witness(rhs: &TelescoperRHS, seps: &[Separation], case: CaseLabel) -> Result<Option<Certificate>, ()> {
    let div = &rhs.b2_divisor;
    let rel = |a: usize, b: usize| seps.iter().find(|s| (s.a == a && s.b == b) || (s.a == b && s.b == a));
    let mut undecided = false;
    // candidates: P1 first, then by descending order
    let mut cands: Vec<&DivisorEntry> = div.entries.iter().collect();
    cands.sort_by_key(|e| (!rhs.classes[e.class].slots.contains(&Slot::P1), std::cmp::Reverse(e.order)));
    for cand in cands {
        let mut evidence = Vec::new();
        let mut ok = true;
        for other in &div.entries {
            if other.class == cand.class || other.order < cand.order {
                continue;
            }
            let label = rhs.classes[other.class].label();
            match rel(cand.class, other.class).map(|s| &s.relation) {
                Some(OrbitRelation::Distinct(ev)) => {
                    evidence.push(format!("{} not in the orbit: {} (|l| <= {})", label, ev.reason, ev.bound))
                }
                Some(OrbitRelation::Same(l)) => {
                    ok = false;
                    evidence.push(format!("{} lies at offset {}", label, l));
                }
                _ => {
                    ok = false;
                    undecided = true;
                }
            }
        }
        if ok {
            let c = &rhs.classes[cand.class];
            if evidence.is_empty() {
                evidence.push(format!("no other pole of order >= {}", cand.order));
            }
            let citation = match case {
                CaseLabel::D11D10Zero | CaseLabel::D11D01Zero => {
                    "order-3 pole with all other poles simple; lone-pole criterion".to_string()
                }
                CaseLabel::D11ZeroMixed => "P1 and P2 lie in distinct orbits; lone-pole criterion".to_string(),
                CaseLabel::D11NonZero => {
                    "P1 is in no orbit of another pole when d11 != 0; lone-pole criterion".to_string()
                }
            };
            return Ok(Some(Certificate {
                witness: c.label(),
                order: cand.order,
                s_preimage: c.s.clone(),
                evidence,
                citation,
            }));
        }
    }
    if undecided {
        Err(())
    } else {
        Ok(None)
    }
}

fn analyze_at(w: &StepWeights, t: &BigRational, bits: u32, max_bits: u32, orbit_bound: u64) -> Result<ModelAnalysis, TranscendenceError> {
    let km = build_kernel(w, t)?;
    let cls = genus_classify(&km, bits)?;
    let u = build_uniformization(&km, &cls, Precision::new(bits, max_bits))?;
    let rhs = build_rhs(&u)?;
    let separations = orbit_separation(&rhs, &u, orbit_bound);
    let named_points = named_point_checks(&u, &rhs);
    let summability = decide_summability(&rhs.b2, &u.q_complex(), orbit_bound)?;
    let witness = match pick_witness(&rhs, &separations, CaseLabel::of(w)) {
        Ok(c) => c,
        Err(()) => return Err(TranscendenceError::Numeric(NumError::Undecided)),
    };
    Ok(ModelAnalysis { weights: w.clone(), uniformization: u, rhs, separations, named_points, summability, witness })
}

/// Run the analysis with doubling precision until every numeric decision
/// resolves.
pub fn analyze(w: &StepWeights, t: &BigRational, prec: Precision, orbit_bound: u64) -> Result<(ModelAnalysis, u32), TranscendenceError> {
    let mut last = None;
    for bits in prec.schedule() {
        match analyze_at(w, t, bits, prec.max_bits, orbit_bound) {
            Ok(a) => return Ok((a, bits)),
            Err(e @ TranscendenceError::Numeric(_))
            | Err(e @ TranscendenceError::Uniformize(UniformizeError::PrecisionExhausted(..)))
            | Err(e @ TranscendenceError::QSum(QSumError::OrbitUndecided(..))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("nonempty schedule"))
}

pub fn precheck(w: &StepWeights, t: &BigRational) -> Result<(), TranscendenceError> {
    if let Degeneracy::Degenerate(c) = classify_degeneracy(w) {
        return Err(TranscendenceError::DegenerateWalk(c));
    }
    let km = build_kernel(w, t)?;
    let cls = genus_classify(&km, 64)?;
    if cls.kind != CurveKind::GenusZero {
        return Err(TranscendenceError::NotGenusZero(cls.kind));
    }
    check_support(w)
}

pub fn verdict(
    w: &StepWeights,
    t: &BigRational,
    prec: Precision,
    orbit_bound: u64,
) -> Result<TranscendenceVerdict, TranscendenceError> {
    precheck(w, t)?;
    let case = CaseLabel::of(w);
    let mut notes = vec![
        "q is normalized to |q| > 1".to_string(),
        "the verdict covers Q(x,0,t) and Q(0,y,t) jointly".to_string(),
    ];
    let (analysis, bits) = match analyze(w, t, prec, orbit_bound) {
        Ok(a) => a,
        Err(TranscendenceError::Numeric(_)) | Err(TranscendenceError::QSum(QSumError::OrbitUndecided(..))) => {
            return Err(TranscendenceError::Numeric(NumError::Undecided));
        }
        Err(e) => return Err(e),
    };
    let mut via_transpose = false;
    let mut transposed = None;
    let mut certificate = analysis.witness.clone();
    let mut bits_used = bits;
    if certificate.is_none() && case == CaseLabel::D11D01Zero {
        // P2 = s^-1(P1) here, both of order 3; the transposed walk has
        // d11 = d10 = 0 and an order-3 lone pole
        let wt = w.transpose();
        let (ta, tb) = analyze(&wt, t, prec, orbit_bound)?;
        certificate = ta.witness.clone();
        bits_used = bits_used.max(tb);
        transposed = Some(ta);
        via_transpose = true;
        notes.push("certificate obtained on the transposed walk (x and y exchanged)".into());
    }
    let summability_agrees = analysis.summability.is_not_summable();
    if !summability_agrees {
        notes.push("q-summability test of b2 did not certify non-summability".into());
    }
    let named_ok = analysis.named_points.iter().all(|(_, ok)| *ok);
    if !named_ok {
        notes.push("some poles did not match their named points".into());
    }
    let conclusion = if certificate.is_some() && summability_agrees && named_ok {
        notes.push("no decoupling functions exist for this walk".into());
        Conclusion::Transcendental
    } else if let SummabilityVerdict::Summable { .. } = analysis.summability {
        Conclusion::Algebraic
    } else {
        Conclusion::Undecided
    };
    Ok(TranscendenceVerdict {
        conclusion,
        case_label: case,
        via_transpose,
        certificate,
        analysis,
        transposed,
        notes,
        bits: bits_used,
    })
}

/// Short description of a summability verdict.
pub fn describe_summability(v: &SummabilityVerdict<CertifiedComplex>) -> String {
    match v {
        SummabilityVerdict::Summable { .. } => "summable".into(),
        SummabilityVerdict::Undecided(r) => format!("undecided: {}", r),
        SummabilityVerdict::NotSummable(NotSummableWitness::AtInfinity { c }) => {
            format!("not summable: residue at infinity {}", c)
        }
        SummabilityVerdict::NotSummable(NotSummableWitness::Residue { order, residue, lone_pole, .. }) => format!(
            "not summable: order-{} q-residue {}{}",
            order,
            residue,
            if *lone_pole { " (lone pole)" } else { "" }
        ),
    }
}

/// Evaluate `b1 + b2` against `(xy)(qs) - (xy)(s)`; used by tests.
pub fn rhs_identity_gap(u: &Uniformization, rhs: &TelescoperRHS, s: &CertifiedComplex) -> Result<bool, UniformizeError> {
    let qs = u.sigma(s);
    let lhs = rhs.b1.eval(s).and_then(|a| rhs.b2.eval(s).map(|b| a.add(&b))).map_err(|_| UniformizeError::PoleOfMap)?;
    let rhs_v = u.x(&qs)?.mul(&u.y(&qs)?).sub(&u.x(s)?.mul(&u.y(s)?));
    Ok(lhs.overlaps(&rhs_v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_labels() {
        use Dir::*;
        assert_eq!(CaseLabel::of(&StepWeights::uniform(&[NW, N, SE])), CaseLabel::D11D10Zero);
        assert_eq!(CaseLabel::of(&StepWeights::uniform(&[NW, E, SE])), CaseLabel::D11D01Zero);
        assert_eq!(CaseLabel::of(&StepWeights::uniform(&[NW, N, E, SE])), CaseLabel::D11ZeroMixed);
        assert_eq!(CaseLabel::of(&StepWeights::uniform(&[NW, NE, SE])), CaseLabel::D11NonZero);
    }

    #[test]
    fn unsupported_support() {
        use Dir::*;
        assert!(check_support(&StepWeights::uniform(&[NW, S, SE])).is_err());
        assert!(check_support(&StepWeights::uniform(&[NW, N, SE])).is_ok());
    }
}

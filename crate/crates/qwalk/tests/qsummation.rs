mod common;

use common::*;
use num_traits::Zero;
use qwalk::numerics::{CertifiedComplex, CertifiedReal};
use qwalk::poly::Poly;
use qwalk::qsummation::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn worked_example_blocks_and_residues() {
    let b = worked_example();
    let q = rat(2, 1);
    let d = partial_fractions(&b, &q, DEFAULT_ORBIT_BOUND).unwrap();
    assert_eq!(d.c, rat(1, 1));
    assert_eq!(d.poly_part, poly(&[rat(0, 1), rat(1, 1)]));
    assert_eq!(d.origin_part, vec![rat(1, 1), rat(2, 1)]);
    assert_eq!(d.blocks.len(), 2);
    let one = d.blocks.iter().position(|b| b.representative == rat(1, 1)).unwrap();
    let five = d.blocks.iter().position(|b| b.representative == rat(5, 1)).unwrap();
    let mut nz: Vec<_> = d.blocks[one]
        .entries
        .iter()
        .filter(|e| !e.alpha.is_zero())
        .map(|e| (e.shift, e.order, e.alpha.clone()))
        .collect();
    nz.sort();
    assert_eq!(nz, vec![(0, 2, rat(3, 1)), (1, 2, rat(-12, 1))]);
    assert_eq!(q_residue(&d, one, 2).unwrap(), rat(0, 1));
    assert_eq!(q_residue(&d, one, 1).unwrap(), rat(0, 1));
    assert_eq!(q_residue(&d, five, 1).unwrap(), rat(1, 1));
    assert_eq!(q_residue_infinity(&d), rat(1, 1));
    match decide_summability(&b, &q, DEFAULT_ORBIT_BOUND).unwrap() {
        SummabilityVerdict::NotSummable(NotSummableWitness::AtInfinity { c }) => assert_eq!(c, rat(1, 1)),
        v => panic!("{:?}", v),
    }
}

#[test]
fn reconstruction_at_sample_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let b = random_f(&mut rng);
        let d = partial_fractions(&b, &rat(2, 1), 200).unwrap();
        let pf = d.to_pf_sum().unwrap();
        for _ in 0..20 {
            let s = rat(rng.gen_range(-1000..1000), 997);
            if let Ok(v) = b.eval(&s) {
                assert_eq!(pf.eval(&s).unwrap(), v);
            }
        }
    }
}

#[test]
fn telescoped_shift_of_simple_pole() {
    // f(qs) - f(s) with f = 1/(s-1): residue q^-1 - q^-1 = 0
    let q = rat(3, 1);
    let f = pole(rat(1, 1), rat(1, 1), 1);
    let b = f.dilate(&q, -1).unwrap().sub(&f).unwrap();
    let d = partial_fractions(&b, &q, 200).unwrap();
    assert_eq!(d.blocks.len(), 1);
    assert!(q_residue(&d, 0, 1).unwrap().is_zero());
    assert!(decide_summability(&b, &q, 200).unwrap().is_summable());
}

#[test]
fn round_trip_and_perturbation() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..40 {
        let q = random_q(&mut rng);
        let f = random_f(&mut rng);
        let b = f.dilate(&q, -1).unwrap().sub(&f).unwrap();
        let SummabilityVerdict::Summable { witness: g } = decide_summability(&b, &q, 200).unwrap() else {
            panic!("not summable");
        };
        let mut diff = None;
        for _ in 0..10 {
            let s = rat(rng.gen_range(-500..500), 499);
            let qs = &q * &s;
            let (Ok(bv), Ok(g1), Ok(g0), Ok(fv)) = (b.eval(&s), g.eval(&qs), g.eval(&s), f.eval(&s)) else {
                continue;
            };
            assert_eq!(g1 - &g0, bv);
            let d = g0 - fv;
            if let Some(prev) = &diff {
                assert_eq!(&d, prev);
            }
            diff = Some(d);
        }
        // an extra pole with a non-lattice location breaks summability
        let bumped = b.add(&pole(rat(1, 7), rat(7, 3) * rat(1000003, 1), 1)).unwrap();
        assert!(decide_summability(&bumped, &q, 200).unwrap().is_not_summable());
    }
}

#[test]
fn lone_poles_are_not_summable() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..40 {
        let b = random_lone_pole(&mut rng);
        let v = decide_summability(&b, &random_q(&mut rng), 200).unwrap();
        assert!(v.is_not_summable(), "{:?}", v);
    }
}

#[test]
fn representative_independence() {
    // residue of 1/(s-2)^2 - 4/(s-4)^2 at q = 2 vanishes whichever pole is taken as base
    let q = rat(2, 1);
    let b = pole(rat(1, 1), rat(2, 1), 2).sub(&pole(rat(4, 1), rat(4, 1), 2)).unwrap();
    let d = partial_fractions(&b, &q, 200).unwrap();
    assert!(q_residue(&d, 0, 2).unwrap().is_zero());
    let b2 = pole(rat(1, 1), rat(2, 1), 2).sub(&pole(rat(1, 1), rat(4, 1), 2)).unwrap();
    let d2 = partial_fractions(&b2, &q, 200).unwrap();
    assert!(!q_residue(&d2, 0, 2).unwrap().is_zero());
}

#[test]
fn off_lattice_poles_form_separate_blocks() {
    let b = pole(rat(1, 1), rat(1, 1), 1).add(&pole(rat(1, 1), rat(3, 1) * rat(7, 5), 1)).unwrap();
    let d = partial_fractions(&b, &rat(2, 1), 200).unwrap();
    assert_eq!(d.blocks.len(), 2);
    assert_eq!(d.separations.len(), 1);
}

#[test]
fn certified_coefficients() {
    let bits = 128;
    let c = |n: i64, m: i64| CertifiedComplex::from_rational(&rat(n, m), bits);
    let q = c(5, 2);
    // 1/(s - sqrt 2) - q^-1/(s - sqrt 2 / q), tagged as one orbit
    let r2 = CertifiedComplex::real(CertifiedReal::from_i64(2).with_precision(bits).sqrt().unwrap());
    let f = RatFunc::new(Poly::constant(c(1, 1)), c(1, 1), 0, vec![Root::tagged(r2.clone(), 1, 0, 0)]);
    let b = f.dilate(&q, -1).unwrap().sub(&f).unwrap();
    let v = decide_summability(&b, &q, 200).unwrap();
    // the interval residue cannot be proved zero
    assert!(matches!(v, SummabilityVerdict::Undecided(_)), "{:?}", v);
    let lone = RatFunc::new(Poly::constant(c(1, 1)), c(1, 1), 0, vec![Root::new(r2, 2)]);
    assert!(decide_summability(&lone, &q, 200).unwrap().is_not_summable());
}

#[test]
fn rejects_unit_q() {
    let b = pole(rat(1, 1), rat(1, 1), 1);
    assert!(matches!(partial_fractions(&b, &rat(-1, 1), 200), Err(QSumError::QOnUnitCircle)));
}

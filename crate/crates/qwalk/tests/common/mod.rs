#![allow(dead_code)]

use num_rational::BigRational;
use qwalk::kernel::{Dir, StepWeights};
use qwalk::poly::Poly;
use qwalk::qsummation::RatFunc;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn poly(v: &[BigRational]) -> Poly<BigRational> {
    Poly::new(v.to_vec())
}

/// The five step sets of the studied family, unweighted.
pub fn five_step_sets() -> Vec<Vec<Dir>> {
    use Dir::*;
    vec![
        vec![NW, N, SE],
        vec![NW, N, E, SE],
        vec![NW, NE, SE],
        vec![NW, N, NE, SE],
        vec![NW, N, NE, E, SE],
    ]
}

pub fn five_models() -> Vec<StepWeights> {
    five_step_sets().iter().map(|d| StepWeights::uniform(d)).collect()
}

pub fn random_weighting(rng: &mut ChaCha8Rng, dirs: &[Dir]) -> StepWeights {
    let e: Vec<_> = dirs.iter().map(|&d| (d, rat(rng.gen_range(1..20), rng.gen_range(1..20)))).collect();
    StepWeights::from_dirs(&e).unwrap()
}

/// `a / (s - r)^j` over the rationals.
pub fn pole(a: BigRational, r: BigRational, j: u32) -> RatFunc<BigRational> {
    let f = poly(&[-r, rat(1, 1)]);
    let factors: Vec<_> = (0..j).map(|_| f.clone()).collect();
    RatFunc::from_factors(poly(&[a]), &factors).unwrap()
}

fn nonzero(rng: &mut ChaCha8Rng) -> BigRational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-9..=9);
    }
    rat(n, rng.gen_range(1..5))
}

/// A random rational function with rational poles of order at most 2,
/// a polynomial part and a Laurent tail at the origin.
pub fn random_f(rng: &mut ChaCha8Rng) -> RatFunc<BigRational> {
    let mut f = RatFunc::polynomial(poly(&[nonzero(rng), nonzero(rng), rat(rng.gen_range(-3..=3), 1)]));
    for _ in 0..rng.gen_range(1..4) {
        f = f.add(&pole(nonzero(rng), nonzero(rng), rng.gen_range(1..=2))).unwrap();
    }
    if rng.gen_bool(0.5) {
        let tail = RatFunc::from_factors(poly(&[nonzero(rng)]), &[poly(&[rat(0, 1), rat(1, 1)])]).unwrap();
        f = f.add(&tail).unwrap();
    }
    f
}

pub fn random_q(rng: &mut ChaCha8Rng) -> BigRational {
    [rat(3, 2), rat(2, 1), rat(5, 2)][rng.gen_range(0..3)].clone()
}

/// A pole of order `m` plus lower-order poles elsewhere: never summable.
pub fn random_lone_pole(rng: &mut ChaCha8Rng) -> RatFunc<BigRational> {
    let m = rng.gen_range(1..=3);
    let mut b = pole(nonzero(rng), nonzero(rng), m);
    if m > 1 {
        for _ in 0..rng.gen_range(0..3) {
            b = b.add(&pole(nonzero(rng), nonzero(rng), rng.gen_range(1..m))).unwrap();
        }
    }
    b
}

/// `1 + s + (s+2)/s^2 + 3/(s-1)^2 - 12/(s-2)^2 + 1/(s-5)`.
pub fn worked_example() -> RatFunc<BigRational> {
    let s = poly(&[rat(0, 1), rat(1, 1)]);
    let mut b = RatFunc::polynomial(poly(&[rat(1, 1), rat(1, 1)]));
    b = b.add(&RatFunc::from_factors(poly(&[rat(2, 1), rat(1, 1)]), &[s.clone(), s]).unwrap()).unwrap();
    b = b.add(&pole(rat(3, 1), rat(1, 1), 2)).unwrap();
    b = b.add(&pole(rat(-12, 1), rat(2, 1), 2)).unwrap();
    b.add(&pole(rat(1, 1), rat(5, 1), 1)).unwrap()
}

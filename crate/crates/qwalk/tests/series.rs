mod common;

use std::collections::HashMap;

use common::{five_models, random_weighting, rat};
use num_rational::BigRational;
use num_traits::{One, Zero};
use qwalk::kernel::{build_kernel, genus_classify, Dir, StepWeights};
use qwalk::numerics::Precision;
use qwalk::series::{check_functional_equation, check_qdiff_equation, default_samples, enumerate, kernel_poly};
use qwalk::transcendence::build_rhs;
use qwalk::uniformize::build_uniformization;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Sum of weights of all step sequences of length `k` staying in the
/// quarter plane, by depth-first search.
fn brute_force(w: &StepWeights, k: usize) -> HashMap<(i64, i64), BigRational> {
    fn go(
        w: &StepWeights,
        steps: &[(i32, i32)],
        left: usize,
        pos: (i64, i64),
        acc: BigRational,
        out: &mut HashMap<(i64, i64), BigRational>,
    ) {
        if left == 0 {
            *out.entry(pos).or_insert_with(BigRational::zero) += acc;
            return;
        }
        for &(a, b) in steps {
            let p = (pos.0 + a as i64, pos.1 + b as i64);
            if p.0 >= 0 && p.1 >= 0 {
                go(w, steps, left - 1, p, &acc * w.get(a, b), out);
            }
        }
    }
    let mut out = HashMap::new();
    go(w, &w.support(), k, (0, 0), BigRational::one(), &mut out);
    out
}

fn with_lazy_step(w: &StepWeights, d00: BigRational) -> StepWeights {
    let mut e: Vec<_> = w.support().iter().map(|&(i, j)| ((i, j), w.get(i, j).clone())).collect();
    e.push(((0, 0), d00));
    StepWeights::new(&e).unwrap()
}

#[test]
fn small_coefficients() {
    use Dir::*;
    let w = StepWeights::uniform(&[NW, N, SE]);
    let st = enumerate(&w, 4);
    assert_eq!(st.coeff(0, 0, 0), BigRational::one());
    assert_eq!(st.coeff(0, 1, 1), rat(1, 3));
    assert_eq!(st.coeff(0, 0, 2), BigRational::zero());
    assert_eq!(st.coeff(1, 0, 2), rat(1, 9));
    assert_eq!(st.coeff(1, 1, 2), BigRational::zero());
}

#[test]
fn matches_brute_force() {
    let mut models = five_models();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    models.push(with_lazy_step(&random_weighting(&mut rng, &[Dir::NW, Dir::N, Dir::NE, Dir::E, Dir::SE]), rat(1, 7)));
    models.push(StepWeights::uniform(&[Dir::SW, Dir::NE, Dir::S, Dir::N]));
    for w in models {
        let st = enumerate(&w, 6);
        for k in 0..=6 {
            let bf = brute_force(&w, k);
            for i in 0..=k as i64 + 1 {
                for j in 0..=k as i64 + 1 {
                    let want = bf.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero);
                    assert_eq!(st.coeff(i, j, k), want, "{} at ({},{},{})", w, i, j, k);
                }
            }
        }
    }
}

#[test]
fn probability_properties() {
    for w in five_models() {
        let st = enumerate(&w, 15);
        let mut last = BigRational::one();
        for k in 0..=15 {
            let m = st.layer_mass(k);
            assert!(m <= last);
            last = m;
            for (_, _, kk, c) in st.nonzero() {
                if kk == k {
                    assert!(c > BigRational::zero() && c <= BigRational::one());
                }
            }
        }
    }
}

#[test]
fn functional_equation_holds() {
    let t = rat(1, 3);
    let mut models = five_models();
    models.push(with_lazy_step(&StepWeights::uniform(&[Dir::N, Dir::S, Dir::E, Dir::W, Dir::SW]), rat(1, 5)));
    for w in models {
        let km = build_kernel(&w, &t).unwrap();
        let st = enumerate(&w, 12);
        let rep = check_functional_equation(&st, &km).unwrap();
        assert_eq!(rep.sw_term_present, w.has(-1, -1));
    }
}

#[test]
fn functional_equation_detects_corruption() {
    let w = StepWeights::uniform(&[Dir::NW, Dir::N, Dir::SE]);
    let km = build_kernel(&w, &rat(1, 3)).unwrap();
    let st = enumerate(&w, 6);
    let other = enumerate(&StepWeights::uniform(&[Dir::NW, Dir::NE, Dir::SE]), 6);
    assert!(check_functional_equation(&other, &km).is_err());
    assert!(check_functional_equation(&st, &km).is_ok());
    assert!(!kernel_poly(&w).is_zero());
}

#[test]
fn q_difference_equations() {
    let mut models = five_models();
    models.push(StepWeights::from_dirs(&[(Dir::NW, rat(1, 2)), (Dir::N, rat(1, 4)), (Dir::SE, rat(1, 4))]).unwrap());
    for w in models {
        for t in [rat(157, 512), rat(291, 512)] {
            let km = build_kernel(&w, &t).unwrap();
            let cls = genus_classify(&km, 128).unwrap();
            let u = build_uniformization(&km, &cls, Precision::fixed(256)).unwrap();
            let rhs = build_rhs(&u).unwrap();
            let samples = default_samples(&u);
            assert!(samples.len() >= 3, "{} at t = {}", w, t);
            let st = enumerate(&w, 30);
            let rep = check_qdiff_equation(&st, &u, &rhs, &samples).unwrap();
            assert!(rep.within_bound(), "{} at t = {}", w, t);
        }
    }
}

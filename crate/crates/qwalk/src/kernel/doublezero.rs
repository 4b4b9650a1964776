//! Randomized check that the eight genus-zero configurations are exactly the
//! supports producing a double zero of the y-discriminant.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{build_kernel, classify_degeneracy, double_zero, Degeneracy, Dir, StepWeights};

use Dir::*;

/// The eight step configurations whose kernel curve has genus zero.
pub const CONFIGURATIONS: [&[Dir]; 8] = [
    &[N, NE, E, SE, S],
    &[NW, N, NE, E, SE],
    &[NW, N, NE, W, E],
    &[NE, E, SW, S, SE],
    &[W, E, SW, S, SE],
    &[NW, NE, W, N, SW],
    &[NW, N, W, SW, S],
    &[NW, W, SW, S, SE],
];

pub fn configuration_supports() -> Vec<Vec<(i32, i32)>> {
    CONFIGURATIONS.iter().map(|c| c.iter().map(|d| d.offset()).collect()).collect()
}

fn inside_some_configuration(steps: &[(i32, i32)]) -> bool {
    configuration_supports().iter().any(|c| steps.iter().all(|s| c.contains(s)))
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct DoubleZeroReport {
    /// `(passed, failed)` per configuration.
    pub configurations: Vec<(usize, usize)>,
    /// `(passed, failed)` over random supports outside every configuration.
    pub others: (usize, usize),
    pub failures: Vec<String>,
}

impl DoubleZeroReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_weight(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(1..=97)), BigInt::from(rng.gen_range(1..=31)))
}

fn random_weights(rng: &mut ChaCha8Rng, dirs: &[(i32, i32)]) -> StepWeights {
    let mut e: Vec<_> = dirs.iter().map(|&p| (p, random_weight(rng))).collect();
    if rng.gen_bool(0.5) {
        e.push(((0, 0), random_weight(rng)));
    }
    StepWeights::new(&e).expect("positive weights")
}

fn has_double_zero_y(w: &StepWeights) -> Result<bool, String> {
    let km = build_kernel(w, &BigRational::new(1.into(), 3.into())).map_err(|e| e.to_string())?;
    Ok(double_zero(&km.disc_y).present())
}

pub fn verify_double_zero_classification(n_samples: usize, seed: u64) -> DoubleZeroReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = DoubleZeroReport::default();
    for (k, conf) in configuration_supports().iter().enumerate() {
        let (mut ok, mut bad) = (0, 0);
        for _ in 0..n_samples {
            let w = random_weights(&mut rng, conf);
            match has_double_zero_y(&w) {
                Ok(true) => ok += 1,
                other => {
                    bad += 1;
                    rep.failures.push(format!("configuration {}: {} gave {:?}", k + 1, w, other));
                }
            }
        }
        rep.configurations.push((ok, bad));
    }
    let all: Vec<(i32, i32)> = Dir::ALL.iter().map(|d| d.offset()).collect();
    let (mut ok, mut bad) = (0, 0);
    while ok + bad < n_samples {
        let steps: Vec<_> = all.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if steps.is_empty() || inside_some_configuration(&steps) {
            continue;
        }
        let w = random_weights(&mut rng, &steps);
        if classify_degeneracy(&w) != Degeneracy::NonDegenerate {
            continue;
        }
        match has_double_zero_y(&w) {
            Ok(false) => ok += 1,
            other => {
                bad += 1;
                rep.failures.push(format!("support {} gave {:?}", w, other));
            }
        }
    }
    rep.others = (ok, bad);
    rep
}

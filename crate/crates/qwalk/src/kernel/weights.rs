use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::KernelError;

/// The eight compass steps, `(i, j)` with `i` the x-increment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

impl Dir {
    pub const ALL: [Dir; 8] = [Dir::N, Dir::NE, Dir::E, Dir::SE, Dir::S, Dir::SW, Dir::W, Dir::NW];

    pub fn offset(self) -> (i32, i32) {
        match self {
            Dir::N => (0, 1),
            Dir::NE => (1, 1),
            Dir::E => (1, 0),
            Dir::SE => (1, -1),
            Dir::S => (0, -1),
            Dir::SW => (-1, -1),
            Dir::W => (-1, 0),
            Dir::NW => (-1, 1),
        }
    }

    pub fn from_offset(i: i32, j: i32) -> Option<Dir> {
        Dir::ALL.into_iter().find(|d| d.offset() == (i, j))
    }

    pub fn parse(s: &str) -> Option<Dir> {
        Dir::ALL.into_iter().find(|d| d.name() == s)
    }

    pub fn name(self) -> &'static str {
        match self {
            Dir::N => "N",
            Dir::NE => "NE",
            Dir::E => "E",
            Dir::SE => "SE",
            Dir::S => "S",
            Dir::SW => "SW",
            Dir::W => "W",
            Dir::NW => "NW",
        }
    }
}

/// Weights `d[i][j]` for `(i, j)` in `{-1,0,1}^2`, normalized to sum 1.
#[derive(Clone, Debug, PartialEq)]
pub struct StepWeights {
    d: [[BigRational; 3]; 3],
    /// Original total when the input did not sum to 1.
    rescaled_from: Option<BigRational>,
}

impl StepWeights {
    /// Build from `((i, j), weight)` pairs; unspecified entries are 0.
    pub fn new(entries: &[((i32, i32), BigRational)]) -> Result<Self, KernelError> {
        let mut d: [[BigRational; 3]; 3] = Default::default();
        for ((i, j), w) in entries {
            if !(-1..=1).contains(i) || !(-1..=1).contains(j) {
                return Err(KernelError::InvalidWeight(format!("step ({},{}) is not small", i, j)));
            }
            if w.is_negative() {
                return Err(KernelError::InvalidWeight(format!("negative weight at ({},{})", i, j)));
            }
            d[(i + 1) as usize][(j + 1) as usize] = w.clone();
        }
        let total: BigRational = d.iter().flatten().sum();
        if total.is_zero() {
            return Err(KernelError::InvalidWeight("all weights are zero".into()));
        }
        let rescaled_from = if total.is_one() {
            None
        } else {
            for row in d.iter_mut() {
                for w in row.iter_mut() {
                    *w = &*w / &total;
                }
            }
            Some(total)
        };
        Ok(StepWeights { d, rescaled_from })
    }

    /// Equal weights on the given compass steps.
    pub fn uniform(dirs: &[Dir]) -> Self {
        let one = BigRational::one();
        let e: Vec<_> = dirs.iter().map(|d| (d.offset(), one.clone())).collect();
        StepWeights::new(&e).expect("nonempty step set")
    }

    pub fn from_dirs(entries: &[(Dir, BigRational)]) -> Result<Self, KernelError> {
        let e: Vec<_> = entries.iter().map(|(d, w)| (d.offset(), w.clone())).collect();
        StepWeights::new(&e)
    }

    pub fn get(&self, i: i32, j: i32) -> &BigRational {
        &self.d[(i + 1) as usize][(j + 1) as usize]
    }

    pub fn rescaled_from(&self) -> Option<&BigRational> {
        self.rescaled_from.as_ref()
    }

    /// Steps `(i, j) != (0, 0)` with nonzero weight.
    pub fn step_set(&self) -> Vec<(i32, i32)> {
        self.support().into_iter().filter(|&p| p != (0, 0)).collect()
    }

    /// All `(i, j)` with nonzero weight, including `(0, 0)`.
    pub fn support(&self) -> Vec<(i32, i32)> {
        let mut out = Vec::new();
        for i in -1..=1 {
            for j in -1..=1 {
                if !self.get(i, j).is_zero() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn has(&self, i: i32, j: i32) -> bool {
        !self.get(i, j).is_zero()
    }

    /// Swap the roles of x and y.
    pub fn transpose(&self) -> Self {
        let mut d: [[BigRational; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                d[j][i] = self.d[i][j].clone();
            }
        }
        StepWeights { d, rescaled_from: self.rescaled_from.clone() }
    }

    pub fn as_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        for i in -1..=1 {
            for j in -1..=1 {
                m.insert(format!("d[{},{}]", i, j), self.get(i, j).to_string());
            }
        }
        m
    }
}

impl fmt::Display for StepWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, j) in self.support() {
            let name = Dir::from_offset(i, j).map(|d| d.name().to_string()).unwrap_or_else(|| "0".into());
            parts.push(format!("{}:{}", name, self.get(i, j)));
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

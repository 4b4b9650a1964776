//! Decision procedures for small-step quarter-plane walks whose kernel curve
//! has genus zero: kernel analysis, uniformization, q-difference telescoping
//! and a certified transcendence verdict for the section generating series.

pub mod kernel;
pub mod numerics;
pub mod poly;
pub mod qsummation;
pub mod scalar;
pub mod series;
pub mod transcendence;
pub mod uniformize;

//! Inputs shared by the benchmarks.

use unicircle::families::{build_p, h_r_of};
use unicircle::{FamilyId, Polynomial};

pub const PRECISION: u32 = 256;

pub fn p_k(k: usize) -> Polynomial {
    build_p(k, PRECISION).expect("P_k builds for k >= 1")
}

pub fn h4() -> Polynomial {
    h_r_of(FamilyId::P, 4, PRECISION).expect("h_4 builds")
}

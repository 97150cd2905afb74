//! Single-constraint WCSP instances on six bits whose QAOA energies agree at
//! every level although the instances are not isomorphic.
//!
//! `H33` is satisfied by the edge indicators of two disjoint triangles,
//! `H6` by those of a six-cycle. Bit strings list qubit 0 first.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::sim::{parse_bitstring, qaoa_energy, AngleSchedule, DiagonalCost};
use crate::stats::mix;
use crate::{Error, Result};

pub const H33_SATISFYING: [&str; 6] = ["110000", "011000", "101000", "000110", "000011", "000101"];
pub const H6_SATISFYING: [&str; 6] = ["110000", "011000", "001100", "000110", "000011", "100001"];

/// The 0/1 cost that is 1 exactly on the listed bit strings.
pub fn indicator_cost(n: usize, satisfying: &[&str]) -> Result<DiagonalCost> {
    let mut values = vec![0u32; 1 << n];
    for s in satisfying {
        if s.len() != n {
            return Err(Error::InvalidArgument(format!("`{s}` does not have {n} bits")));
        }
        values[parse_bitstring(s)?] = 1;
    }
    DiagonalCost::new(n, values)
}

/// The 0/1 cost satisfied by the indicator vectors of the given edges.
pub fn edge_indicator_cost(n: usize, edges: &[(usize, usize)]) -> Result<DiagonalCost> {
    let mut values = vec![0u32; 1 << n];
    for &(a, b) in edges {
        if a >= n || b >= n || a == b {
            return Err(Error::InvalidArgument(format!("bad edge ({a}, {b})")));
        }
        values[1 << a | 1 << b] = 1;
    }
    DiagonalCost::new(n, values)
}

pub fn build_h33() -> DiagonalCost {
    indicator_cost(6, &H33_SATISFYING).expect("static instance")
}

pub fn build_h6() -> DiagonalCost {
    indicator_cost(6, &H6_SATISFYING).expect("static instance")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SCount {
    /// Every reference assignment sees the same count.
    Uniform(u64),
    /// The count depends on the reference assignment.
    NonUniform { min: u64, max: u64 },
}

/// For each `x1` of weight `w1` with `C(x1) = eps1`, counts the `x2` of weight
/// `w2` with `C(x2) = eps2` at Hamming distance `d` from `x1`.
pub fn s_count(c: &DiagonalCost, eps1: u32, eps2: u32, w1: usize, w2: usize, d: usize) -> Result<SCount> {
    let dim = c.dim();
    let counts: Vec<u64> = (0..dim)
        .filter(|&x1| x1.count_ones() as usize == w1 && c.value(x1) == eps1)
        .map(|x1| {
            (0..dim)
                .filter(|&x2| {
                    x2.count_ones() as usize == w2 && c.value(x2) == eps2 && (x1 ^ x2).count_ones() as usize == d
                })
                .count() as u64
        })
        .collect();
    let (Some(&min), Some(&max)) = (counts.iter().min(), counts.iter().max()) else {
        return Err(Error::NoReferenceAssignment { weight: w1, cost: eps1 });
    };
    Ok(if min == max {
        SCount::Uniform(min)
    } else {
        SCount::NonUniform { min, max }
    })
}

impl SCount {
    /// The common count, or `None` when it is not well defined.
    pub fn value(self) -> Option<u64> {
        match self {
            SCount::Uniform(v) => Some(v),
            SCount::NonUniform { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SCountEntry {
    pub eps1: u32,
    pub eps2: u32,
    pub w1: usize,
    pub w2: usize,
    pub d: usize,
    /// `None` when no reference assignment exists.
    pub count: Option<SCount>,
}

/// `s_count` over `eps ∈ {0,1}²` and `w1, w2, d ∈ 0..=n`.
pub fn s_count_grid(c: &DiagonalCost) -> Vec<SCountEntry> {
    let n = c.n();
    let mut out = Vec::new();
    for eps1 in 0..2 {
        for eps2 in 0..2 {
            for w1 in 0..=n {
                for w2 in 0..=n {
                    for d in 0..=n {
                        out.push(SCountEntry {
                            eps1,
                            eps2,
                            w1,
                            w2,
                            d,
                            count: s_count(c, eps1, eps2, w1, w2, d).ok(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Largest `|E(c1) − E(c2)|` over shared random schedules, `trials` at each
/// level `0..=p_max`.
pub fn energy_gap_max(c1: &DiagonalCost, c2: &DiagonalCost, p_max: usize, trials: usize, seed: u64) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in 0..=p_max {
        for t in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, (p * trials + t) as u64));
            let a = AngleSchedule::random(p, std::f64::consts::TAU, &mut rng);
            worst = worst.max((qaoa_energy(c1, &a)? - qaoa_energy(c2, &a)?).abs());
        }
    }
    Ok(worst)
}

/// [`energy_gap_max`] for the pair `H33`, `H6`.
pub fn wcsp_energy_gap(p_max: usize, trials: usize, seed: u64) -> Result<f64> {
    energy_gap_max(&build_h33(), &build_h6(), p_max, trials, seed)
}

/// Level-1 energy as a sum over pairs of Feynman paths `z0 → z1`, `z0' → z1`
/// ending in the same assignment `z1`.
pub fn feynman_path_energy_p1(c: &DiagonalCost, gamma: f64, beta: f64) -> f64 {
    let n = c.n();
    let dim = c.dim();
    let (s, co) = beta.sin_cos();
    // transition amplitude (−i sin β)^δ (cos β)^{n−δ}
    let amp: Vec<Complex64> = (0..=n)
        .map(|d| Complex64::new(0.0, -s).powi(d as i32) * co.powi((n - d) as i32))
        .collect();
    let phase = |z: usize| Complex64::from_polar(1.0, -gamma * f64::from(c.value(z)));
    let mut total = Complex64::new(0.0, 0.0);
    for z1 in (0..dim).filter(|&z| c.value(z) > 0) {
        let mut sum = Complex64::new(0.0, 0.0);
        for z0 in 0..dim {
            let a = phase(z0) * amp[(z0 ^ z1).count_ones() as usize];
            for zp in 0..dim {
                let b = phase(zp) * amp[(zp ^ z1).count_ones() as usize];
                sum += a * b.conj();
            }
        }
        total += sum * f64::from(c.value(z1));
    }
    total.re / dim as f64
}

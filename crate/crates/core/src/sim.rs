//! Dense state-vector QAOA for integer-valued diagonal costs.
//!
//! Basis index `z` encodes qubit `v` in bit `v` (`(z >> v) & 1`). Bit strings
//! written as text, e.g. `"110000"`, list qubit 0 first.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::graph::Graph;
use crate::{Error, Result};

/// Default cap on the number of qubits a state may have.
pub const DEFAULT_MAX_QUBITS: usize = 20;

/// `p` pairs of angles; layer `q` applies `gamma[q]` and then `beta[q]`.
///
/// Angles are reduced into `[0, 2π)` on construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleSchedule {
    gamma: Vec<f64>,
    beta: Vec<f64>,
}

impl AngleSchedule {
    pub fn new(gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if gamma.len() != beta.len() {
            return Err(Error::InvalidSchedule(format!(
                "{} gamma values but {} beta values",
                gamma.len(),
                beta.len()
            )));
        }
        if gamma.iter().chain(&beta).any(|a| !a.is_finite()) {
            return Err(Error::InvalidSchedule("angles must be finite".into()));
        }
        let wrap = |v: Vec<f64>| -> Vec<f64> {
            v.into_iter()
                .map(|a| {
                    let r = a.rem_euclid(TAU);
                    // rem_euclid can round up to exactly TAU
                    if r >= TAU {
                        0.0
                    } else {
                        r
                    }
                })
                .collect()
        };
        Ok(Self {
            gamma: wrap(gamma),
            beta: wrap(beta),
        })
    }

    /// The level-0 schedule.
    pub fn empty() -> Self {
        Self {
            gamma: Vec::new(),
            beta: Vec::new(),
        }
    }

    /// Uniform angles in `[0, range)`; `range = 2π` is the default sampling.
    pub fn random<R: Rng + ?Sized>(p: usize, range: f64, rng: &mut R) -> Self {
        let gamma = (0..p).map(|_| rng.gen::<f64>() * range).collect();
        let beta = (0..p).map(|_| rng.gen::<f64>() * range).collect();
        Self::new(gamma, beta).expect("sampled angles are finite")
    }

    pub fn p(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn layers(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.gamma.iter().copied().zip(self.beta.iter().copied())
    }
}

/// A materialised cost table `z -> C(z)` over `n` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalCost {
    n: usize,
    values: Vec<u32>,
    max_value: u32,
}

impl DiagonalCost {
    pub fn new(n: usize, values: Vec<u32>) -> Result<Self> {
        check_qubits(n, 30)?;
        if values.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                got: values.len(),
            });
        }
        let max_value = values.iter().copied().max().unwrap_or(0);
        Ok(Self { n, values, max_value })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> u32) -> Result<Self> {
        check_qubits(n, 30)?;
        Self::new(n, (0..1usize << n).map(f).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn value(&self, z: usize) -> u32 {
        self.values[z]
    }

    pub fn max_value(&self) -> u32 {
        self.max_value
    }

    pub fn min_value(&self) -> u32 {
        self.values.iter().copied().min().unwrap_or(0)
    }
}

/// Uncut-edge count `C(z)`; `max_value` is the edge count.
pub fn maxcut_cost(g: &Graph) -> Result<DiagonalCost> {
    let n = g.n();
    check_qubits(n, 30)?;
    let mut values = vec![0u32; 1 << n];
    for &(u, v) in g.edges() {
        for (z, c) in values.iter_mut().enumerate() {
            if (z >> u) & 1 == (z >> v) & 1 {
                *c += 1;
            }
        }
    }
    Ok(DiagonalCost {
        n,
        values,
        max_value: g.edge_count() as u32,
    })
}

/// Parses a bit string listing qubit 0 first.
pub fn parse_bitstring(s: &str) -> Result<usize> {
    s.chars().enumerate().try_fold(0usize, |acc, (i, ch)| match ch {
        '0' => Ok(acc),
        '1' => Ok(acc | 1 << i),
        _ => Err(Error::InvalidArgument(format!("`{s}` is not a bit string"))),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amp: Vec<Complex64>,
}

impl PureState {
    pub fn from_amplitudes(n: usize, amp: Vec<Complex64>) -> Result<Self> {
        if amp.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                got: amp.len(),
            });
        }
        Ok(Self { n, amp })
    }

    /// The computational basis state `|z>`.
    pub fn basis(n: usize, z: usize) -> Result<Self> {
        check_qubits(n, DEFAULT_MAX_QUBITS)?;
        let mut amp = vec![Complex64::new(0.0, 0.0); 1 << n];
        *amp.get_mut(z)
            .ok_or_else(|| Error::InvalidArgument(format!("basis index {z} out of range")))? = Complex64::new(1.0, 0.0);
        Ok(Self { n, amp })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.amp.iter().map(|a| a.norm_sqr())
    }

    /// Multiplies each amplitude by `exp(-i γ C(z))`.
    pub fn apply_cost_phase(&mut self, c: &DiagonalCost, gamma: f64) -> Result<()> {
        check_dims(self.amp.len(), c.dim())?;
        let phases: Vec<Complex64> = (0..=c.max_value)
            .map(|k| Complex64::from_polar(1.0, -gamma * f64::from(k)))
            .collect();
        for (a, &k) in self.amp.iter_mut().zip(&c.values) {
            *a *= phases[k as usize];
        }
        Ok(())
    }

    /// Applies `exp(-i β X)` to every qubit.
    pub fn apply_mixer(&mut self, beta: f64) {
        let (s, c) = beta.sin_cos();
        for q in 0..self.n {
            let stride = 1usize << q;
            for block in self.amp.chunks_exact_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    // c·x - i s·y and c·y - i s·x
                    *a = Complex64::new(c * x.re + s * y.im, c * x.im - s * y.re);
                    *b = Complex64::new(c * y.re + s * x.im, c * y.im - s * x.re);
                }
            }
        }
    }

    /// `Σ_z C(z) |amp(z)|²`.
    pub fn energy(&self, c: &DiagonalCost) -> Result<f64> {
        check_dims(self.amp.len(), c.dim())?;
        Ok(self
            .amp
            .iter()
            .zip(&c.values)
            .map(|(a, &k)| f64::from(k) * a.norm_sqr())
            .sum())
    }
}

/// The uniform superposition on `n` qubits.
pub fn plus_state(n: usize) -> Result<PureState> {
    check_qubits(n, DEFAULT_MAX_QUBITS)?;
    let dim = 1usize << n;
    let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
    Ok(PureState { n, amp: vec![a; dim] })
}

pub fn apply_cost_phase(s: &PureState, c: &DiagonalCost, gamma: f64) -> Result<PureState> {
    let mut out = s.clone();
    out.apply_cost_phase(c, gamma)?;
    Ok(out)
}

pub fn apply_mixer(s: &PureState, beta: f64) -> PureState {
    let mut out = s.clone();
    out.apply_mixer(beta);
    out
}

/// The level-`p` QAOA state for cost `c`.
pub fn qaoa_state(c: &DiagonalCost, a: &AngleSchedule) -> Result<PureState> {
    qaoa_state_capped(c, a, DEFAULT_MAX_QUBITS)
}

/// As [`qaoa_state`] with an explicit qubit cap.
pub fn qaoa_state_capped(c: &DiagonalCost, a: &AngleSchedule, max_qubits: usize) -> Result<PureState> {
    check_qubits(c.n, max_qubits)?;
    let dim = c.dim();
    let mut state = PureState {
        n: c.n,
        amp: vec![Complex64::new((dim as f64).sqrt().recip(), 0.0); dim],
    };
    for (gamma, beta) in a.layers() {
        state.apply_cost_phase(c, gamma)?;
        state.apply_mixer(beta);
    }
    Ok(state)
}

/// `<ψ|C|ψ>`.
pub fn exact_energy(s: &PureState, c: &DiagonalCost) -> Result<f64> {
    s.energy(c)
}

/// Convenience: the QAOA energy of `c` under schedule `a`.
pub fn qaoa_energy(c: &DiagonalCost, a: &AngleSchedule) -> Result<f64> {
    qaoa_state(c, a)?.energy(c)
}

/// Shot-based estimate: measures `shots` bit strings from the QAOA state and
/// averages their cost.
pub fn sampled_energy<R: Rng + ?Sized>(c: &DiagonalCost, a: &AngleSchedule, shots: usize, rng: &mut R) -> Result<f64> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let state = qaoa_state(c, a)?;
    let mut cdf = Vec::with_capacity(state.amp.len());
    let mut acc = 0.0;
    for p in state.probabilities() {
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    let last = cdf.len() - 1;
    let sum: u64 = (0..shots)
        .map(|_| {
            let u = rng.gen::<f64>() * total;
            let z = cdf.partition_point(|&x| x <= u).min(last);
            u64::from(c.values[z])
        })
        .sum();
    Ok(sum as f64 / shots as f64)
}

pub(crate) fn check_qubits(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::SizeCap {
            what: "qubit count",
            size: n,
            cap,
        });
    }
    Ok(())
}

fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn sched(g: &[f64], b: &[f64]) -> AngleSchedule {
        AngleSchedule::new(g.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn maxcut_values() {
        let p2 = maxcut_cost(&generate("path:2").unwrap()).unwrap();
        assert_eq!(p2.value(parse_bitstring("01").unwrap()), 0);
        assert_eq!(p2.value(parse_bitstring("00").unwrap()), 1);
        let c3 = maxcut_cost(&generate("cycle:3").unwrap()).unwrap();
        assert_eq!(c3.value(parse_bitstring("000").unwrap()), 3);
        assert_eq!(c3.value(parse_bitstring("001").unwrap()), 1);
        let c5 = maxcut_cost(&generate("cycle:5").unwrap()).unwrap();
        assert_eq!(c5.min_value(), 1);
        assert_eq!(c5.max_value(), 5);
    }

    #[test]
    fn schedule_validation() {
        assert!(AngleSchedule::new(vec![0.1], vec![]).is_err());
        assert!(AngleSchedule::new(vec![f64::NAN], vec![0.0]).is_err());
        let s = sched(&[-0.5], &[7.0]);
        assert!(s.gamma()[0] >= 0.0 && s.gamma()[0] < TAU);
        assert!((s.beta()[0] - (7.0 - TAU)).abs() < 1e-15);
    }

    #[test]
    fn plus_state_basics() {
        let s = plus_state(1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0].re - h).abs() < 1e-15);
        assert!((s.amplitudes()[1].re - h).abs() < 1e-15);
        let s0 = plus_state(0).unwrap();
        assert_eq!(s0.amplitudes(), &[Complex64::new(1.0, 0.0)]);
        for spec in ["cycle:6", "petersen", "dragon", "complete:5"] {
            let g = generate(spec).unwrap();
            let c = maxcut_cost(&g).unwrap();
            let e = plus_state(g.n()).unwrap().energy(&c).unwrap();
            assert!((e - g.edge_count() as f64 / 2.0).abs() < 1e-12);
        }
        assert!(matches!(plus_state(21), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn cost_phase_identities() {
        let g = generate("dragon").unwrap();
        let c = maxcut_cost(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = qaoa_state(&c, &AngleSchedule::random(2, TAU, &mut rng)).unwrap();
        assert_eq!(apply_cost_phase(&s, &c, 0.0).unwrap(), s);
        let full = apply_cost_phase(&s, &c, TAU).unwrap();
        for (a, b) in full.amplitudes().iter().zip(s.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
        let t = apply_cost_phase(&s, &c, 1.234).unwrap();
        for (a, b) in t.amplitudes().iter().zip(s.amplitudes()) {
            assert!((a.norm() - b.norm()).abs() < 1e-14);
        }
        let wrong = maxcut_cost(&generate("path:2").unwrap()).unwrap();
        assert!(matches!(
            apply_cost_phase(&s, &wrong, 0.1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn mixer_identities() {
        let n = 4;
        let s = PureState::basis(n, 0).unwrap();
        assert_eq!(apply_mixer(&s, 0.0), s);
        let flipped = apply_mixer(&s, PI / 2.0);
        // (-i)^4 = 1 on |1111>
        let expected = Complex64::new(0.0, -1.0).powi(n as i32);
        assert!((flipped.amplitudes()[(1 << n) - 1] - expected).norm() < 1e-12);
        assert!(flipped.norm_sqr() - 1.0 < 1e-12);
        let back = apply_mixer(&apply_mixer(&flipped, 0.77), -0.77);
        for (a, b) in back.amplitudes().iter().zip(flipped.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn level_zero_is_plus_state() {
        let c = maxcut_cost(&generate("cycle:4").unwrap()).unwrap();
        assert_eq!(qaoa_state(&c, &AngleSchedule::empty()).unwrap(), plus_state(4).unwrap());
    }

    #[test]
    fn single_edge_level_one_closed_form() {
        let c = maxcut_cost(&generate("path:2").unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = AngleSchedule::random(1, TAU, &mut rng);
            let (g, b) = (a.gamma()[0], a.beta()[0]);
            let e = qaoa_energy(&c, &a).unwrap();
            assert!((e - (0.5 + 0.5 * (4.0 * b).sin() * g.sin())).abs() < 1e-12);
        }
    }

    #[test]
    fn cycle8_level_one() {
        let c = maxcut_cost(&generate("cycle:8").unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let a = AngleSchedule::random(1, TAU, &mut rng);
            let (g, b) = (a.gamma()[0], a.beta()[0]);
            let e = qaoa_energy(&c, &a).unwrap();
            assert!((e - (4.0 + 2.0 * (4.0 * b).sin() * (2.0 * g).sin())).abs() < 1e-12);
        }
    }

    #[test]
    fn ladders_agree_at_level_one() {
        let cl = maxcut_cost(&generate("cl:4").unwrap()).unwrap();
        let ml = maxcut_cost(&generate("ml:4").unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let a = AngleSchedule::random(1, TAU, &mut rng);
            let d = qaoa_energy(&cl, &a).unwrap() - qaoa_energy(&ml, &a).unwrap();
            assert!(d.abs() < 1e-12);
        }
    }

    #[test]
    fn sampled_energy_converges_and_is_seeded() {
        let c = maxcut_cost(&generate("cycle:5").unwrap()).unwrap();
        let a = sched(&[0.4, 1.3], &[2.2, 0.9]);
        let exact = qaoa_energy(&c, &a).unwrap();
        let n = 100_000;
        let s1 = sampled_energy(&c, &a, n, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let s2 = sampled_energy(&c, &a, n, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(s1, s2);
        assert!((s1 - exact).abs() <= 4.0 * 5.0 / (n as f64).sqrt());
        assert!(sampled_energy(&c, &a, 0, &mut ChaCha8Rng::seed_from_u64(9)).is_err());
    }

    #[test]
    fn sampled_single_edge_uniform_state() {
        let c = maxcut_cost(&generate("path:2").unwrap()).unwrap();
        let a = sched(&[0.0], &[0.0]);
        let n = 10_000;
        let s = sampled_energy(&c, &a, n, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        // binomial(n, 1/2) mean, 4 sigma
        assert!((s - 0.5).abs() <= 4.0 * 0.5 / (n as f64).sqrt());
    }

    #[test]
    fn unitarity_over_many_layers() {
        let g = generate("petersen").unwrap();
        let c = maxcut_cost(&g).unwrap();
        let mut s = plus_state(g.n()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10_000 {
            s.apply_cost_phase(&c, rng.gen::<f64>() * TAU).unwrap();
            s.apply_mixer(rng.gen::<f64>() * TAU);
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn energy_bounds_and_norm(
            n in 2usize..=8,
            edge_bits in any::<u64>(),
            angles in proptest::collection::vec(0.0..TAU, 2..=12),
        ) {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            let edges = pairs.iter().enumerate().filter(|(i, _)| edge_bits >> i & 1 == 1).map(|(_, &e)| e);
            let g = Graph::new(n, edges).unwrap();
            let c = maxcut_cost(&g).unwrap();
            let p = angles.len() / 2;
            let a = sched(&angles[..p], &angles[p..2 * p]);
            let s = qaoa_state(&c, &a).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            let e = s.energy(&c).unwrap();
            prop_assert!(e >= -1e-12 && e <= c.max_value() as f64 + 1e-12);
        }

        #[test]
        fn permutation_equivariance(
            n in 2usize..=8,
            edge_bits in any::<u64>(),
            seed in any::<u64>(),
        ) {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
            let edges = pairs.iter().enumerate().filter(|(i, _)| edge_bits >> i & 1 == 1).map(|(_, &e)| e);
            let g = Graph::new(n, edges).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
            let h = g.relabel(&perm).unwrap();
            let a = AngleSchedule::random(3, TAU, &mut rng);
            let e1 = qaoa_energy(&maxcut_cost(&g).unwrap(), &a).unwrap();
            let e2 = qaoa_energy(&maxcut_cost(&h).unwrap(), &a).unwrap();
            prop_assert!((e1 - e2).abs() < 1e-12);
        }
    }
}

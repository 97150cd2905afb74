//! Angle-averaged QAOA dynamics.
//!
//! One step applies a QAOA layer with independent uniform angles and averages
//! over them. The first-order density matrix `σ = E|ψ⟩⟨ψ|` gives the mean
//! energy; the second-order matrix `σ² = E|ψ⟩⟨ψ|⊗|ψ⟩⟨ψ|` gives the second
//! moment, and so the variance, of the energy over random schedules.
//!
//! Second-order indices pack the two copies as `x1 | x2 << n`.

mod channel;

pub use channel::{trig_moment, MAX_TRIG_MOMENT};

use num_complex::Complex64;
use serde::Serialize;

use crate::graph::Graph;
use crate::sim::{maxcut_cost, DiagonalCost, PureState};
use crate::{Error, Result};

pub const DEFAULT_FIRST_ORDER_CAP: usize = 7;
pub const DEFAULT_SECOND_ORDER_CAP: usize = 5;
/// The combinatorial backend is `O(16^m)` in the number of qubits `m` it
/// acts on; these bound `n` for the two orders.
pub const COMBINATORIAL_FIRST_ORDER_CAP: usize = 5;
pub const COMBINATORIAL_SECOND_ORDER_CAP: usize = 3;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_STEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Backend {
    /// Equispaced β quadrature with `2m + 2` points on `m` qubits.
    #[default]
    Quadrature,
    /// Closed-form sum over Hamming distances.
    Combinatorial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Order {
    First,
    Second,
}

fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::SizeCap { what, size: n, cap });
    }
    Ok(())
}

fn outer(v: &[Complex64]) -> Vec<Complex64> {
    v.iter().flat_map(|a| v.iter().map(move |b| a * b.conj())).collect()
}

fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn is_hermitian(data: &[Complex64], dim: usize, tol: f64) -> bool {
    (0..dim).all(|i| (0..=i).all(|j| (data[i * dim + j] - data[j * dim + i].conj()).norm() <= tol))
}

fn trace(data: &[Complex64], dim: usize) -> Complex64 {
    (0..dim).map(|i| data[i * dim + i]).sum()
}

/// `2^n × 2^n` row-major density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// `|+⟩⟨+|^{⊗n}`.
    pub fn plus(n: usize) -> Result<Self> {
        Self::plus_capped(n, DEFAULT_FIRST_ORDER_CAP)
    }

    pub fn plus_capped(n: usize, cap: usize) -> Result<Self> {
        check_cap("first-order density matrix qubits", n, cap)?;
        let dim = 1usize << n;
        Ok(Self {
            n,
            data: vec![Complex64::new(1.0 / dim as f64, 0.0); dim * dim],
        })
    }

    pub fn from_pure(s: &PureState) -> Result<Self> {
        check_cap("first-order density matrix qubits", s.n(), DEFAULT_FIRST_ORDER_CAP)?;
        Ok(Self {
            n: s.n(),
            data: outer(s.amplitudes()),
        })
    }

    /// `Σ w_i |ψ_i⟩⟨ψ_i|`; weights are used as given.
    pub fn from_ensemble(members: &[(f64, PureState)]) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty ensemble".into()))?;
        let mut acc = Self::from_pure(&first.1)?;
        acc.data.iter_mut().for_each(|x| *x *= first.0);
        for (w, s) in &members[1..] {
            let d = Self::from_pure(s)?;
            if d.n != acc.n {
                return Err(Error::DimensionMismatch {
                    expected: acc.n,
                    got: d.n,
                });
            }
            acc.data.iter_mut().zip(&d.data).for_each(|(a, b)| *a += b * w);
        }
        Ok(acc)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, x: usize, y: usize) -> Complex64 {
        self.data[x * self.dim() + y]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        trace(&self.data, self.dim())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        is_hermitian(&self.data, self.dim(), tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.data, &other.data)
    }
}

/// `4^n × 4^n` second-order density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix2 {
    n: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix2 {
    /// `|+⟩⟨+|^{⊗2n}`: every entry `4^{−n}`.
    pub fn plus(n: usize) -> Result<Self> {
        Self::plus_capped(n, DEFAULT_SECOND_ORDER_CAP)
    }

    pub fn plus_capped(n: usize, cap: usize) -> Result<Self> {
        check_cap("second-order density matrix qubits", n, cap)?;
        let dim = 1usize << (2 * n);
        Ok(Self {
            n,
            data: vec![Complex64::new(1.0 / dim as f64, 0.0); dim * dim],
        })
    }

    /// `|ψ⟩⟨ψ| ⊗ |ψ⟩⟨ψ|`.
    pub fn from_pure(s: &PureState) -> Result<Self> {
        check_cap("second-order density matrix qubits", s.n(), DEFAULT_SECOND_ORDER_CAP)?;
        let a = s.amplitudes();
        let doubled: Vec<Complex64> = (0..a.len() * a.len())
            .map(|i| a[i & (a.len() - 1)] * a[i >> s.n()])
            .collect();
        Ok(Self {
            n: s.n(),
            data: outer(&doubled),
        })
    }

    pub fn from_ensemble(members: &[(f64, PureState)]) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty ensemble".into()))?;
        let mut acc = Self::from_pure(&first.1)?;
        acc.data.iter_mut().for_each(|x| *x *= first.0);
        for (w, s) in &members[1..] {
            let d = Self::from_pure(s)?;
            if d.n != acc.n {
                return Err(Error::DimensionMismatch {
                    expected: acc.n,
                    got: d.n,
                });
            }
            acc.data.iter_mut().zip(&d.data).for_each(|(a, b)| *a += b * w);
        }
        Ok(acc)
    }

    /// `σ ⊗ σ` in the same index layout.
    pub fn tensor_square(s: &DensityMatrix) -> Self {
        let n = s.n;
        let d = s.dim();
        let mask = d - 1;
        let dim = d * d;
        let data = (0..dim * dim)
            .map(|k| {
                let (i, j) = (k / dim, k % dim);
                s.get(i & mask, j & mask) * s.get(i >> n, j >> n)
            })
            .collect();
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << (2 * self.n)
    }

    pub fn index(&self, x1: usize, x2: usize) -> usize {
        x1 | x2 << self.n
    }

    /// Entry `[(x1, x2), (y1, y2)]`.
    pub fn get(&self, x1: usize, x2: usize, y1: usize, y2: usize) -> Complex64 {
        self.data[self.index(x1, x2) * self.dim() + self.index(y1, y2)]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        trace(&self.data, self.dim())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        is_hermitian(&self.data, self.dim(), tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.data, &other.data)
    }

    /// Largest change under swapping the two copies on rows and columns.
    pub fn swap_asymmetry(&self) -> f64 {
        let d = 1usize << self.n;
        let mut worst = 0.0f64;
        for x1 in 0..d {
            for x2 in 0..d {
                for y1 in 0..d {
                    for y2 in 0..d {
                        let diff = self.get(x1, x2, y1, y2) - self.get(x2, x1, y2, y1);
                        worst = worst.max(diff.norm());
                    }
                }
            }
        }
        worst
    }
}

fn check_cost(n: usize, c: &DiagonalCost) -> Result<()> {
    if c.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: c.n(),
        });
    }
    Ok(())
}

/// One angle-averaged QAOA layer on the first-order density matrix.
pub fn step_first_order(s: &DensityMatrix, c: &DiagonalCost, backend: Backend) -> Result<DensityMatrix> {
    check_cost(s.n, c)?;
    let mut data = s.data.clone();
    channel::project(&mut data, c.values());
    let data = match backend {
        Backend::Quadrature => channel::beta_average_quadrature(&data, s.n, 2 * s.n + 2),
        Backend::Combinatorial => {
            check_cap("combinatorial first-order qubits", s.n, COMBINATORIAL_FIRST_ORDER_CAP)?;
            channel::beta_average_combinatorial(&data, s.n)?
        }
    };
    Ok(DensityMatrix { n: s.n, data })
}

fn pair_costs(n: usize, c: &DiagonalCost) -> Vec<u32> {
    let mask = (1usize << n) - 1;
    (0..1usize << (2 * n))
        .map(|i| c.value(i & mask) + c.value(i >> n))
        .collect()
}

/// One angle-averaged QAOA layer on the second-order density matrix; both
/// copies see the same angles.
pub fn step_second_order(s: &DensityMatrix2, c: &DiagonalCost, backend: Backend) -> Result<DensityMatrix2> {
    check_cost(s.n, c)?;
    let m = 2 * s.n;
    let mut data = s.data.clone();
    channel::project(&mut data, &pair_costs(s.n, c));
    let data = match backend {
        Backend::Quadrature => channel::beta_average_quadrature(&data, m, 2 * m + 2),
        Backend::Combinatorial => {
            check_cap("combinatorial second-order qubits", s.n, COMBINATORIAL_SECOND_ORDER_CAP)?;
            channel::beta_average_combinatorial(&data, m)?
        }
    };
    Ok(DensityMatrix2 { n: s.n, data })
}

/// `Tr(C σ)`.
pub fn moment1(s: &DensityMatrix, c: &DiagonalCost) -> Result<f64> {
    check_cost(s.n, c)?;
    Ok((0..s.dim()).map(|z| f64::from(c.value(z)) * s.get(z, z).re).sum())
}

/// `Tr(C^{⊗2} σ²)`.
pub fn moment2(s: &DensityMatrix2, c: &DiagonalCost) -> Result<f64> {
    check_cost(s.n, c)?;
    let d = 1usize << s.n;
    let mut sum = 0.0;
    for z1 in 0..d {
        for z2 in 0..d {
            sum += f64::from(c.value(z1) * c.value(z2)) * s.get(z1, z2, z1, z2).re;
        }
    }
    Ok(sum)
}

/// Mean and variance of the level-`p` energy of `c` over uniform random
/// schedules.
pub fn angle_averaged_moments(c: &DiagonalCost, p: usize, backend: Backend) -> Result<(f64, f64)> {
    let mut s1 = DensityMatrix::plus(c.n())?;
    let mut s2 = DensityMatrix2::plus(c.n())?;
    for _ in 0..p {
        s1 = step_first_order(&s1, c, backend)?;
        s2 = step_second_order(&s2, c, backend)?;
    }
    let m1 = moment1(&s1, c)?;
    Ok((m1, moment2(&s2, c)? - m1 * m1))
}

pub fn angle_averaged_variance(g: &Graph, p: usize) -> Result<f64> {
    Ok(angle_averaged_moments(&maxcut_cost(g)?, p, Backend::Quadrature)?.1)
}

/// The three parameters `(A_p, B_p, C_p)` of the single-edge second-order
/// matrix, from `A_0 = B_0 = C_0 = 1/16`.
pub fn single_edge_recurrence(p: usize) -> (f64, f64, f64) {
    let mut abc = (1.0 / 16.0, 1.0 / 16.0, 1.0 / 16.0);
    for _ in 0..p {
        let (a, b, _) = abc;
        abc = (0.75 * a + 0.5 * b, 0.25 * a + 0.5 * b, -0.25 * a + 0.5 * b);
    }
    abc
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPoint {
    pub order: Order,
    pub steps: usize,
    /// Max-abs entry change of the last step.
    pub residual: f64,
    pub converged: bool,
    /// `Tr(Cσ)` for the first order, `Tr(C^{⊗2}σ²)` for the second.
    pub moment: f64,
    #[serde(skip)]
    pub matrix: Vec<Complex64>,
}

/// Iterates the averaged layer until the max-abs entry change drops below
/// `tol` or `max_steps` steps have run.
pub fn iterate_to_fixed_point(g: &Graph, order: Order, tol: f64, max_steps: usize) -> Result<FixedPoint> {
    iterate_cost_to_fixed_point(&maxcut_cost(g)?, order, tol, max_steps)
}

pub fn iterate_cost_to_fixed_point(c: &DiagonalCost, order: Order, tol: f64, max_steps: usize) -> Result<FixedPoint> {
    let mut steps = 0;
    let mut residual = f64::INFINITY;
    match order {
        Order::First => {
            let mut s = DensityMatrix::plus(c.n())?;
            while steps < max_steps && residual >= tol {
                let next = step_first_order(&s, c, Backend::Quadrature)?;
                residual = next.max_abs_diff(&s);
                s = next;
                steps += 1;
            }
            Ok(FixedPoint {
                order,
                steps,
                residual,
                converged: residual < tol,
                moment: moment1(&s, c)?,
                matrix: s.data,
            })
        }
        Order::Second => {
            let mut s = DensityMatrix2::plus(c.n())?;
            while steps < max_steps && residual >= tol {
                let next = step_second_order(&s, c, Backend::Quadrature)?;
                residual = next.max_abs_diff(&s);
                s = next;
                steps += 1;
            }
            Ok(FixedPoint {
                order,
                steps,
                residual,
                converged: residual < tol,
                moment: moment2(&s, c)?,
                matrix: s.data,
            })
        }
    }
}

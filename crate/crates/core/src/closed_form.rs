//! Analytic energies: level 1 on any graph, level 2 on cycles, and the
//! single-edge transfer products at any level.

use num_complex::Complex64;

use crate::graph::{EdgeNeighborhood, Graph};
use crate::sim::AngleSchedule;
use crate::{Error, Result};

/// Level-1 energy of one edge with neighbourhood counts `nb`.
pub fn level1_edge_energy(nb: EdgeNeighborhood, gamma: f64, beta: f64) -> f64 {
    let (dl, dr, dm) = (nb.d_left as i32, nb.d_right as i32, nb.d_shared as i32);
    let cg = gamma.cos();
    let s2b = (2.0 * beta).sin();
    let x = s2b * s2b * (1.0 - (2.0 * gamma).cos().powi(dm)) * cg.powi(dl + dr);
    let y = (4.0 * beta).sin() * gamma.sin() * (cg.powi(dl) + cg.powi(dr)) * cg.powi(dm);
    0.5 + 0.25 * (x + y)
}

pub fn level1_graph_energy(g: &Graph, gamma: f64, beta: f64) -> f64 {
    g.edges()
        .iter()
        .map(|&(u, v)| {
            let nb = g.edge_neighborhood(u, v).expect("edge taken from the graph");
            level1_edge_energy(nb, gamma, beta)
        })
        .sum()
}

/// Level-1 energy of a cubic graph with `n` vertices and `t` triangles.
pub fn triangle_theorem_energy(n: usize, t: usize, gamma: f64, beta: f64) -> Result<f64> {
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "a cubic graph has an even order, got {n}"
        )));
    }
    let (n, t) = (n as f64, t as f64);
    let s2b = (2.0 * beta).sin();
    let s2g = (2.0 * gamma).sin();
    Ok(0.75 * n + 0.375 * n * (4.0 * beta).sin() * s2g * gamma.cos() + 0.375 * t * s2b * s2b * s2g * s2g)
}

/// Level-2 energy of the cycle `C_n`, `n >= 6`. Index 0 of the schedule is
/// the first layer.
pub fn level2_cycle_energy(n: usize, a: &AngleSchedule) -> Result<f64> {
    if a.p() != 2 {
        return Err(Error::InvalidSchedule(format!("level 2 required, got {}", a.p())));
    }
    if n < 6 {
        return Err(Error::InvalidArgument(format!(
            "cycle length must be at least 6, got {n}"
        )));
    }
    let (g0, g1) = (a.gamma()[0], a.gamma()[1]);
    let (b0, b1) = (a.beta()[0], a.beta()[1]);
    let s = |x: f64| x.sin();
    let c = |x: f64| x.cos();
    let sq = |x: f64| x * x;
    let x = -0.5
        * s(2.0 * g1)
        * c(2.0 * g0)
        * (sq(s(2.0 * b1)) * s(4.0 * b0) - 2.0 * s(4.0 * b1) + s(4.0 * b1) * sq(s(2.0 * b0)));
    let y = -0.5
        * c(2.0 * g1)
        * s(2.0 * g0)
        * (sq(s(2.0 * b1)) * s(4.0 * b0) - 2.0 * s(4.0 * b1) + 4.0 * s(4.0 * b1) * sq(s(2.0 * b0)));
    let z = s(2.0 * g0) * s(4.0 * b0) * (0.25 + 0.75 * c(4.0 * b1));
    let w = s(2.0 * g1) * s(2.0 * b1) * s(2.0 * b0) * s(2.0 * (b0 + b1));
    Ok(n as f64 * (0.5 + 0.25 * (x + y + z + w)))
}

/// Single-edge energy from the two-qubit state product; basis order
/// `00, 01, 10, 11`.
pub fn single_edge_energy_state(a: &AngleSchedule) -> f64 {
    let mut psi = [Complex64::new(0.5, 0.0); 4];
    for (gamma, beta) in a.layers() {
        let ph = Complex64::from_polar(1.0, -gamma);
        psi[0] *= ph;
        psi[3] *= ph;
        let (sb, cb) = beta.sin_cos();
        let m = [Complex64::new(cb, 0.0), Complex64::new(0.0, -sb)];
        let k = |i: usize, j: usize| m[usize::from(i != j)];
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (r, o) in out.iter_mut().enumerate() {
            for (col, &v) in psi.iter().enumerate() {
                *o += k(r >> 1, col >> 1) * k(r & 1, col & 1) * v;
            }
        }
        psi = out;
    }
    psi[0].norm_sqr() + psi[3].norm_sqr()
}

/// Single-edge energy from the linear transfer form: `v = M_0 ⋯ M_{p-1} v0`
/// with `M_q = M1(γ_q)N1(β_q) ⊗ M2(γ_q)N2(β_q)`, `v0 = (½, 0, 0, 0)`, and the
/// energy the sum of the entries of `v`. The last layer acts on `v0` first.
pub fn single_edge_energy_transfer(a: &AngleSchedule) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    let mut v = [Complex64::new(0.5, 0.0), zero, zero, zero];
    for (gamma, beta) in a.layers().collect::<Vec<_>>().into_iter().rev() {
        let (s, c) = (2.0 * beta).sin_cos();
        let phase = Complex64::from_polar(1.0, -gamma);
        let n1 = [[c.into(), Complex64::new(0.0, s)], [Complex64::new(0.0, s), c.into()]];
        let n2 = [[c.into(), Complex64::new(0.0, -s)], [Complex64::new(0.0, -s), c.into()]];
        let left = |n: [[Complex64; 2]; 2], d: Complex64| [n[0], [d * n[1][0], d * n[1][1]]];
        let a1 = left(n1, phase);
        let a2 = left(n2, phase.conj());
        let mut out = [zero; 4];
        for (r, o) in out.iter_mut().enumerate() {
            for (col, &x) in v.iter().enumerate() {
                *o += a1[r >> 1][col >> 1] * a2[r & 1][col & 1] * x;
            }
        }
        v = out;
    }
    v.iter().sum::<Complex64>().re
}

/// Single-edge energy at any level; both transfer forms, checked to agree.
pub fn single_edge_energy(a: &AngleSchedule) -> f64 {
    let e = single_edge_energy_state(a);
    debug_assert!((e - single_edge_energy_transfer(a)).abs() < 1e-10);
    e
}

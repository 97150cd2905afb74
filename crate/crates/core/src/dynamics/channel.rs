//! The angle-averaged QAOA layer acting on square matrices over `m` qubits.
//!
//! Averaging the cost phase over `γ` keeps exactly the entries whose row and
//! column have equal (integer) cost. Averaging the mixer conjugation over `β`
//! is done either by an equispaced quadrature, exact because every entry is
//! a trigonometric polynomial of degree at most `2m` in `β`, or by the
//! closed-form sum over Hamming distances.

use num_complex::Complex64;

use crate::{Error, Result};

/// Largest `r`, `s` accepted by [`trig_moment`].
pub const MAX_TRIG_MOMENT: usize = 64;

/// `(1/2π) ∫ sin^{2r}x cos^{2s}x dx`.
pub fn trig_moment(r: usize, s: usize) -> Result<f64> {
    if r > MAX_TRIG_MOMENT || s > MAX_TRIG_MOMENT {
        return Err(Error::InvalidArgument(format!(
            "trig moment indices must be <= {MAX_TRIG_MOMENT}, got ({r}, {s})"
        )));
    }
    // c_k = (2k)! / (4^k k!^2) = Π (2i−1)/(2i); A(r, s) = c_r c_s / binom(r+s, r)
    let c = |k: usize| (1..=k).map(|i| (2 * i - 1) as f64 / (2 * i) as f64).product::<f64>();
    let inv_binom: f64 = (1..=r.min(s)).map(|i| i as f64 / (r.max(s) + i) as f64).product();
    Ok(c(r) * c(s) * inv_binom)
}

/// Keeps entry `(i, j)` iff `key[i] == key[j]`.
pub(crate) fn project(data: &mut [Complex64], key: &[u32]) {
    let dim = key.len();
    for (i, row) in data.chunks_exact_mut(dim).enumerate() {
        for (x, &kj) in row.iter_mut().zip(key) {
            if kj != key[i] {
                *x = Complex64::new(0.0, 0.0);
            }
        }
    }
}

/// `U σ U†` for `U = ⊗ exp(−iβX)` on `m` qubits, in place.
fn conjugate_mixer(data: &mut [Complex64], m: usize, beta: f64) {
    let dim = 1usize << m;
    let (s, c) = beta.sin_cos();
    // rows: [[c, −is], [−is, c]]
    for q in 0..m {
        let bit = 1usize << q;
        for i in (0..dim).filter(|i| i & bit == 0) {
            let (lo, hi) = data.split_at_mut((i | bit) * dim);
            let a = &mut lo[i * dim..(i + 1) * dim];
            let b = &mut hi[..dim];
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (u, v) = (*x, *y);
                *x = Complex64::new(c * u.re + s * v.im, c * u.im - s * v.re);
                *y = Complex64::new(c * v.re + s * u.im, c * v.im - s * u.re);
            }
        }
    }
    // columns: conjugate matrix [[c, is], [is, c]]
    for row in data.chunks_exact_mut(dim) {
        for q in 0..m {
            let bit = 1usize << q;
            for k in (0..dim).filter(|k| k & bit == 0) {
                let (u, v) = (row[k], row[k | bit]);
                row[k] = Complex64::new(c * u.re - s * v.im, c * u.im + s * v.re);
                row[k | bit] = Complex64::new(c * v.re - s * u.im, c * v.im + s * u.re);
            }
        }
    }
}

/// β-average over `points` equispaced angles.
pub(crate) fn beta_average_quadrature(data: &[Complex64], m: usize, points: usize) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(0.0, 0.0); data.len()];
    let mut work = vec![Complex64::new(0.0, 0.0); data.len()];
    for k in 0..points {
        work.copy_from_slice(data);
        conjugate_mixer(&mut work, m, std::f64::consts::TAU * k as f64 / points as f64);
        for (a, w) in acc.iter_mut().zip(&work) {
            *a += w;
        }
    }
    let w = 1.0 / points as f64;
    acc.iter_mut().for_each(|a| *a *= w);
    acc
}

/// β-average by the Hamming-distance sum: entry `(x, y)` collects
/// `(−1)^{(δx−δy)/2} A(ν, m−ν) σ[x', y']` over pairs with `δx + δy = 2ν` even.
pub(crate) fn beta_average_combinatorial(data: &[Complex64], m: usize) -> Result<Vec<Complex64>> {
    let dim = 1usize << m;
    let a: Vec<f64> = (0..=m).map(|nu| trig_moment(nu, m - nu)).collect::<Result<_>>()?;
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    for x in 0..dim {
        for y in 0..dim {
            let mut sum = Complex64::new(0.0, 0.0);
            for xp in 0..dim {
                let dx = (x ^ xp).count_ones() as i64;
                let row = &data[xp * dim..(xp + 1) * dim];
                for (yp, &v) in row.iter().enumerate() {
                    let dy = (y ^ yp).count_ones() as i64;
                    if (dx + dy) % 2 != 0 || v == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let w = a[((dx + dy) / 2) as usize];
                    if ((dx - dy) / 2) % 2 == 0 {
                        sum += v * w;
                    } else {
                        sum -= v * w;
                    }
                }
            }
            out[x * dim + y] = sum;
        }
    }
    Ok(out)
}

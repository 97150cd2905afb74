//! Level-`p` QAOA energy of one edge as the `U` polynomial of a light-cone
//! gadget.
//!
//! Shell `q` of the edge `e` is `V_q`, the vertices touched by `N_q`, where
//! `N_0 = {e}` and `N_{q+1}` adds every edge incident to `V_q`. The gadget has
//! a root, two copies `𝒩_q`, `𝒩'_q` of each `V_q` (`q < p`) and one copy
//! `ℳ_q` of `V_{q+1} ∖ V_q`. Mixer variables are `B_q` (id `q`) and phase
//! variables `G_q` (id `p + q`).

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use super::{u_evaluate, Label, LabeledMultigraph};
use crate::graph::Graph;
use crate::sim::{maxcut_cost, qaoa_state, AngleSchedule, DiagonalCost};
use crate::{Error, Result};

/// Mixer angles with `|cos β|` below this are rejected.
pub const SINGULAR_COS: f64 = 1e-8;
/// Largest imaginary part tolerated in the normalised energy.
pub const IMAG_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct QaoaGadget {
    pub graph: LabeledMultigraph,
    pub p: usize,
    /// `|V_q|` for `q = 0..=p`.
    pub shell_sizes: Vec<usize>,
}

/// Nested edge sets grown from `e` and the vertex set of each.
type Shells = (Vec<BTreeSet<(usize, usize)>>, Vec<Vec<usize>>);

fn shells(g: &Graph, e: (usize, usize), p: usize) -> Shells {
    let e = (e.0.min(e.1), e.0.max(e.1));
    let mut n_sets = vec![BTreeSet::from([e])];
    for _ in 0..p {
        let prev = n_sets.last().expect("nonempty");
        let touched: BTreeSet<usize> = prev.iter().flat_map(|&(a, b)| [a, b]).collect();
        let mut next = prev.clone();
        next.extend(
            g.edges()
                .iter()
                .filter(|(a, b)| touched.contains(a) || touched.contains(b)),
        );
        n_sets.push(next);
    }
    let v_sets = n_sets
        .iter()
        .map(|s| {
            let v: BTreeSet<usize> = s.iter().flat_map(|&(a, b)| [a, b]).collect();
            v.into_iter().collect()
        })
        .collect();
    (n_sets, v_sets)
}

pub fn build_qaoa_gadget(g: &Graph, e: (usize, usize), p: usize) -> Result<QaoaGadget> {
    if p == 0 {
        return Err(Error::InvalidArgument("the gadget needs p >= 1".into()));
    }
    if !g.has_edge(e.0, e.1) {
        return Err(Error::EdgeAbsent(e.0, e.1));
    }
    let (n_sets, v_sets) = shells(g, e, p);
    let b = |q: usize| Label::var(q);
    let neg_b = |q: usize| Label::neg_var(q);
    let gl = |q: usize| Label::var(p + q);
    let inv_g = |q: usize| Label::inv_var(p + q);

    let mut gad = LabeledMultigraph::new(1);
    let copy = |set: &[usize], gad: &mut LabeledMultigraph| -> BTreeMap<usize, usize> {
        set.iter().map(|&v| (v, gad.add_vertex())).collect()
    };
    let mut nq = Vec::with_capacity(p);
    let mut nq_prime = Vec::with_capacity(p);
    let mut mq = Vec::with_capacity(p);
    for q in 0..p {
        nq.push(copy(&v_sets[q], &mut gad));
        nq_prime.push(copy(&v_sets[q], &mut gad));
        let fresh: Vec<usize> = v_sets[q + 1]
            .iter()
            .copied()
            .filter(|v| v_sets[q].binary_search(v).is_err())
            .collect();
        mq.push(copy(&fresh, &mut gad));
    }
    let joined = |a: &BTreeMap<usize, usize>, m: &BTreeMap<usize, usize>| -> BTreeMap<usize, usize> {
        a.iter().chain(m).map(|(&k, &v)| (k, v)).collect()
    };

    let (u, v) = (e.0.min(e.1), e.0.max(e.1));
    for x in [u, v] {
        gad.add_edge(0, nq[0][&x], b(p - 1))?;
        gad.add_edge(0, nq_prime[0][&x], neg_b(p - 1))?;
    }
    for q in 0..p {
        let full = joined(&nq[q], &mq[q]);
        let full_prime = joined(&nq_prime[q], &mq[q]);
        for &(a, c) in &n_sets[q + 1] {
            gad.add_edge(full[&a], full[&c], gl(p - 1 - q))?;
            gad.add_edge(full_prime[&a], full_prime[&c], inv_g(p - 1 - q))?;
        }
    }
    for q in 0..p.saturating_sub(1) {
        let full = joined(&nq[q], &mq[q]);
        let full_prime = joined(&nq_prime[q], &mq[q]);
        for &x in &v_sets[q + 1] {
            gad.add_edge(nq[q + 1][&x], full[&x], b(p - 2 - q))?;
            gad.add_edge(nq_prime[q + 1][&x], full_prime[&x], neg_b(p - 2 - q))?;
        }
    }
    Ok(QaoaGadget {
        graph: gad,
        p,
        shell_sizes: v_sets.iter().map(Vec::len).collect(),
    })
}

/// Variable values `B_q = −i tan β_q`, `G_q = e^{−iγ_q}`.
pub fn gadget_assignment(a: &AngleSchedule) -> Result<Vec<Complex64>> {
    for (index, &beta) in a.beta().iter().enumerate() {
        if beta.cos().abs() < SINGULAR_COS {
            return Err(Error::SingularMixerAngle { index, beta });
        }
    }
    let b = a.beta().iter().map(|&x| Complex64::new(0.0, -x.tan()));
    let g = a.gamma().iter().map(|&x| Complex64::from_polar(1.0, -x));
    Ok(b.chain(g).collect())
}

/// `2^{1−|V_p|} · Π_q cos^{2|V_q|} β_{p−1−q}`.
pub fn gadget_normalization(shell_sizes: &[usize], beta: &[f64]) -> f64 {
    let p = beta.len();
    let mut norm = 0.5f64.powi(shell_sizes[p] as i32 - 1);
    for q in 0..p {
        norm *= beta[p - 1 - q].cos().powi(2 * shell_sizes[q] as i32);
    }
    norm
}

/// `<ψ|C_e|ψ>` at level `p = a.p()` through the gadget's `U` polynomial.
pub fn edge_energy_via_u(g: &Graph, e: (usize, usize), a: &AngleSchedule) -> Result<f64> {
    if a.p() == 0 {
        if !g.has_edge(e.0, e.1) {
            return Err(Error::EdgeAbsent(e.0, e.1));
        }
        return Ok(0.5);
    }
    let vars = gadget_assignment(a)?;
    let gad = build_qaoa_gadget(g, e, a.p())?;
    let val = u_evaluate(&gad.graph, &vars)? * gadget_normalization(&gad.shell_sizes, a.beta());
    if val.im.abs() > IMAG_TOL {
        return Err(Error::Calibration(format!(
            "edge ({}, {}): imaginary part {:e} after normalisation",
            e.0, e.1, val.im
        )));
    }
    Ok(val.re)
}

/// Compares [`edge_energy_via_u`] with the state vector on three small cases
/// (an isolated edge at p=1, a six-cycle edge at p=1, the middle edge of a
/// four-vertex path at p=2) and returns the largest deviation.
pub fn calibration_check() -> Result<f64> {
    let cases: [(Graph, (usize, usize), AngleSchedule); 3] = [
        (
            crate::graph::path(2)?,
            (0, 1),
            AngleSchedule::new(vec![0.7], vec![0.3])?,
        ),
        (
            crate::graph::cycle(6)?,
            (0, 1),
            AngleSchedule::new(vec![1.9], vec![2.2])?,
        ),
        (
            crate::graph::path(4)?,
            (1, 2),
            AngleSchedule::new(vec![0.4, 2.6], vec![1.1, 0.2])?,
        ),
    ];
    let mut worst = 0.0f64;
    for (g, e, a) in &cases {
        let via_u = edge_energy_via_u(g, *e, a)?;
        let sv = statevector_edge_energy(g, *e, a)?;
        worst = worst.max((via_u - sv).abs());
    }
    if worst > 1e-8 {
        return Err(Error::Calibration(format!(
            "gadget normalisation deviates from the state vector by {worst:e}"
        )));
    }
    Ok(worst)
}

/// `<ψ|C_e|ψ>` from the full state vector of `g`, for comparison.
pub fn statevector_edge_energy(g: &Graph, e: (usize, usize), a: &AngleSchedule) -> Result<f64> {
    let (u, v) = e;
    let ce = DiagonalCost::from_fn(g.n(), |z| u32::from((z >> u) & 1 == (z >> v) & 1))?;
    qaoa_state(&maxcut_cost(g)?, a)?.energy(&ce)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::level1_edge_energy;
    use crate::graph::generate;
    use crate::sim::qaoa_energy;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, TAU};

    #[test]
    fn gadget_sizes() {
        let g = build_qaoa_gadget(&generate("path:2").unwrap(), (0, 1), 1).unwrap();
        assert_eq!(g.graph.n(), 5);
        assert_eq!(g.shell_sizes, vec![2, 2]);
        let root_edges = g.graph.edges().iter().filter(|(a, b, _)| *a == 0 || *b == 0).count();
        assert_eq!(root_edges, 4);

        let p4 = generate("path:4").unwrap();
        assert_eq!(build_qaoa_gadget(&p4, (1, 2), 1).unwrap().graph.n(), 7);
        assert_eq!(build_qaoa_gadget(&p4, (1, 2), 2).unwrap().graph.n(), 15);
        let big = build_qaoa_gadget(&p4, (2, 1), 4).unwrap();
        assert_eq!((big.graph.n(), big.graph.edge_count()), (31, 52));
        assert_eq!(big.shell_sizes, vec![2, 4, 4, 4, 4]);

        assert_eq!(
            build_qaoa_gadget(&generate("cycle:6").unwrap(), (0, 1), 2)
                .unwrap()
                .graph
                .n(),
            17
        );
        assert_eq!(
            build_qaoa_gadget(&generate("complete:4").unwrap(), (0, 1), 2)
                .unwrap()
                .graph
                .n(),
            15
        );
        assert_eq!(build_qaoa_gadget(&p4, (0, 2), 1), Err(Error::EdgeAbsent(0, 2)));
    }

    #[test]
    fn level_one_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let c6 = generate("cycle:6").unwrap();
        let k4 = generate("complete:4").unwrap();
        for _ in 0..10 {
            let a = AngleSchedule::random(1, TAU, &mut rng);
            let (gm, b) = (a.gamma()[0], a.beta()[0]);
            let nb = c6.edge_neighborhood(0, 1).unwrap();
            assert!((edge_energy_via_u(&c6, (0, 1), &a).unwrap() - level1_edge_energy(nb, gm, b)).abs() < 1e-9);
            let nb = k4.edge_neighborhood(0, 1).unwrap();
            assert!((edge_energy_via_u(&k4, (0, 1), &a).unwrap() - level1_edge_energy(nb, gm, b)).abs() < 1e-9);
        }
    }

    #[test]
    fn level_two_matches_statevector() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p4 = generate("path:4").unwrap();
        for _ in 0..10 {
            let a = AngleSchedule::random(2, TAU, &mut rng);
            let sv = statevector_edge_energy(&p4, (1, 2), &a).unwrap();
            assert!((edge_energy_via_u(&p4, (1, 2), &a).unwrap() - sv).abs() < 1e-8);
        }
    }

    #[test]
    fn edge_sum_is_total_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for spec in ["path:3", "star:3", "dragon", "cycle:5"] {
            let g = generate(spec).unwrap();
            for p in 1..=2 {
                let a = AngleSchedule::random(p, TAU, &mut rng);
                let total: f64 = g.edges().iter().map(|&e| edge_energy_via_u(&g, e, &a).unwrap()).sum();
                let exact = qaoa_energy(&maxcut_cost(&g).unwrap(), &a).unwrap();
                assert!((total - exact).abs() < 1e-8, "{spec} p={p}");
            }
        }
    }

    #[test]
    fn singular_beta_is_rejected() {
        let a = AngleSchedule::new(vec![0.3, 0.1], vec![0.2, FRAC_PI_2]).unwrap();
        assert!(matches!(
            edge_energy_via_u(&generate("path:2").unwrap(), (0, 1), &a),
            Err(Error::SingularMixerAngle { index: 1, .. })
        ));
    }

    #[test]
    fn text_normalisation_is_calibrated() {
        assert!(calibration_check().unwrap() < 1e-8);
    }
}

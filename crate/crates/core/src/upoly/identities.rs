use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::{u_evaluate, u_evaluate_values, Label, LabeledMultigraph};
use crate::Result;

/// Residual tolerance for a rule to pass.
pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub rule: &'static str,
    /// Number of instances checked; zero means the rule did not apply.
    pub cases: usize,
    /// Largest `|lhs - rhs|` over the instances, relative to the sum of the
    /// absolute values of the terms of `U`.
    pub max_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, rule: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.rule == rule)
    }
}

struct Rule {
    name: &'static str,
    cases: usize,
    max_residual: f64,
}

impl Rule {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            max_residual: 0.0,
        }
    }

    fn record(&mut self, lhs: Complex64, rhs: Complex64, scale: f64) {
        self.cases += 1;
        let r = (lhs - rhs).norm() / scale.max(1.0);
        self.max_residual = self.max_residual.max(r);
    }

    fn finish(self) -> IdentityCheck {
        IdentityCheck {
            rule: self.name,
            cases: self.cases,
            max_residual: self.max_residual,
            passed: self.max_residual <= IDENTITY_TOL,
        }
    }
}

fn random_value<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Replaces every label by a random constant (one draw per variable, so
/// shared variables stay shared).
fn instantiate<R: Rng + ?Sized>(g: &LabeledMultigraph, rng: &mut R) -> Result<LabeledMultigraph> {
    let vars: Vec<Complex64> = (0..g.var_count()).map(|_| random_value(rng)).collect();
    let values = g.edge_values(&vars)?;
    LabeledMultigraph::from_edges(
        g.n(),
        g.edges()
            .iter()
            .zip(values)
            .map(|(&(a, b, _), x)| (a, b, Label::Const(x))),
    )
}

fn u(g: &LabeledMultigraph) -> Result<Complex64> {
    u_evaluate(g, &[])
}

/// Sum of the absolute values of the terms of `U(g)`.
fn scale(g: &LabeledMultigraph) -> Result<f64> {
    let abs = g
        .edge_values(&[])?
        .into_iter()
        .map(|x| Complex64::new(x.norm(), 0.0))
        .collect::<Vec<_>>();
    Ok(u_evaluate_values(g, &abs)?.re)
}

fn random_partner<R: Rng + ?Sized>(rng: &mut R) -> Result<LabeledMultigraph> {
    // a triangle with a pendant edge and a loop-free parallel pair
    let mut h = LabeledMultigraph::new(4);
    for (a, b) in [(0, 1), (1, 2), (0, 2), (2, 3), (2, 3)] {
        h.add_edge(a, b, Label::Const(random_value(rng)))?;
    }
    Ok(h)
}

fn bridges(g: &LabeledMultigraph) -> Vec<usize> {
    let base = g.component_count();
    (0..g.edge_count())
        .filter(|&e| {
            let (a, b, _) = g.edges()[e];
            a != b && g.without_edge(e).component_count() > base
        })
        .collect()
}

/// Checks the annulling rules and decomposition identities of `U` on `g`
/// under `trials` random complex assignments each.
///
/// Rules: `bridge` (a bridge labelled −1 annuls `U`), `deletion`
/// (`U(G, e:1) = U(G − e)`), `parallel_merge` (`U(G, e:C, f:D) = U(G − f, e:CD)`),
/// `one_node_product` and `disjoint_union` (gluing a fixed partner graph at one
/// or zero vertices), `two_node_decomposition` (gluing at vertices 0 and 1),
/// `vertex_merge` (`U(G) = U(G') + U(G'', (u,v):0)`) and `root_independence`.
pub fn check_identities<R: Rng + ?Sized>(g: &LabeledMultigraph, trials: usize, rng: &mut R) -> Result<IdentityReport> {
    let zero = Label::constant(0.0);
    let one = Label::constant(1.0);
    let mut bridge = Rule::new("bridge");
    let mut deletion = Rule::new("deletion");
    let mut parallel = Rule::new("parallel_merge");
    let mut one_node = Rule::new("one_node_product");
    let mut disjoint = Rule::new("disjoint_union");
    let mut two_node = Rule::new("two_node_decomposition");
    let mut merge = Rule::new("vertex_merge");
    let mut root = Rule::new("root_independence");
    let bridge_edges = bridges(g);

    for _ in 0..trials {
        let gi = instantiate(g, rng)?;
        let ug = u(&gi)?;
        let sg = scale(&gi)?;

        for &e in &bridge_edges {
            let ge = gi.with_label(e, Label::constant(-1.0));
            bridge.record(u(&ge)?, Complex64::new(0.0, 0.0), scale(&ge)?);
        }
        for e in 0..gi.edge_count() {
            let ge = gi.with_label(e, one);
            deletion.record(u(&ge)?, u(&gi.without_edge(e))?, scale(&ge)?);
        }
        for e in 0..gi.edge_count() {
            for f in e + 1..gi.edge_count() {
                let (a, b, Label::Const(ce)) = gi.edges()[e] else {
                    unreachable!()
                };
                let (c, d, Label::Const(cf)) = gi.edges()[f] else {
                    unreachable!()
                };
                if (a, b) != (c, d) || a == b {
                    continue;
                }
                let merged = gi.without_edge(f).with_label(e, Label::Const(ce * cf));
                parallel.record(ug, u(&merged)?, sg);
            }
        }
        if gi.n() >= 1 {
            let h = random_partner(rng)?;
            let glued = gi.glue(&h, &[(0, 0)])?;
            one_node.record(u(&glued)?, ug * u(&h)?, scale(&glued)?);
            let union = gi.disjoint_union(&h);
            disjoint.record(u(&union)?, 2.0 * ug * u(&h)?, scale(&union)?);
        }
        if gi.n() >= 2 {
            let h = random_partner(rng)?;
            let glued = gi.glue(&h, &[(0, 0), (1, 1)])?;
            let g1p = gi.identify(0, 1)?;
            let g2p = h.identify(0, 1)?;
            let mut g1pp = gi.clone();
            g1pp.add_edge(0, 1, zero)?;
            let mut g2pp = h.clone();
            g2pp.add_edge(0, 1, zero)?;
            let rhs = u(&g1p)? * u(&g2p)? + u(&g1pp)? * u(&g2pp)?;
            two_node.record(u(&glued)?, rhs, scale(&glued)?);

            let (a, b) = (rng.gen_range(0..gi.n()), rng.gen_range(0..gi.n() - 1));
            let b = if b >= a { b + 1 } else { b };
            let mut gpp = gi.clone();
            gpp.add_edge(a, b, zero)?;
            merge.record(ug, u(&gi.identify(a, b)?)? + u(&gpp)?, sg);
        }
        for r in 1..gi.n() {
            root.record(ug, u(&gi.rerooted(r))?, sg);
        }
    }

    Ok(IdentityReport {
        checks: [bridge, deletion, parallel, one_node, disjoint, two_node, merge, root]
            .into_iter()
            .map(Rule::finish)
            .collect(),
    })
}

/// The nine-node annulling gadget with constant labels `B, C, D, D'`, nodes
/// `1..=9` mapped to `0..=8`. Unlabelled edges carry variables `0..4`
/// in the order `(2,6), (5,7), (5,9), (4,7)`.
pub fn lemma10_gadget(b: Complex64, c: Complex64, d: Complex64, d_prime: Complex64) -> LabeledMultigraph {
    let one = Complex64::new(1.0, 0.0);
    let k = |x: Complex64| Label::Const(x);
    let edges = [
        (1, 2, k(-one)),
        (1, 6, k(d)),
        (1, 8, k(one / d)),
        (2, 6, Label::var(0)),
        (6, 7, k(c)),
        (6, 5, k(b)),
        (8, 5, k(-b)),
        (8, 9, k(one / c)),
        (6, 8, k(Complex64::new(0.0, 0.0))),
        (7, 9, k(Complex64::new(0.0, 0.0))),
        (5, 7, Label::var(1)),
        (5, 9, Label::var(2)),
        (3, 4, k(-one)),
        (3, 7, k(d_prime)),
        (3, 9, k(one / d_prime)),
        (4, 7, Label::var(3)),
    ];
    LabeledMultigraph::from_edges(9, edges.into_iter().map(|(a, b, l)| (a - 1, b - 1, l))).expect("static gadget")
}

/// The five-node core of the gadget on nodes `5..=9` (mapped to `0..=4`);
/// unlabelled edges `(5,7)`, `(5,9)` carry variables 0 and 1.
pub fn boxed_gadget(b: Complex64, c: Complex64) -> LabeledMultigraph {
    let k = Label::Const;
    let zero = Complex64::new(0.0, 0.0);
    let edges = [
        (6, 7, k(c)),
        (6, 8, k(zero)),
        (6, 5, k(b)),
        (8, 5, k(-b)),
        (8, 9, k(Complex64::new(1.0, 0.0) / c)),
        (7, 9, k(zero)),
        (5, 7, Label::var(0)),
        (5, 9, Label::var(1)),
    ];
    LabeledMultigraph::from_edges(5, edges.into_iter().map(|(a, b, l)| (a - 5, b - 5, l))).expect("static gadget")
}

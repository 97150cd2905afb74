//! The uncut polynomial `U(G)` of labelled multigraphs.
//!
//! `U(G)` sums, over all cuts `c` with `c(root) = 0`, the product of the
//! labels of the edges left uncut by `c`. Loops are always uncut. The root is
//! vertex 0 unless stated otherwise.

mod gadget;
mod identities;

pub use gadget::{
    build_qaoa_gadget, calibration_check, edge_energy_via_u, gadget_assignment, gadget_normalization,
    statevector_edge_energy, QaoaGadget,
};
pub use identities::{boxed_gadget, check_identities, lemma10_gadget, IdentityCheck, IdentityReport};

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::{Error, Result};

/// Largest vertex count accepted by [`u_evaluate`].
pub const MAX_EVAL_VERTICES: usize = 30;
/// Largest vertex count accepted by [`u_symbolic`].
pub const MAX_SYMBOLIC_VERTICES: usize = 24;

/// An edge label: a constant, or `coeff · x` / `coeff / x` for variable `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Label {
    Const(Complex64),
    Var {
        var: usize,
        coeff: Complex64,
        inverse: bool,
    },
}

impl Label {
    pub fn var(var: usize) -> Self {
        Label::Var {
            var,
            coeff: Complex64::new(1.0, 0.0),
            inverse: false,
        }
    }

    pub fn neg_var(var: usize) -> Self {
        Label::Var {
            var,
            coeff: Complex64::new(-1.0, 0.0),
            inverse: false,
        }
    }

    pub fn inv_var(var: usize) -> Self {
        Label::Var {
            var,
            coeff: Complex64::new(1.0, 0.0),
            inverse: true,
        }
    }

    pub fn constant(re: f64) -> Self {
        Label::Const(Complex64::new(re, 0.0))
    }

    pub fn value(&self, vars: &[Complex64]) -> Result<Complex64> {
        match *self {
            Label::Const(c) => Ok(c),
            Label::Var { var, coeff, inverse } => {
                let x = *vars.get(var).ok_or(Error::UnassignedVariable(var))?;
                Ok(if inverse { coeff / x } else { coeff * x })
            }
        }
    }
}

/// A multigraph with loops and parallel edges, each edge carrying a label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMultigraph {
    n: usize,
    edges: Vec<(usize, usize, Label)>,
}

impl LabeledMultigraph {
    pub fn new(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    /// Builds from `(u, v, label)` triples; endpoints are stored as `u <= v`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, Label)>) -> Result<Self> {
        let mut g = Self::new(n);
        for (u, v, l) in edges {
            g.add_edge(u, v, l)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, Label)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    /// Adds an edge and returns its index.
    pub fn add_edge(&mut self, u: usize, v: usize, label: Label) -> Result<usize> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) has an endpoint outside 0..{}",
                self.n
            )));
        }
        self.edges.push((u.min(v), u.max(v), label));
        Ok(self.edges.len() - 1)
    }

    /// `G - e`.
    pub fn without_edge(&self, e: usize) -> Self {
        let mut g = self.clone();
        g.edges.remove(e);
        g
    }

    /// `G` with the label of edge `e` replaced.
    pub fn with_label(&self, e: usize, label: Label) -> Self {
        let mut g = self.clone();
        g.edges[e].2 = label;
        g
    }

    /// Merges `w` into `v`. Edges between them become loops, other edges are
    /// kept (possibly becoming parallel), and vertices above `w` shift down.
    pub fn identify(&self, v: usize, w: usize) -> Result<Self> {
        if v >= self.n || w >= self.n || v == w {
            return Err(Error::InvalidArgument(format!("cannot identify {v} and {w}")));
        }
        let map = |x: usize| {
            let x = if x == w { v } else { x };
            if x > w {
                x - 1
            } else {
                x
            }
        };
        Self::from_edges(self.n - 1, self.edges.iter().map(|&(a, b, l)| (map(a), map(b), l)))
    }

    /// Vertex-disjoint union; `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let off = self.n;
        let mut g = self.clone();
        g.n += other.n;
        g.edges
            .extend(other.edges.iter().map(|&(a, b, l)| (a + off, b + off, l)));
        g
    }

    /// Union in which `other`'s vertex `glue[i].0` is identified with this
    /// graph's vertex `glue[i].1`; the remaining vertices of `other` are new.
    pub fn glue(&self, other: &Self, glue: &[(usize, usize)]) -> Result<Self> {
        let mut map = vec![usize::MAX; other.n];
        for &(o, s) in glue {
            if o >= other.n || s >= self.n {
                return Err(Error::InvalidArgument("glue vertex out of range".into()));
            }
            map[o] = s;
        }
        let mut g = self.clone();
        for m in map.iter_mut().filter(|m| **m == usize::MAX) {
            *m = g.add_vertex();
        }
        for &(a, b, l) in &other.edges {
            g.add_edge(map[a], map[b], l)?;
        }
        Ok(g)
    }

    /// Swaps vertex labels `0` and `root`.
    pub fn rerooted(&self, root: usize) -> Self {
        let f = |x: usize| match x {
            0 => root,
            x if x == root => 0,
            x => x,
        };
        let edges = self.edges.iter().map(|&(a, b, l)| (f(a).min(f(b)), f(a).max(f(b)), l));
        Self {
            n: self.n,
            edges: edges.collect(),
        }
    }

    /// Largest variable id used, plus one.
    pub fn var_count(&self) -> usize {
        self.edges
            .iter()
            .filter_map(|(_, _, l)| match l {
                Label::Var { var, .. } => Some(var + 1),
                Label::Const(_) => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn edge_values(&self, vars: &[Complex64]) -> Result<Vec<Complex64>> {
        self.edges.iter().map(|(_, _, l)| l.value(vars)).collect()
    }

    /// Number of connected components, counting isolated vertices.
    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut count = self.n;
        for &(a, b, _) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                count -= 1;
            }
        }
        count
    }
}

/// Evaluates `U(g)` with the given variable values.
pub fn u_evaluate(g: &LabeledMultigraph, vars: &[Complex64]) -> Result<Complex64> {
    let values = g.edge_values(vars)?;
    u_evaluate_values(g, &values)
}

/// Evaluates `U(g)` with an explicit value for every edge, in edge order.
pub fn u_evaluate_values(g: &LabeledMultigraph, values: &[Complex64]) -> Result<Complex64> {
    if values.len() != g.edge_count() {
        return Err(Error::DimensionMismatch {
            expected: g.edge_count(),
            got: values.len(),
        });
    }
    if g.n > MAX_EVAL_VERTICES {
        return Err(Error::SizeCap {
            what: "U-polynomial vertex count",
            size: g.n,
            cap: MAX_EVAL_VERTICES,
        });
    }
    let one = Complex64::new(1.0, 0.0);
    if g.n == 0 {
        return Ok(one);
    }
    // back[k]: edges (j, k) with j < k; loops fold into a constant factor
    let mut back: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); g.n];
    let mut loops = one;
    for (&(a, b, _), &x) in g.edges.iter().zip(values) {
        if a == b {
            loops *= x;
        } else {
            back[b].push((a, x));
        }
    }
    Ok(loops * descend(&back, 1, 0, one))
}

fn descend(back: &[Vec<(usize, Complex64)>], k: usize, bits: u64, prod: Complex64) -> Complex64 {
    if k == back.len() {
        return prod;
    }
    let mut total = Complex64::new(0.0, 0.0);
    for side in 0..2u64 {
        let mut f = prod;
        for &(j, x) in &back[k] {
            if (bits >> j) & 1 == side {
                f *= x;
            }
        }
        if f != Complex64::new(0.0, 0.0) {
            total += descend(back, k + 1, bits | side << k, f);
        }
    }
    total
}

/// `U(g)` as a map from uncut-edge sets (bit `i` = edge `i`) to coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPolynomial {
    pub edge_count: usize,
    pub monomials: BTreeMap<u128, u64>,
}

impl UPolynomial {
    pub fn evaluate(&self, values: &[Complex64]) -> Result<Complex64> {
        if values.len() != self.edge_count {
            return Err(Error::DimensionMismatch {
                expected: self.edge_count,
                got: values.len(),
            });
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (&mask, &coeff) in &self.monomials {
            let mut t = Complex64::new(coeff as f64, 0.0);
            for (i, x) in values.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    t *= x;
                }
            }
            sum += t;
        }
        Ok(sum)
    }
}

pub fn u_symbolic(g: &LabeledMultigraph) -> Result<UPolynomial> {
    if g.n > MAX_SYMBOLIC_VERTICES {
        return Err(Error::SizeCap {
            what: "symbolic U-polynomial vertex count",
            size: g.n,
            cap: MAX_SYMBOLIC_VERTICES,
        });
    }
    if g.edge_count() > 128 {
        return Err(Error::SizeCap {
            what: "symbolic U-polynomial edge count",
            size: g.edge_count(),
            cap: 128,
        });
    }
    let mut monomials = BTreeMap::new();
    let cuts = if g.n == 0 { 1u64 } else { 1u64 << (g.n - 1) };
    for m in 0..cuts {
        let c = m << 1;
        let mask = g
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b, _))| (c >> a) & 1 == (c >> b) & 1)
            .fold(0u128, |acc, (i, _)| acc | 1 << i);
        *monomials.entry(mask).or_insert(0) += 1;
    }
    Ok(UPolynomial {
        edge_count: g.edge_count(),
        monomials,
    })
}

//! Seeded Monte Carlo drivers.
//!
//! Every trial `i` of a run with seed `s` draws from its own
//! `ChaCha8Rng::seed_from_u64(mix(s, i))`, and per-trial results are collected
//! in trial order before being summed, so outputs do not depend on the number
//! of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::sim::{check_qubits, maxcut_cost, qaoa_state_capped, AngleSchedule, DiagonalCost, DEFAULT_MAX_QUBITS};
use crate::stats::{mix, Estimate};
use crate::{graph::walk_step, Error, Graph, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Worker threads for trial parallelism.
    pub workers: usize,
    /// Angles are drawn uniformly from `[0, angle_range)`.
    pub angle_range: f64,
    pub max_qubits: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            angle_range: std::f64::consts::TAU,
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

impl ExperimentConfig {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    /// Runs `f(i, rng_i)` for `i in 0..trials` and returns results in trial order.
    pub fn run_trials<T, F>(&self, trials: usize, seed: u64, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize, &mut ChaCha8Rng) -> Result<T> + Sync + Send,
    {
        self.map_ordered(0..trials, |i| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, i as u64));
            f(i, &mut rng)
        })
    }

    fn map_ordered<I, T, F>(&self, items: I, f: F) -> Result<Vec<T>>
    where
        I: IntoParallelIterator + Send,
        T: Send,
        F: Fn(I::Item) -> Result<T> + Sync + Send,
    {
        if self.workers == 0 {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        pool.install(|| items.into_par_iter().map(f).collect())
    }

    fn cost(&self, g: &Graph) -> Result<DiagonalCost> {
        check_qubits(g.n(), self.max_qubits)?;
        maxcut_cost(g)
    }

    fn energy(&self, c: &DiagonalCost, a: &AngleSchedule) -> Result<f64> {
        qaoa_state_capped(c, a, self.max_qubits)?.energy(c)
    }
}

/// Mean and standard error of a per-trial quantity at level `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
    pub p: usize,
    pub seed: u64,
}

impl GapEstimate {
    pub fn from_samples(xs: &[f64], p: usize, seed: u64) -> Self {
        let e = Estimate::from_samples(xs);
        Self {
            mean: e.mean,
            stderr: e.stderr,
            trials: e.trials,
            p,
            seed,
        }
    }
}

fn gap_pair(diffs: &[f64], p: usize, seed: u64) -> (GapEstimate, GapEstimate) {
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let sq: Vec<f64> = diffs.iter().map(|d| d * d).collect();
    (
        GapEstimate::from_samples(&abs, p, seed),
        GapEstimate::from_samples(&sq, p, seed),
    )
}

/// `(Δ, □)`: mean `|E(g1) − E(g2)|` and mean squared difference with both
/// graphs evaluated on the same random schedule.
pub fn gap_coupled(
    cfg: &ExperimentConfig,
    g1: &Graph,
    g2: &Graph,
    p: usize,
    trials: usize,
    seed: u64,
) -> Result<(GapEstimate, GapEstimate)> {
    let (c1, c2) = (cfg.cost(g1)?, cfg.cost(g2)?);
    let diffs = cfg.run_trials(trials, seed, |_, rng| {
        let a = AngleSchedule::random(p, cfg.angle_range, rng);
        Ok(cfg.energy(&c1, &a)? - cfg.energy(&c2, &a)?)
    })?;
    Ok(gap_pair(&diffs, p, seed))
}

/// As [`gap_coupled`] with an independent schedule for each graph.
pub fn gap_independent(
    cfg: &ExperimentConfig,
    g1: &Graph,
    g2: &Graph,
    p: usize,
    trials: usize,
    seed: u64,
) -> Result<(GapEstimate, GapEstimate)> {
    let (c1, c2) = (cfg.cost(g1)?, cfg.cost(g2)?);
    let diffs = cfg.run_trials(trials, seed, |_, rng| {
        let a1 = AngleSchedule::random(p, cfg.angle_range, rng);
        let a2 = AngleSchedule::random(p, cfg.angle_range, rng);
        Ok(cfg.energy(&c1, &a1)? - cfg.energy(&c2, &a2)?)
    })?;
    Ok(gap_pair(&diffs, p, seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecouplingRow {
    pub p: usize,
    pub coupled: GapEstimate,
    pub independent: GapEstimate,
}

/// Coupled and independent gaps per level; level `p` uses seed `mix(seed, p)`.
pub fn decoupling_scan(
    cfg: &ExperimentConfig,
    g1: &Graph,
    g2: &Graph,
    levels: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<DecouplingRow>> {
    levels
        .iter()
        .map(|&p| {
            let s = mix(seed, p as u64);
            Ok(DecouplingRow {
                p,
                coupled: gap_coupled(cfg, g1, g2, p, trials, s)?.0,
                independent: gap_independent(cfg, g1, g2, p, trials, s)?.0,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub mu1: Estimate,
    pub mu2: Estimate,
    /// Unbiased sample variance of `E` with its standard error.
    pub variance: Estimate,
}

/// Sample moments of the level-`p` energy over random schedules.
pub fn moments_mc(cfg: &ExperimentConfig, g: &Graph, p: usize, trials: usize, seed: u64) -> Result<MomentEstimate> {
    moments_mc_cost(cfg, &cfg.cost(g)?, p, trials, seed)
}

/// [`moments_mc`] for an arbitrary diagonal cost.
pub fn moments_mc_cost(
    cfg: &ExperimentConfig,
    c: &DiagonalCost,
    p: usize,
    trials: usize,
    seed: u64,
) -> Result<MomentEstimate> {
    let es = cfg.run_trials(trials, seed, |_, rng| {
        cfg.energy(c, &AngleSchedule::random(p, cfg.angle_range, rng))
    })?;
    let mu1 = Estimate::from_samples(&es);
    let sq: Vec<f64> = es.iter().map(|e| e * e).collect();
    let dev: Vec<f64> = es.iter().map(|e| (e - mu1.mean) * (e - mu1.mean)).collect();
    let mut variance = Estimate::from_samples(&dev);
    if trials > 1 {
        let bessel = trials as f64 / (trials - 1) as f64;
        variance.mean *= bessel;
        variance.stderr *= bessel;
    }
    Ok(MomentEstimate {
        mu1,
        mu2: Estimate::from_samples(&sq),
        variance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LandscapeRow {
    pub graph_id: String,
    pub e1: f64,
    pub e2: f64,
}

/// Maps every graph to its pair of energies under two fixed schedules.
pub fn landscape(
    cfg: &ExperimentConfig,
    graphs: &[(String, Graph)],
    a1: &AngleSchedule,
    a2: &AngleSchedule,
) -> Result<Vec<LandscapeRow>> {
    cfg.map_ordered(graphs, |(id, g)| {
        let c = cfg.cost(g)?;
        Ok(LandscapeRow {
            graph_id: id.clone(),
            e1: cfg.energy(&c, a1)?,
            e2: cfg.energy(&c, a2)?,
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WalkRow {
    /// Number of swaps from the start graph.
    pub step: usize,
    pub gap: GapEstimate,
}

/// Runs `steps` double edge swaps from `g0` and records the coupled gap
/// `Δ(G0, Gk, p)` at every step, reusing the same schedules for every `k`.
pub fn walk_experiment(
    cfg: &ExperimentConfig,
    g0: &Graph,
    steps: usize,
    p: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<WalkRow>> {
    if g0.regular_degree().is_none() {
        return Err(Error::NotRegular);
    }
    let mut walk_rng = ChaCha8Rng::seed_from_u64(mix(seed, u64::MAX));
    let mut graphs = vec![g0.clone()];
    for _ in 0..steps {
        let next = walk_step(graphs.last().expect("non-empty"), &mut walk_rng)?;
        graphs.push(next);
    }
    let schedules = cfg.run_trials(trials, seed, |_, rng| {
        Ok(AngleSchedule::random(p, cfg.angle_range, rng))
    })?;
    let c0 = cfg.cost(g0)?;
    let e0 = cfg.map_ordered(&schedules, |a| cfg.energy(&c0, a))?;
    graphs
        .iter()
        .enumerate()
        .map(|(step, g)| {
            let c = cfg.cost(g)?;
            let diffs = cfg.map_ordered(schedules.par_iter().zip(&e0), |(a, &e)| {
                Ok((cfg.energy(&c, a)? - e).abs())
            })?;
            Ok(WalkRow {
                step,
                gap: GapEstimate::from_samples(&diffs, p, seed),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationRow {
    pub first: String,
    pub second: String,
    /// Smallest level in `1..=p_max` whose largest sampled gap exceeds the
    /// threshold, if any.
    pub level: Option<usize>,
    /// Largest gap seen at the last level examined.
    pub max_gap: f64,
}

/// For each unordered pair of graphs, the first level at which some random
/// schedule separates their energies by more than `threshold`.
pub fn separation_scan(
    cfg: &ExperimentConfig,
    graphs: &[(String, Graph)],
    p_max: usize,
    trials: usize,
    seed: u64,
    threshold: f64,
) -> Result<Vec<SeparationRow>> {
    let costs: Vec<DiagonalCost> = graphs.iter().map(|(_, g)| cfg.cost(g)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for i in 0..graphs.len() {
        for j in i + 1..graphs.len() {
            let mut row = SeparationRow {
                first: graphs[i].0.clone(),
                second: graphs[j].0.clone(),
                level: None,
                max_gap: 0.0,
            };
            for p in 1..=p_max {
                let gaps = cfg.run_trials(trials, mix(seed, p as u64), |_, rng| {
                    let a = AngleSchedule::random(p, cfg.angle_range, rng);
                    Ok((cfg.energy(&costs[i], &a)? - cfg.energy(&costs[j], &a)?).abs())
                })?;
                row.max_gap = gaps.iter().copied().fold(0.0, f64::max);
                if row.max_gap > threshold {
                    row.level = Some(p);
                    break;
                }
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    fn cfg(workers: usize) -> ExperimentConfig {
        ExperimentConfig::default().with_workers(workers)
    }

    #[test]
    fn relabeled_copy_has_zero_gap() {
        let g = generate("cl:3").unwrap();
        let h = g.relabel(&[5, 3, 1, 0, 2, 4]).unwrap();
        let (d, s) = gap_coupled(&cfg(2), &g, &h, 3, 50, 1).unwrap();
        assert!(d.mean < 1e-12 && s.mean < 1e-24);
        assert_eq!((d.p, d.trials, d.seed), (3, 50, 1));
    }

    #[test]
    fn deterministic_across_worker_counts() {
        let (g1, g2) = (generate("path:4").unwrap(), generate("star:3").unwrap());
        let a = gap_coupled(&cfg(1), &g1, &g2, 2, 64, 9).unwrap();
        let b = gap_coupled(&cfg(4), &g1, &g2, 2, 64, 9).unwrap();
        assert_eq!(a, b);
        let a = gap_independent(&cfg(1), &g1, &g2, 2, 64, 9).unwrap();
        let b = gap_independent(&cfg(3), &g1, &g2, 2, 64, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn jensen_holds() {
        let (g1, g2) = (generate("cycle:5").unwrap(), generate("path:5").unwrap());
        for p in [1, 3] {
            let (d, s) = gap_coupled(&cfg(2), &g1, &g2, p, 200, p as u64).unwrap();
            assert!(d.mean * d.mean <= s.mean * (1.0 + 1e-12));
            let (d, s) = gap_independent(&cfg(2), &g1, &g2, p, 200, p as u64).unwrap();
            assert!(d.mean * d.mean <= s.mean * (1.0 + 1e-12));
        }
    }

    #[test]
    fn stderr_scales_as_inverse_root_trials() {
        let (g1, g2) = (generate("cycle:4").unwrap(), generate("star:4").unwrap());
        let (small, _) = gap_coupled(&cfg(2), &g1, &g2, 2, 1000, 3).unwrap();
        let (large, _) = gap_coupled(&cfg(2), &g1, &g2, 2, 4000, 4).unwrap();
        let ratio = large.stderr / small.stderr;
        assert!((0.4..=0.6).contains(&ratio), "{ratio}");
    }

    #[test]
    fn level_zero_gaps_vanish_for_equal_edge_counts() {
        let (g1, g2) = (generate("path:4").unwrap(), generate("star:3").unwrap());
        let rows = decoupling_scan(&cfg(1), &g1, &g2, &[0], 10, 0).unwrap();
        assert_eq!(rows[0].coupled.mean, 0.0);
        assert_eq!(rows[0].independent.mean, 0.0);
    }

    #[test]
    fn independent_square_of_identical_graphs_is_twice_the_variance() {
        let g = generate("cycle:4").unwrap();
        let (_, sq) = gap_independent(&cfg(2), &g, &g, 2, 4000, 11).unwrap();
        let m = moments_mc(&cfg(2), &g, 2, 4000, 12).unwrap();
        let target = 2.0 * m.variance.mean;
        let tol = 4.0 * (sq.stderr + 2.0 * m.variance.stderr);
        assert!((sq.mean - target).abs() <= tol, "{} vs {target}", sq.mean);
    }

    #[test]
    fn independent_square_matches_moment_reconstruction() {
        // □_indep = A + B − 2CD with A, B second moments and C, D means
        let (g1, g2) = (generate("path:4").unwrap(), generate("cycle:3").unwrap());
        let (_, sq) = gap_independent(&cfg(2), &g1, &g2, 2, 4000, 21).unwrap();
        let m1 = moments_mc(&cfg(2), &g1, 2, 4000, 22).unwrap();
        let m2 = moments_mc(&cfg(2), &g2, 2, 4000, 23).unwrap();
        let recon = m1.mu2.mean + m2.mu2.mean - 2.0 * m1.mu1.mean * m2.mu1.mean;
        let tol = 4.0
            * (sq.stderr
                + m1.mu2.stderr
                + m2.mu2.stderr
                + 2.0 * (m1.mu1.stderr * m2.mu1.mean + m2.mu1.stderr * m1.mu1.mean));
        assert!((sq.mean - recon).abs() <= tol);
        let flat = m1.variance.mean + m2.variance.mean;
        assert!(sq.mean + 4.0 * sq.stderr >= flat);
    }

    #[test]
    fn single_edge_moments() {
        let g = generate("path:2").unwrap();
        let m = moments_mc(&cfg(2), &g, 4, 20_000, 5).unwrap();
        assert!((m.mu1.mean - 0.5).abs() <= 3.0 * m.mu1.stderr);
        assert!((m.variance.mean - 0.0830078125).abs() <= 4.0 * m.variance.stderr);
    }

    #[test]
    fn landscape_collapses_for_equal_triangle_counts() {
        let graphs: Vec<(String, Graph)> = ["cl:5", "ml:5"]
            .iter()
            .map(|s| (s.to_string(), generate(s).unwrap()))
            .collect();
        let a1 = AngleSchedule::new(vec![0.3], vec![1.1]).unwrap();
        let a2 = AngleSchedule::new(vec![2.0], vec![0.4]).unwrap();
        let rows = landscape(&cfg(2), &graphs, &a1, &a2).unwrap();
        assert!((rows[0].e1 - rows[1].e1).abs() < 1e-12);
        assert!((rows[0].e2 - rows[1].e2).abs() < 1e-12);
        assert!(landscape(&cfg(1), &[], &a1, &a2).unwrap().is_empty());
    }

    #[test]
    fn walk_starts_at_zero_and_is_deterministic() {
        let g = generate("cl:4").unwrap();
        let a = walk_experiment(&cfg(1), &g, 4, 2, 20, 8).unwrap();
        let b = walk_experiment(&cfg(3), &g, 4, 2, 20, 8).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        assert_eq!(a[0].gap.mean, 0.0);
        assert_eq!(
            walk_experiment(&cfg(1), &generate("path:4").unwrap(), 2, 1, 2, 0),
            Err(Error::NotRegular)
        );
    }

    #[test]
    fn separation_levels() {
        let graphs: Vec<(String, Graph)> = ["cl:4", "ml:4"]
            .iter()
            .map(|s| (s.to_string(), generate(s).unwrap()))
            .collect();
        let rows = separation_scan(&cfg(2), &graphs, 2, 20, 1, 1e-9).unwrap();
        assert_eq!(rows.len(), 1);
        // both triangle-free cubic on 8 vertices: equal at level 1
        assert_ne!(rows[0].level, Some(1));
        let tri = vec![
            ("k4".to_string(), generate("complete:4").unwrap()),
            ("c4".to_string(), generate("cycle:4").unwrap()),
        ];
        let rows = separation_scan(&cfg(1), &tri, 2, 5, 1, 1e-9).unwrap();
        assert_eq!(rows[0].level, Some(1));
        let g = generate("cycle:5").unwrap();
        let same = vec![
            ("a".to_string(), g.clone()),
            ("b".to_string(), g.relabel(&[4, 2, 0, 1, 3]).unwrap()),
        ];
        let rows = separation_scan(&cfg(1), &same, 3, 5, 1, 1e-9).unwrap();
        assert_eq!(rows[0].level, None);
    }
}

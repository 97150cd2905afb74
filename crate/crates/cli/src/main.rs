mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qaoalab::closed_form::{level1_graph_energy, level2_cycle_energy, triangle_theorem_energy};
use qaoalab::dynamics::{angle_averaged_moments, Backend};
use qaoalab::experiments::{
    decoupling_scan, gap_coupled, gap_independent, landscape, moments_mc, separation_scan, walk_experiment,
    ExperimentConfig,
};
use qaoalab::graph::{generate, parse_graph6};
use qaoalab::sim::{maxcut_cost, qaoa_state_capped};
use qaoalab::stats::spearman;
use qaoalab::upoly::{calibration_check, edge_energy_via_u, statevector_edge_energy};
use qaoalab::wcsp::{build_h33, build_h6, s_count_grid, wcsp_energy_gap};
use qaoalab::{AngleSchedule, Error, Graph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use output::{num, Table};

/// QAOA MAX-CUT energies as graph-structure probes.
#[derive(Parser)]
#[command(name = "qaoalab", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit one JSON object {params, rows, diagnostics} instead of CSV.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for Monte Carlo trials (output does not depend on it).
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Largest state vector, in qubits.
    #[arg(long, global = true, default_value_t = qaoalab::sim::DEFAULT_MAX_QUBITS)]
    max_qubits: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Energy of one graph under one schedule.
    Energy(EnergyArgs),
    /// Mean energy gap between two graphs over random schedules.
    Gap(GapArgs),
    /// Coupled and independent gaps over a range of levels.
    Decouple(DecoupleArgs),
    /// Energies of many graphs under two random schedules.
    Landscape(LandscapeArgs),
    /// First and second moments of the energy over random schedules.
    Moments(MomentsArgs),
    /// Exact angle-averaged energy variance from the density-matrix dynamics.
    Variance(VarianceArgs),
    /// Gap to the start graph along a degree-preserving swap walk.
    Walk(WalkArgs),
    /// First level at which each pair of graphs is separated.
    Separate(SeparateArgs),
    /// Energy agreement and S-count grid of the two six-bit WCSP instances.
    WcspCheck(WcspArgs),
    /// Per-edge energy through the U-polynomial gadget against the state vector.
    UpolyCheck(UpolyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EnergyMethod {
    Sim,
    Level1,
    Triangle,
    Level2cycle,
    Upoly,
}

#[derive(Args)]
struct EnergyArgs {
    /// Graph spec, e.g. cycle:8, cl:4, g6:<code>, file:<path>.
    #[arg(long)]
    graph: String,
    #[arg(long)]
    p: usize,
    /// Comma-separated angles in radians; a `pi` suffix multiplies by π.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    gamma: String,
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    beta: String,
    #[arg(long, value_enum, default_value_t = EnergyMethod::Sim)]
    method: EnergyMethod,
}

#[derive(Args)]
struct TrialArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Angles are drawn from [0, x·π).
    #[arg(long, default_value_t = 2.0)]
    angle_range: f64,
}

#[derive(Args)]
struct GapArgs {
    #[arg(long)]
    g1: String,
    #[arg(long)]
    g2: String,
    #[arg(long)]
    p: usize,
    /// Draw a separate schedule for each graph.
    #[arg(long)]
    independent: bool,
    #[command(flatten)]
    t: TrialArgs,
}

#[derive(Args)]
struct DecoupleArgs {
    #[arg(long)]
    g1: String,
    #[arg(long)]
    g2: String,
    /// Levels as `a:b:step` (inclusive) or a single level.
    #[arg(long, default_value = "1:10:1")]
    levels: String,
    #[command(flatten)]
    t: TrialArgs,
}

#[derive(Args)]
struct LandscapeArgs {
    /// File with one graph spec or graph6 string per line; `#` starts a comment.
    #[arg(long)]
    graphs: PathBuf,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2.0)]
    angle_range: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum MomentsMethod {
    Dynamics,
    Mc,
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long)]
    graph: String,
    #[arg(long)]
    p: usize,
    #[arg(long, value_enum, default_value_t = MomentsMethod::Dynamics)]
    method: MomentsMethod,
    #[command(flatten)]
    t: TrialArgs,
}

#[derive(Args)]
struct VarianceArgs {
    #[arg(long)]
    graph: String,
    #[arg(long)]
    p: usize,
}

#[derive(Args)]
struct WalkArgs {
    #[arg(long)]
    graph: String,
    #[arg(long, default_value_t = 20)]
    steps: usize,
    #[arg(long)]
    p: usize,
    #[command(flatten)]
    t: TrialArgs,
}

#[derive(Args)]
struct SeparateArgs {
    /// File with one graph spec or graph6 string per line.
    #[arg(long)]
    graphs: PathBuf,
    #[arg(long, default_value_t = 4)]
    pmax: usize,
    #[arg(long, default_value_t = 1e-9)]
    threshold: f64,
    #[command(flatten)]
    t: TrialArgs,
}

#[derive(Args)]
struct WcspArgs {
    #[arg(long, default_value_t = 8)]
    pmax: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct UpolyArgs {
    #[arg(long)]
    graph: String,
    /// Edge as `u,v`.
    #[arg(long)]
    edge: String,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

const WCSP_TOL: f64 = 1e-10;
const UPOLY_TOL: f64 = 1e-8;

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Calibration(_) | Error::SingularMixerAngle { .. } | Error::NoValidSwap(_) | Error::Io(_) => {
                Failure::Numerical(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(Table, bool), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(table, ok)| {
        table
            .emit(cli.json, cli.out.as_deref())
            .map_err(|e| Failure::Numerical(format!("writing output: {e}")))?;
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: check failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let cfg = ExperimentConfig {
        workers: cli.workers,
        max_qubits: cli.max_qubits,
        ..ExperimentConfig::default()
    };
    match &cli.cmd {
        Command::Energy(a) => energy(cli, a),
        Command::Gap(a) => gap(&cfg, a),
        Command::Decouple(a) => decouple(&cfg, a),
        Command::Landscape(a) => landscape_cmd(&cfg, a),
        Command::Moments(a) => moments(&cfg, a),
        Command::Variance(a) => variance(a),
        Command::Walk(a) => walk(&cfg, a),
        Command::Separate(a) => separate(&cfg, a),
        Command::WcspCheck(a) => wcsp_check(a),
        Command::UpolyCheck(a) => upoly_check(a),
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Radians, or a multiple of π with a `pi` suffix (`0.25pi`, `-pi`).
fn parse_angle(s: &str) -> Result<f64, Failure> {
    let s = s.trim();
    let bad = || usage(format!("bad angle `{s}`"));
    match s.strip_suffix("pi") {
        Some("") => Ok(PI),
        Some("-") => Ok(-PI),
        Some(k) => k
            .trim_end_matches('*')
            .parse::<f64>()
            .map(|k| k * PI)
            .map_err(|_| bad()),
        None => s.parse::<f64>().map_err(|_| bad()),
    }
}

fn parse_angles(s: &str) -> Result<Vec<f64>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_angle).collect()
}

fn parse_levels(s: &str) -> Result<Vec<usize>, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let int = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("bad levels `{s}`")))
    };
    let (a, b, step) = match parts.as_slice() {
        [a] => (int(a)?, int(a)?, 1),
        [a, b] => (int(a)?, int(b)?, 1),
        [a, b, c] => (int(a)?, int(b)?, int(c)?),
        _ => return Err(usage(format!("bad levels `{s}`"))),
    };
    if step == 0 || a > b {
        return Err(usage(format!("bad levels `{s}`")));
    }
    Ok((a..=b).step_by(step).collect())
}

fn parse_edge(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || usage(format!("bad edge `{s}`, expected u,v"));
    let (u, v) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        u.trim().parse().map_err(|_| bad())?,
        v.trim().parse().map_err(|_| bad())?,
    ))
}

fn graph_arg(spec: &str) -> Result<Graph, Failure> {
    Ok(generate(spec)?)
}

fn read_graph_list(path: &PathBuf) -> Result<Vec<(String, Graph)>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            let g = generate(l).or_else(|e| parse_graph6(l).map_err(|_| e))?;
            Ok((l.to_string(), g))
        })
        .collect()
}

fn schedule(p: usize, gamma: &str, beta: &str) -> Result<AngleSchedule, Failure> {
    let (g, b) = (parse_angles(gamma)?, parse_angles(beta)?);
    if g.len() != p || b.len() != p {
        return Err(usage(format!(
            "--p {p} needs {p} gamma and beta angles, got {} and {}",
            g.len(),
            b.len()
        )));
    }
    Ok(AngleSchedule::new(g, b)?)
}

fn range(x: f64) -> Result<f64, Failure> {
    if x.is_finite() && x > 0.0 {
        Ok(x * PI)
    } else {
        Err(usage("--angle-range must be positive"))
    }
}

fn energy(cli: &Cli, a: &EnergyArgs) -> Outcome {
    let g = graph_arg(&a.graph)?;
    let s = schedule(a.p, &a.gamma, &a.beta)?;
    let one_layer = |name: &str| {
        if a.p == 1 {
            Ok((s.gamma()[0], s.beta()[0]))
        } else {
            Err(usage(format!("method {name} needs --p 1")))
        }
    };
    let (method, e) = match a.method {
        EnergyMethod::Sim => {
            let c = maxcut_cost(&g)?;
            ("sim", qaoa_state_capped(&c, &s, cli.max_qubits)?.energy(&c)?)
        }
        EnergyMethod::Level1 => {
            let (gm, bt) = one_layer("level1")?;
            ("level1", level1_graph_energy(&g, gm, bt))
        }
        EnergyMethod::Triangle => {
            let (gm, bt) = one_layer("triangle")?;
            if g.regular_degree() != Some(3) {
                return Err(Error::NotCubic.into());
            }
            ("triangle", triangle_theorem_energy(g.n(), g.triangle_count(), gm, bt)?)
        }
        EnergyMethod::Level2cycle => {
            if g.regular_degree() != Some(2) || !g.is_connected() {
                return Err(usage("method level2cycle needs a cycle graph"));
            }
            ("level2cycle", level2_cycle_energy(g.n(), &s)?)
        }
        EnergyMethod::Upoly => {
            let mut total = 0.0;
            for &e in g.edges() {
                total += edge_energy_via_u(&g, e, &s)?;
            }
            ("upoly", total)
        }
    };
    let mut t = Table::new(&["graph", "p", "method", "energy"]);
    t.param("graph", a.graph.as_str())
        .param("p", a.p)
        .param("gamma", s.gamma().to_vec())
        .param("beta", s.beta().to_vec());
    t.push(vec![a.graph.as_str().into(), a.p.into(), method.into(), num(e)]);
    Ok((t, true))
}

fn trial_params(t: &mut Table, a: &TrialArgs) {
    t.param("trials", a.trials)
        .param("seed", a.seed)
        .param("angle_range_pi", a.angle_range);
}

fn gap(cfg: &ExperimentConfig, a: &GapArgs) -> Outcome {
    let (g1, g2) = (graph_arg(&a.g1)?, graph_arg(&a.g2)?);
    let cfg = ExperimentConfig {
        angle_range: range(a.t.angle_range)?,
        ..cfg.clone()
    };
    let f = if a.independent { gap_independent } else { gap_coupled };
    let (d, s) = f(&cfg, &g1, &g2, a.p, a.t.trials, a.t.seed)?;
    let mut t = Table::new(&[
        "p",
        "trials",
        "seed",
        "delta_mean",
        "delta_stderr",
        "square_mean",
        "square_stderr",
    ]);
    t.param("g1", a.g1.as_str())
        .param("g2", a.g2.as_str())
        .param("independent", a.independent);
    trial_params(&mut t, &a.t);
    t.diag("jensen_ok", d.mean * d.mean <= s.mean * (1.0 + 1e-12));
    t.push(vec![
        a.p.into(),
        a.t.trials.into(),
        a.t.seed.into(),
        num(d.mean),
        num(d.stderr),
        num(s.mean),
        num(s.stderr),
    ]);
    Ok((t, true))
}

fn decouple(cfg: &ExperimentConfig, a: &DecoupleArgs) -> Outcome {
    let (g1, g2) = (graph_arg(&a.g1)?, graph_arg(&a.g2)?);
    let levels = parse_levels(&a.levels)?;
    let cfg = ExperimentConfig {
        angle_range: range(a.t.angle_range)?,
        ..cfg.clone()
    };
    let rows = decoupling_scan(&cfg, &g1, &g2, &levels, a.t.trials, a.t.seed)?;
    let mut t = Table::new(&[
        "p",
        "trials",
        "delta_mean",
        "delta_stderr",
        "indep_mean",
        "indep_stderr",
    ]);
    t.param("g1", a.g1.as_str())
        .param("g2", a.g2.as_str())
        .param("levels", a.levels.as_str());
    trial_params(&mut t, &a.t);
    for r in rows {
        t.push(vec![
            r.p.into(),
            r.coupled.trials.into(),
            num(r.coupled.mean),
            num(r.coupled.stderr),
            num(r.independent.mean),
            num(r.independent.stderr),
        ]);
    }
    Ok((t, true))
}

fn landscape_cmd(cfg: &ExperimentConfig, a: &LandscapeArgs) -> Outcome {
    let graphs = read_graph_list(&a.graphs)?;
    let r = range(a.angle_range)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let s1 = AngleSchedule::random(a.p, r, &mut rng);
    let s2 = AngleSchedule::random(a.p, r, &mut rng);
    let rows = landscape(cfg, &graphs, &s1, &s2)?;
    let mut t = Table::new(&["graph_id", "e1", "e2"]);
    t.param("p", a.p)
        .param("seed", a.seed)
        .param("gamma1", s1.gamma().to_vec())
        .param("beta1", s1.beta().to_vec())
        .param("gamma2", s2.gamma().to_vec())
        .param("beta2", s2.beta().to_vec());
    for row in rows {
        t.push(vec![row.graph_id.into(), num(row.e1), num(row.e2)]);
    }
    Ok((t, true))
}

fn moments(cfg: &ExperimentConfig, a: &MomentsArgs) -> Outcome {
    let g = graph_arg(&a.graph)?;
    let mut t = Table::new(&[
        "p",
        "method",
        "mu1",
        "mu1_stderr",
        "mu2",
        "mu2_stderr",
        "variance",
        "variance_stderr",
    ]);
    t.param("graph", a.graph.as_str()).param("p", a.p);
    match a.method {
        MomentsMethod::Dynamics => {
            let (m1, var) = angle_averaged_moments(&maxcut_cost(&g)?, a.p, Backend::Quadrature)?;
            t.param("method", "dynamics");
            t.push(vec![
                a.p.into(),
                "dynamics".into(),
                num(m1),
                Value::Null,
                num(var + m1 * m1),
                Value::Null,
                num(var),
                Value::Null,
            ]);
        }
        MomentsMethod::Mc => {
            let cfg = ExperimentConfig {
                angle_range: range(a.t.angle_range)?,
                ..cfg.clone()
            };
            let m = moments_mc(&cfg, &g, a.p, a.t.trials, a.t.seed)?;
            t.param("method", "mc");
            trial_params(&mut t, &a.t);
            t.push(vec![
                a.p.into(),
                "mc".into(),
                num(m.mu1.mean),
                num(m.mu1.stderr),
                num(m.mu2.mean),
                num(m.mu2.stderr),
                num(m.variance.mean),
                num(m.variance.stderr),
            ]);
        }
    }
    Ok((t, true))
}

fn variance(a: &VarianceArgs) -> Outcome {
    let g = graph_arg(&a.graph)?;
    let v = qaoalab::dynamics::angle_averaged_variance(&g, a.p)?;
    let mut t = Table::new(&["p", "variance"]);
    t.param("graph", a.graph.as_str()).param("p", a.p);
    t.push(vec![a.p.into(), num(v)]);
    Ok((t, true))
}

fn walk(cfg: &ExperimentConfig, a: &WalkArgs) -> Outcome {
    let g = graph_arg(&a.graph)?;
    let cfg = ExperimentConfig {
        angle_range: range(a.t.angle_range)?,
        ..cfg.clone()
    };
    let rows = walk_experiment(&cfg, &g, a.steps, a.p, a.t.trials, a.t.seed)?;
    let mut t = Table::new(&["step", "trials", "gap_mean", "gap_stderr"]);
    t.param("graph", a.graph.as_str())
        .param("steps", a.steps)
        .param("p", a.p);
    trial_params(&mut t, &a.t);
    let ks: Vec<f64> = rows.iter().map(|r| r.step as f64).collect();
    let gs: Vec<f64> = rows.iter().map(|r| r.gap.mean).collect();
    if rows.len() > 1 {
        t.diag("spearman", num(spearman(&ks, &gs)));
    }
    for r in rows {
        t.push(vec![
            r.step.into(),
            r.gap.trials.into(),
            num(r.gap.mean),
            num(r.gap.stderr),
        ]);
    }
    Ok((t, true))
}

fn separate(cfg: &ExperimentConfig, a: &SeparateArgs) -> Outcome {
    let graphs = read_graph_list(&a.graphs)?;
    let cfg = ExperimentConfig {
        angle_range: range(a.t.angle_range)?,
        ..cfg.clone()
    };
    let rows = separation_scan(&cfg, &graphs, a.pmax, a.t.trials, a.t.seed, a.threshold)?;
    let mut t = Table::new(&["first", "second", "level", "max_gap"]);
    t.param("pmax", a.pmax).param("threshold", a.threshold);
    trial_params(&mut t, &a.t);
    for r in rows {
        t.push(vec![
            r.first.into(),
            r.second.into(),
            r.level.map_or(Value::Null, Value::from),
            num(r.max_gap),
        ]);
    }
    Ok((t, true))
}

fn wcsp_check(a: &WcspArgs) -> Outcome {
    let gap = wcsp_energy_gap(a.pmax, a.trials, a.seed)?;
    let (g33, g6) = (s_count_grid(&build_h33()), s_count_grid(&build_h6()));
    let mismatches: Vec<Value> = g33
        .iter()
        .zip(&g6)
        .filter(|(x, y)| x != y)
        .map(|(x, _)| format!("S({},{},{},{},{})", x.eps1, x.eps2, x.w1, x.w2, x.d).into())
        .collect();
    let mut t = Table::new(&["pmax", "trials", "seed", "max_gap", "grid_size", "grid_mismatches"]);
    t.param("pmax", a.pmax).param("trials", a.trials).param("seed", a.seed);
    t.diag("gap_ok", gap <= WCSP_TOL)
        .diag("mismatched_tuples", mismatches.clone());
    t.push(vec![
        a.pmax.into(),
        a.trials.into(),
        a.seed.into(),
        num(gap),
        g33.len().into(),
        mismatches.len().into(),
    ]);
    Ok((t, gap <= WCSP_TOL))
}

fn upoly_check(a: &UpolyArgs) -> Outcome {
    let g = graph_arg(&a.graph)?;
    let e = parse_edge(&a.edge)?;
    if !g.has_edge(e.0, e.1) {
        return Err(Error::EdgeAbsent(e.0, e.1).into());
    }
    let calibration = calibration_check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut t = Table::new(&["trial", "via_u", "statevector", "abs_diff"]);
    t.param("graph", a.graph.as_str())
        .param("edge", vec![e.0, e.1])
        .param("p", a.p);
    t.param("trials", a.trials).param("seed", a.seed);
    t.diag("calibration_residual", num(calibration));
    let mut worst = 0.0f64;
    for i in 0..a.trials {
        let s = AngleSchedule::random(a.p, 2.0 * PI, &mut rng);
        let via_u = edge_energy_via_u(&g, e, &s)?;
        let sv = statevector_edge_energy(&g, e, &s)?;
        worst = worst.max((via_u - sv).abs());
        t.push(vec![i.into(), num(via_u), num(sv), num((via_u - sv).abs())]);
    }
    t.diag("max_abs_diff", num(worst));
    Ok((t, worst <= UPOLY_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-15
    }

    #[test]
    fn angles() {
        assert!(close(parse_angle("0.25pi").ok().unwrap(), PI / 4.0));
        assert!(close(parse_angle("pi").ok().unwrap(), PI));
        assert!(close(parse_angle("-pi").ok().unwrap(), -PI));
        assert!(close(parse_angle("0.7").ok().unwrap(), 0.7));
        assert!(parse_angle("x").is_err());
        assert_eq!(parse_angles(" ").ok().unwrap(), Vec::<f64>::new());
        assert_eq!(parse_angles("1,2").ok().unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn levels() {
        assert_eq!(parse_levels("1:10:3").ok().unwrap(), vec![1, 4, 7, 10]);
        assert_eq!(parse_levels("5").ok().unwrap(), vec![5]);
        assert!(parse_levels("3:1").is_err());
        assert!(parse_levels("1:3:0").is_err());
    }
}

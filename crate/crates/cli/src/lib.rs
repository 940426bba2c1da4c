//! Command-line front end for `rainbow-core`.
//!
//! Exit codes: 0 success, 1 verified negative (no stacking, counterexample,
//! failed check), 2 input or usage error, 3 guard or capability limit,
//! 4 inconclusive because a search budget ran out.

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_traits::{ToPrimitive, Zero};
use rainbow_core::collision::{
    build_collision_graph, count_proper_colorings_with, entropy_diagnostic, m2_closed_form_for, pair_correlation_with,
    CountingGuard, Provenance,
};
use rainbow_core::experiments::{
    exact_existence_probability_with, gamma_lemma_check, phi_concavity_check, run_sweep_detailed,
    verify_cayley_no_stacking, verify_odd_question, ExperimentConfig, OddOptions, OddStatus, VerificationStatus,
};
use rainbow_core::moments::{first_moment, first_moment_exact, first_moment_upper_bound, ln_e_nmr, threshold_formulas};
use rainbow_core::output::{emit_outputs, to_csv, to_json, OutputFormat};
use rainbow_core::rng::derive_seed;
use rainbow_core::stacking::{
    count_rainbow_stackings_with, find_rainbow_stacking_with, read_instance, CountGuard, SearchOptions,
};
use rainbow_core::{
    weight_report, EdgeColoring, Error, PermTuple, SearchBudget, SearchStatus, StackingInstance,
};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAPABILITY: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "rainbow", version, about = "Rainbow stackings of edge-colored complete graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for one rainbow stacking
    Find(InstanceArgs),
    /// Count all rainbow stackings exactly
    Count(InstanceArgs),
    /// First-moment quantities for (n, m, r)
    Moments(MomentArgs),
    /// Threshold palette sizes r_star, r_lower, r_upper
    Thresholds(ThresholdArgs),
    /// Collision graph of a permutation tuple
    Gpi(GpiArgs),
    /// Seeded Monte Carlo sweep over palette sizes
    Sweep(SweepArgs),
    /// Exact existence probability by enumerating all coloring tuples
    ExactProb(ExactArgs),
    /// Check that the Cayley sum pair on F_2^k admits no stacking
    VerifyCayley(CayleyArgs),
    /// Check that every pair of proper colorings of K_n (n odd) admits a stacking
    VerifyOdd(OddArgs),
    /// Numeric checks of the gamma lemma and the shape of phi_q
    LemmaChecks(LemmaArgs),
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Node cap for each search (accepts forms like 1e7)
    #[arg(long, value_parser = parse_count)]
    pub max_nodes: Option<u64>,
    /// Wall-clock cap in milliseconds for each search
    #[arg(long, value_parser = parse_count)]
    pub max_millis: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        SearchBudget { max_nodes: self.max_nodes, max_millis: self.max_millis }
    }
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// Instance file; without it the colorings are drawn from --n, --m, --r, --seed
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Try the most constrained variable first
    #[arg(long)]
    pub most_constrained: bool,
    #[arg(long)]
    pub override_guards: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub omega: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GpiArgs {
    /// Permutations in 0-based one-line notation separated by ';', e.g. "0,1,2;1,0,2"
    #[arg(long)]
    pub pi: String,
    /// Palette size for the coloring counts
    #[arg(long)]
    pub r: Option<u32>,
    /// Write the adjacency list here
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub override_guards: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long)]
    pub r_min: u32,
    #[arg(long)]
    pub r_max: u32,
    #[arg(long, default_value_t = 1)]
    pub r_step: u32,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub omega: f64,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Worker threads (0 uses every core)
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Write <out>.csv, <out>.json and <out>.dat
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub override_guards: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CayleyArgs {
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Allow k >= 4
    #[arg(long)]
    pub override_guards: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct OddArgs {
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Also search every explicit colored instance
    #[arg(long)]
    pub literal: bool,
    /// Directory for a counterexample certificate
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub override_guards: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    /// Largest K for the gamma lemma
    #[arg(long, default_value_t = 200)]
    pub k: u64,
    #[arg(long, default_value_t = 10_000)]
    pub f_max: u64,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 0.01, 0.1, 1.0])]
    pub q: Vec<f64>,
    /// Seed for the random subintervals
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

/// Accepts plain integers and integral floats such as `1e7`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return if v == 0 { Err("must be at least 1".into()) } else { Ok(v) };
    }
    let x: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if !x.is_finite() || x < 1.0 || x.fract() != 0.0 || x >= 18_446_744_073_709_551_615.0 {
        return Err(format!("{s} is not a positive integer"));
    }
    Ok(x as u64)
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Capability(_) => EXIT_CAPABILITY,
            _ => EXIT_INPUT,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_INPUT, msg: e.to_string() }
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, msg: msg.into() }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Find(a) => find(a, out),
        Command::Count(a) => count(a, out),
        Command::Moments(a) => moments(a, out),
        Command::Thresholds(a) => thresholds(a, out),
        Command::Gpi(a) => gpi(a, out),
        Command::Sweep(a) => sweep(a, out, err),
        Command::ExactProb(a) => exact_prob(a, out),
        Command::VerifyCayley(a) => verify_cayley(a, out),
        Command::VerifyOdd(a) => verify_odd(a, out),
        Command::LemmaChecks(a) => lemma_checks(a, out),
    }
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    out.write_all(s.as_bytes())?;
    Ok(())
}

/// The colorings `derive_seed([seed, k])` for `k = 0..m`.
pub fn generated_instance(n: usize, m: usize, r: u32, seed: u64) -> rainbow_core::Result<StackingInstance> {
    let colorings = (0..m as u64)
        .map(|k| EdgeColoring::random(n, r, derive_seed(&[seed, k])))
        .collect::<rainbow_core::Result<Vec<_>>>()?;
    StackingInstance::new(colorings)
}

fn load_instance(a: &InstanceArgs) -> Result<StackingInstance, Failure> {
    if let Some(path) = &a.instance {
        if a.n.is_some() || a.r.is_some() || a.seed.is_some() {
            return Err(input_error("--instance cannot be combined with --n, --r or --seed"));
        }
        return Ok(read_instance(path)?);
    }
    match (a.n, a.r, a.seed) {
        (Some(n), Some(r), Some(seed)) => Ok(generated_instance(n, a.m, r, seed)?),
        _ => Err(input_error("give --instance, or --n, --r and --seed to draw random colorings")),
    }
}

fn find(a: InstanceArgs, out: &mut dyn Write) -> Outcome {
    let inst = load_instance(&a)?;
    let budget = a.budget.budget();
    budget.validate()?;
    let outcome = find_rainbow_stacking_with(&inst, budget, SearchOptions { most_constrained: a.most_constrained });
    let witness: Option<Vec<String>> =
        outcome.witness.as_ref().map(|w| w.perms().iter().map(ToString::to_string).collect());
    if a.json {
        print_json(
            out,
            &json!({
                "n": inst.n(), "m": inst.m(), "r": inst.r(),
                "status": outcome.status.to_string(),
                "nodes_expanded": outcome.nodes_expanded,
                "witness": witness,
            }),
        )?;
    } else {
        writeln!(out, "status {}", outcome.status)?;
        writeln!(out, "nodes {}", outcome.nodes_expanded)?;
        for (k, p) in witness.iter().flatten().enumerate() {
            writeln!(out, "sigma_{} {p}", k + 1)?;
        }
    }
    Ok(match outcome.status {
        SearchStatus::Found => EXIT_OK,
        SearchStatus::ExhaustedNoSolution => EXIT_NEGATIVE,
        SearchStatus::BudgetExceeded => EXIT_INCONCLUSIVE,
    })
}

fn count(a: InstanceArgs, out: &mut dyn Write) -> Outcome {
    let inst = load_instance(&a)?;
    let guard = if a.override_guards { CountGuard::overridden() } else { CountGuard::default() };
    let c = count_rainbow_stackings_with(&inst, guard)?;
    if a.json {
        print_json(
            out,
            &json!({
                "n": inst.n(), "m": inst.m(), "r": inst.r(),
                "total": c.total.to_string(),
                "reduced": c.reduced.to_string(),
            }),
        )?;
    } else {
        writeln!(out, "total {}", c.total)?;
        writeln!(out, "reduced {}", c.reduced)?;
    }
    Ok(if c.total.is_zero() { EXIT_NEGATIVE } else { EXIT_OK })
}

/// Exact rationals are printed only while they stay short.
const EXACT_MOMENT_MAX_DIGITS: usize = 4_000;

fn moments(a: MomentArgs, out: &mut dyn Write) -> Outcome {
    let fm = first_moment(a.n, a.m, a.r)?;
    let bound = first_moment_upper_bound(a.n, a.m, a.r)?;
    let ln_e = ln_e_nmr(a.n, a.m, a.r)?;
    let exact = (a.n <= 64 && a.m <= 16)
        .then(|| first_moment_exact(a.n, a.m, a.r))
        .transpose()?
        .filter(|ex| ex.expected_z.to_string().len() <= EXACT_MOMENT_MAX_DIGITS);
    if a.json {
        print_json(
            out,
            &json!({
                "n": a.n, "m": a.m, "r": a.r,
                "e_nmr": fm.e_nmr.to_scientific(20),
                "ln_e_nmr": ln_e.as_ref().map(|x| x.to_scientific(20)),
                "expected_z": fm.expected_z.to_scientific(20),
                "upper_bound": bound.to_scientific(20),
                "e_nmr_exact": exact.as_ref().map(|ex| ex.e_nmr.to_string()),
                "expected_z_exact": exact.as_ref().map(|ex| ex.expected_z.to_string()),
            }),
        )?;
    } else {
        writeln!(out, "E_nmr {}", fm.e_nmr)?;
        match &ln_e {
            Some(x) => writeln!(out, "ln_E_nmr {x}")?,
            None => writeln!(out, "ln_E_nmr -inf")?,
        }
        writeln!(out, "E[Z] {}", fm.expected_z)?;
        writeln!(out, "upper_bound {bound}")?;
        if let Some(ex) = &exact {
            writeln!(out, "E_nmr_exact {}", ex.e_nmr)?;
            writeln!(out, "E[Z]_exact {}", ex.expected_z)?;
        }
    }
    Ok(EXIT_OK)
}

fn thresholds(a: ThresholdArgs, out: &mut dyn Write) -> Outcome {
    let t = threshold_formulas(a.n, a.m, a.omega)?;
    if a.json {
        print_json(
            out,
            &json!({
                "n": a.n, "m": a.m, "omega": a.omega,
                "r_star": t.r_star, "r_lower": t.r_lower, "r_upper": t.r_upper,
            }),
        )?;
    } else {
        writeln!(out, "r_star {}", t.r_star)?;
        writeln!(out, "r_lower {}", t.r_lower)?;
        writeln!(out, "r_upper {}", t.r_upper)?;
    }
    Ok(EXIT_OK)
}

fn gpi(a: GpiArgs, out: &mut dyn Write) -> Outcome {
    let pi: PermTuple = a.pi.parse()?;
    let g = build_collision_graph(&pi)?;
    let weights = weight_report(&pi)?;
    let by = |p: Provenance| g.edges().iter().filter(|e| e.provenance == p).count();
    let (same, coll, both) = (by(Provenance::SameEdge), by(Provenance::PiCollision), by(Provenance::Both));
    if let Some(path) = &a.out {
        std::fs::write(path, g.to_adjacency_list()).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    }
    let mut counts = None;
    if let Some(r) = a.r {
        let guard = if a.override_guards { CountingGuard::overridden() } else { CountingGuard::default() };
        let n_pi = count_proper_colorings_with(&g, r, guard)?;
        let corr = pair_correlation_with(&pi, r, guard)?;
        let closed = (pi.m() == 2).then(|| m2_closed_form_for(&pi, r)).transpose()?;
        let entropy = if 3 * r as usize + 1 > 2 * pi.m() {
            Some(entropy_diagnostic(&pi, r)?)
        } else {
            None
        };
        counts = Some((r, n_pi, corr, closed, entropy));
    }
    if a.json {
        let mut v = json!({
            "n": pi.n(), "m": pi.m(),
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "edges_same_edge": same, "edges_pi_collision": coll, "edges_both": both,
            "components": g.components().len(),
            "weight": weights.total_weight,
            "tree_bound": weights.tree_bound,
        });
        if let Some((r, n_pi, corr, closed, entropy)) = &counts {
            v["r"] = json!(r);
            v["proper_colorings"] = json!(n_pi.to_string());
            v["pair_correlation"] = json!(corr.exact.to_string());
            v["pair_correlation_value"] = json!(corr.value.to_scientific(20));
            v["m2_closed_form"] = json!(closed.as_ref().map(ToString::to_string));
            v["entropy_ratio"] = json!(entropy.as_ref().map(|e| e.ratio));
        }
        print_json(out, &v)?;
    } else {
        writeln!(out, "vertices {}", g.vertex_count())?;
        writeln!(out, "edges {} (same-edge {same}, pi-collision {coll}, both {both})", g.edge_count())?;
        writeln!(out, "components {}", g.components().len())?;
        writeln!(out, "weight {}", weights.total_weight)?;
        writeln!(out, "tree_bound {}", weights.tree_bound)?;
        if let Some((_, n_pi, corr, closed, entropy)) = &counts {
            writeln!(out, "proper_colorings {n_pi}")?;
            writeln!(out, "pair_correlation {} ({})", corr.exact, corr.value)?;
            if let Some(c) = closed {
                writeln!(out, "m2_closed_form {c}")?;
            }
            if let Some(e) = entropy {
                writeln!(out, "entropy_ratio {}", e.ratio)?;
            }
        }
    }
    Ok(EXIT_OK)
}

pub fn sweep_config(a: &SweepArgs) -> Result<ExperimentConfig, String> {
    if a.r_step == 0 {
        return Err("--r-step must be at least 1".into());
    }
    if a.r_min > a.r_max {
        return Err("--r-min exceeds --r-max".into());
    }
    Ok(ExperimentConfig {
        n: a.n,
        m: a.m,
        r_values: (a.r_min..=a.r_max).step_by(a.r_step as usize).collect(),
        trials_per_r: a.trials,
        master_seed: a.seed,
        budget: a.budget.budget(),
        omega: a.omega,
    })
}

fn sweep(a: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let config = sweep_config(&a).map_err(input_error)?;
    let (table, _) = run_sweep_detailed(&config, a.threads)?;
    if let Some(stem) = &a.out {
        for path in emit_outputs(&table, &config, OutputFormat::Both, stem)? {
            writeln!(err, "wrote {}", path.display())?;
        }
    }
    let body = if a.json { to_json(&table, &config) } else { to_csv(&table) };
    out.write_all(body.as_bytes())?;
    Ok(EXIT_OK)
}

fn exact_prob(a: ExactArgs, out: &mut dyn Write) -> Outcome {
    let p = exact_existence_probability_with(a.n, a.m, a.r, a.override_guards)?;
    let value = p.to_f64().unwrap_or(f64::NAN);
    if a.json {
        print_json(out, &json!({"n": a.n, "m": a.m, "r": a.r, "probability": p.to_string(), "value": value}))?;
    } else {
        writeln!(out, "probability {p} ({value})")?;
    }
    Ok(EXIT_OK)
}

fn verify_cayley(a: CayleyArgs, out: &mut dyn Write) -> Outcome {
    let budget = a.budget.budget();
    budget.validate()?;
    let rep = verify_cayley_no_stacking(a.k, budget, a.override_guards)?;
    if a.json {
        let mut v = serde_json::to_value(&rep).expect("report serializes");
        v["message"] = json!(rep.message());
        print_json(out, &v)?;
    } else {
        writeln!(out, "{}", rep.message())?;
        writeln!(out, "k {} n {} nodes {}", rep.k, rep.n, rep.nodes_expanded)?;
        if let Some(c) = rep.relative_perms_checked {
            writeln!(out, "relative permutations checked {c}")?;
        }
        if let Some(w) = &rep.witness {
            writeln!(out, "witness {w}")?;
        }
    }
    Ok(match rep.status {
        VerificationStatus::NoStacking => EXIT_NEGATIVE,
        VerificationStatus::StackingFound => EXIT_OK,
        VerificationStatus::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn verify_odd(a: OddArgs, out: &mut dyn Write) -> Outcome {
    let opts = OddOptions {
        override_guard: a.override_guards,
        threads: a.threads,
        literal_search: a.literal,
        certificate_dir: a.out.clone(),
    };
    let rep = verify_odd_question(a.n, &opts)?;
    if a.json {
        let mut v = serde_json::to_value(&rep).expect("report serializes");
        v["message"] = json!(rep.message());
        print_json(out, &v)?;
    } else {
        writeln!(out, "{}", rep.message())?;
        writeln!(
            out,
            "n {} matching partitions {} classes {} class pairs {}",
            rep.n, rep.matching_partitions, rep.isomorphism_classes, rep.class_pairs
        )?;
        writeln!(out, "identifications {} search nodes {}", rep.identifications, rep.search_nodes)?;
        if a.literal {
            writeln!(out, "explicit instances {}", rep.literal_instances)?;
        }
        if let Some(c) = &rep.counterexample {
            writeln!(out, "transcript sha256 {}", c.transcript_sha256)?;
            if let Some(p) = &c.certificate_path {
                writeln!(out, "certificate {}", p.display())?;
            }
            out.write_all(c.instance.as_bytes())?;
        }
    }
    Ok(match rep.status {
        OddStatus::AllPairsAdmitStackings => EXIT_OK,
        OddStatus::Counterexample => EXIT_NEGATIVE,
    })
}

fn lemma_checks(a: LemmaArgs, out: &mut dyn Write) -> Outcome {
    if a.q.iter().any(|q| !q.is_finite() || *q < 0.0) {
        return Err(input_error("q values must be finite and non-negative"));
    }
    let gamma = gamma_lemma_check(a.k);
    let phis: Vec<_> = a.q.iter().map(|&q| phi_concavity_check(q, a.f_max, a.seed)).collect();
    let passed = gamma.passed && phis.iter().all(|p| p.passed);
    if a.json {
        print_json(out, &json!({"gamma": gamma, "phi": phis, "passed": passed}))?;
    } else {
        writeln!(
            out,
            "gamma K<={}: {} ({} pairs, {} violations, min slack {:e})",
            gamma.k_max,
            if gamma.passed { "pass" } else { "FAIL" },
            gamma.pairs_checked,
            gamma.violations.len(),
            gamma.min_slack
        )?;
        for p in &phis {
            let concavity = match p.first_concavity_violation {
                None => "concave".to_string(),
                Some(f) => format!("not concave from f={f}"),
            };
            writeln!(
                out,
                "phi q={} f<={}: {} ({concavity}, max second difference {:e}, endpoint maxima {})",
                p.q,
                p.f_max,
                if p.passed { "pass" } else { "FAIL" },
                p.max_second_difference,
                if p.endpoint_maximum { "hold" } else { "fail" }
            )?;
        }
    }
    Ok(if passed { EXIT_OK } else { EXIT_NEGATIVE })
}

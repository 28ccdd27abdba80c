use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use stabwit::io::{self, OperatorSpec, StateSpec};
use stabwit::oracle::{self, OracleConfig};
use stabwit::report::{self, SuiteOptions};
use stabwit::witnesses::{self, Certificate, Family, Witness, WitnessParams};
use stabwit::{entropic, nonlinear, stabilizer, states, DensityMatrix, Error, HermitianOperator};

#[derive(Parser)]
#[command(name = "stabwit", version, about = "Stabilizer entanglement witnesses and their numerical checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build, list and evaluate witnesses.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Numerical optimizers and certificates.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Local uncertainty relations.
    #[command(subcommand)]
    Lur(LurCmd),
    /// Entropic uncertainty relations.
    #[command(subcommand)]
    Eur(EurCmd),
    /// Stabilizer generators and setting partitions.
    #[command(subcommand)]
    Stabilizer(StabilizerCmd),
    /// Regenerate every table as CSV.
    Reproduce {
        #[arg(long, default_value = "repro_out")]
        out: PathBuf,
        #[arg(long, default_value_t = oracle::DEFAULT_SEED)]
        seed: u64,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
}

#[derive(Args, Clone, Default)]
struct ParamArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// Graph file (JSON or edge list).
    #[arg(long)]
    graph: Option<PathBuf>,
}

impl ParamArgs {
    fn params(&self) -> stabwit::Result<WitnessParams> {
        let graph = self.graph.as_deref().map(io::load_graph).transpose()?;
        Ok(WitnessParams { n: self.n, m: self.m, k: self.k, l: self.l, graph })
    }
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// List witness ids.
    List,
    /// Print a witness as JSON.
    Build {
        #[arg(long, required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Evaluate a witness on a state.
    Eval {
        #[arg(long)]
        name: String,
        /// State spec, e.g. `ghz:4:p=0.2`.
        #[arg(long)]
        state: StateSpec,
        /// Extra white noise mixed into the state.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Also bisect the empirical threshold on the witness target.
        #[arg(long)]
        empirical: bool,
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Args)]
struct OptArgs {
    /// Operator JSON file or witness id.
    #[arg(long)]
    op: String,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long, default_value_t = oracle::DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    minimize: bool,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Optimize over pure product states.
    MaxProduct(OptArgs),
    /// Optimize over pure biseparable states.
    MaxBisep(OptArgs),
    /// Minimum eigenvalue of W - alpha * reference.
    Dominance {
        #[arg(long)]
        w: String,
        /// Defaults to the witness's own alpha.
        #[arg(long)]
        alpha: Option<f64>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// White-noise threshold of a witness.
    Noise {
        #[arg(long)]
        name: String,
        #[arg(long)]
        empirical: bool,
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Ghz,
    Cluster,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Ghz => Family::Ghz,
            FamilyArg::Cluster => Family::Cluster,
        }
    }
}

#[derive(Subcommand)]
enum LurCmd {
    Eval {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        /// Cut position.
        #[arg(long)]
        k: usize,
        #[arg(long)]
        state: StateSpec,
        /// Three-pair GHZ criterion.
        #[arg(long)]
        three: bool,
    },
}

#[derive(Subcommand)]
enum EurCmd {
    Eval {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        state: StateSpec,
        /// Report entropies in bits; the verdict is unchanged.
        #[arg(long)]
        bits: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Ghz,
    Cluster,
    Graph,
}

#[derive(Subcommand)]
enum StabilizerCmd {
    Show {
        #[arg(long, value_enum)]
        family: GroupArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        graph: Option<PathBuf>,
    },
}

fn print_json<T: Serialize>(v: &T) -> stabwit::Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

/// Fill `n` from the state when the witness needs it and it was not given.
fn witness_for(name: &str, params: &ParamArgs, n_hint: Option<usize>) -> stabwit::Result<Witness> {
    let mut p = params.params()?;
    if p.n.is_none() && witnesses::takes_n(name) {
        p.n = n_hint;
    }
    witnesses::build(name, &p)
}

fn resolve_operator(spec: &str, params: &ParamArgs) -> stabwit::Result<HermitianOperator> {
    if Path::new(spec).is_file() {
        io::load_operator(Path::new(spec))
    } else if witnesses::witness_ids().contains(&spec) {
        Ok(witness_for(spec, params, None)?.operator)
    } else {
        Err(Error::Parse(format!("'{spec}' is neither an operator file nor a witness id")))
    }
}

fn partition_json(op: &HermitianOperator) -> serde_json::Value {
    let part = stabilizer::partition_into_settings(op);
    let settings: Vec<_> = part
        .settings
        .iter()
        .zip(&part.terms)
        .map(|(s, terms)| {
            let terms: BTreeMap<String, f64> = terms.iter().map(|(k, c)| (k.to_string(), *c)).collect();
            json!({ "setting": s.to_string(), "terms": terms })
        })
        .collect();
    json!({ "count": part.count(), "constant": part.constant, "settings": settings })
}

fn witness_json(w: &Witness) -> stabwit::Result<serde_json::Value> {
    let (alpha, reference) = match &w.certificate {
        Certificate::Dominance { alpha, reference } => (Some(*alpha), Some(OperatorSpec::from_operator(reference))),
        _ => (None, None),
    };
    Ok(json!({
        "name": w.name,
        "n": w.n_qubits(),
        "detection_class": w.detection_class,
        "operator": OperatorSpec::from_operator(&w.operator),
        "expectation_on_target": w.expectation_on_target()?,
        "analytic_threshold": w.analytic_noise_threshold,
        "threshold_from_expectations": oracle::noise_threshold_analytic(w).ok(),
        "claimed_settings": w.claimed_settings,
        "settings_partition": partition_json(&w.operator),
        "dominance_alpha": alpha,
        "dominance_reference": reference,
    }))
}

fn load_state(spec: &StateSpec, extra_noise: f64) -> stabwit::Result<DensityMatrix> {
    let rho = spec.load()?;
    if extra_noise > 0.0 {
        states::mix_density_with_white_noise(&rho, extra_noise)
    } else {
        Ok(rho)
    }
}

fn run(cli: Cli) -> stabwit::Result<ExitCode> {
    match cli.cmd {
        Cmd::Witness(WitnessCmd::List) | Cmd::Witness(WitnessCmd::Build { list: true, .. }) => {
            for w in witnesses::CATALOG {
                println!("{:<26} {:<10} {}", w.id, w.params, w.summary);
            }
        }
        Cmd::Witness(WitnessCmd::Build { name, params, .. }) => {
            let w = witness_for(name.as_deref().unwrap_or_default(), &params, None)?;
            print_json(&witness_json(&w)?)?;
        }
        Cmd::Witness(WitnessCmd::Eval { name, state, noise, empirical, params }) => {
            if !(0.0..=1.0).contains(&noise) {
                return Err(Error::OutOfRange(format!("noise {noise} outside [0, 1]")));
            }
            let rho = load_state(&state, noise)?;
            let w = witness_for(&name, &params, Some(rho.n_qubits()))?;
            print_json(&report::witness_report(&w, &rho, empirical, true)?)?;
        }
        Cmd::Oracle(OracleCmd::MaxProduct(a)) => {
            let op = resolve_operator(&a.op, &a.params)?;
            let mut cfg = OracleConfig::product().with_seed(a.seed);
            if let Some(r) = a.restarts {
                cfg = cfg.with_restarts(r);
            }
            let r = if a.minimize {
                oracle::min_over_product_states(&op, &cfg)?
            } else {
                oracle::max_over_product_states(&op, &cfg)?
            };
            print_json(&r)?;
        }
        Cmd::Oracle(OracleCmd::MaxBisep(a)) => {
            let op = resolve_operator(&a.op, &a.params)?;
            let mut cfg = OracleConfig::biseparable().with_seed(a.seed);
            if let Some(r) = a.restarts {
                cfg = cfg.with_restarts(r);
            }
            let r = if a.minimize {
                oracle::min_over_biseparable(&op, &cfg)?
            } else {
                oracle::max_over_biseparable(&op, &cfg)?
            };
            print_json(&r)?;
        }
        Cmd::Oracle(OracleCmd::Dominance { w, alpha, params }) => {
            let w = witness_for(&w, &params, None)?;
            let Certificate::Dominance { alpha: own, reference } = &w.certificate else {
                return Err(Error::Precondition(format!("{} has no dominance reference", w.name)));
            };
            let cert = oracle::check_dominance(&w.operator, reference, alpha.unwrap_or(*own))?;
            print_json(&json!({
                "witness": w.name,
                "alpha": cert.alpha,
                "min_eigenvalue": cert.min_eigenvalue,
                "holds": cert.holds,
            }))?;
            if !cert.holds {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Oracle(OracleCmd::Noise { name, empirical, params }) => {
            let w = witness_for(&name, &params, None)?;
            let emp = if empirical { Some(oracle::witness_threshold_empirical(&w)?) } else { None };
            print_json(&json!({
                "witness": w.name,
                "n": w.n_qubits(),
                "analytic_threshold": w.analytic_noise_threshold,
                "threshold_from_expectations": oracle::noise_threshold_analytic(&w)?,
                "empirical_threshold": emp,
            }))?;
        }
        Cmd::Lur(LurCmd::Eval { family, n, k, state, three }) => {
            let rho = state.load()?;
            let r = match (family, three) {
                (FamilyArg::Ghz, false) => nonlinear::lur_ghz(&rho, n, k)?,
                (FamilyArg::Ghz, true) => nonlinear::lur_ghz_three(&rho, n, k + 1)?,
                (FamilyArg::Cluster, false) => nonlinear::lur_cluster(&rho, n, k)?,
                (FamilyArg::Cluster, true) => {
                    return Err(Error::Precondition("--three is only defined for ghz".into()));
                }
            };
            print_json(&r)?;
        }
        Cmd::Eur(EurCmd::Eval { family, n, state, bits }) => {
            let rho = state.load()?;
            let mut r = entropic::eur_criterion(&rho, family.into(), n)?;
            let unit = if bits {
                let s = std::f64::consts::LN_2;
                r.entropies.iter_mut().for_each(|h| *h /= s);
                r.lhs /= s;
                r.bound /= s;
                "bits"
            } else {
                "nats"
            };
            print_json(&json!({
                "entropies": r.entropies,
                "lhs": r.lhs,
                "bound": r.bound,
                "detected": r.detected,
                "verdict": if r.detected { "genuine_multipartite" } else { "not_detected" },
                "unit": unit,
            }))?;
        }
        Cmd::Stabilizer(StabilizerCmd::Show { family, n, graph }) => {
            let need_n = || n.ok_or_else(|| Error::Parse("--n is required for this family".into()));
            let g = match family {
                GroupArg::Ghz => stabilizer::ghz_generators(need_n()?)?,
                GroupArg::Cluster => stabilizer::cluster_generators(need_n()?)?,
                GroupArg::Graph => {
                    let path = graph.ok_or_else(|| Error::Parse("--graph is required for graph states".into()))?;
                    let g = io::load_graph(&path)?;
                    if let Some(n) = n {
                        if n != g.n_vertices() {
                            return Err(Error::DimensionMismatch { expected: n, found: g.n_vertices() });
                        }
                    }
                    stabilizer::graph_generators(&g)?
                }
            };
            for (i, s) in g.generators().iter().enumerate() {
                println!("S{} = {s}", i + 1);
            }
            let sum = g.generator_operators().into_iter().fold(HermitianOperator::zero(g.n_qubits()), |a, b| a + b);
            let part = stabilizer::partition_into_settings(&sum);
            println!("settings: {}", part.count());
            for (s, terms) in part.settings.iter().zip(&part.terms) {
                let names: Vec<String> = terms.iter().map(|(k, _)| k.to_string()).collect();
                println!("  {s}: {}", names.join(" "));
            }
        }
        Cmd::Reproduce { out, seed, workers, n_max } => {
            let opts = SuiteOptions { seed, workers, n_max, ..SuiteOptions::default() };
            let outcome = report::run_reproduction_suite(&out, &opts)?;
            for f in &outcome.failures {
                eprintln!("FAIL {f}");
            }
            println!("wrote {} tables to {}; {} failing rows", outcome.tables.len(), out.display(), outcome.failures.len());
            if !outcome.passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

//! `sng`: analyze social network games from the command line.
//!
//! Exit codes: 0 success / property holds; 1 property fails or a solver
//! reports non-existence; 2 usage error; 3 validation or parse error;
//! 4 state guard or step budget exceeded.

#![forbid(unsafe_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sng_core::dynamics::{
    self, build_improvement_graph, run_scheduler, SchedulerSpec, TraceOutcome,
};
use sng_core::equilibria::{
    self, classify_ne, construct_ne_dag, decide_ne_cycle, enumerate_ne, is_nash, NEKind, NEReport,
    NashCheck, SolveError, SolveMethod,
};
use sng_core::format;
use sng_core::gadgets::{self, PartitionInstance, RandomClass};
use sng_core::metrics::{self, RatioVerdict};
use sng_core::model::{classify_graph, JointStrategy, SocialNetwork};
use sng_core::rational::Rational;

const EXIT_PROPERTY_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INVALID_INPUT: u8 = 3;
const EXIT_GUARD: u8 = 4;

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

#[derive(Parser)]
#[command(
    name = "sng",
    version,
    about = "Social network games: equilibria, dynamics, and efficiency"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a network file satisfies every model invariant.
    Validate { net: PathBuf },
    /// Report the underlying graph class (DAG / simple cycle / source-free).
    Classify {
        net: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate per-node payoffs and the social welfare of a profile.
    Payoff {
        net: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Nash equilibrium checks, enumeration, and solvers.
    #[command(subcommand)]
    Ne(NeCommand),
    /// Run scheduler-driven improvement dynamics.
    Dynamics {
        net: PathBuf,
        /// Start profile: a file path, `all-null`, or `random:SEED`.
        #[arg(long, default_value = "all-null")]
        start: String,
        /// `smallest-index`, `random:SEED`, or `fixed:id1,id2,...`.
        #[arg(long, default_value = "smallest-index")]
        scheduler: String,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        /// Write the step-per-line trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Build the improvement graph; optionally export DOT or check
    /// properties.
    Igraph {
        net: PathBuf,
        /// Write the graph in DOT format to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Property to verdict on: `fip` or `weak`.
        #[arg(long, value_enum)]
        check: Option<CheckArg>,
        #[arg(long, default_value_t = 50_000)]
        guard: u64,
        #[arg(long)]
        json: bool,
    },
    /// Social optimum, price of anarchy, and price of stability.
    Metrics {
        net: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        guard: u64,
        #[arg(long)]
        json: bool,
    },
    /// Deterministic network generators.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Subcommand)]
enum NeCommand {
    /// Verify whether a profile is a Nash equilibrium.
    Check {
        net: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List every Nash equilibrium (lexicographic order) under the guard.
    Enumerate {
        net: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        guard: u64,
        #[arg(long)]
        json: bool,
    },
    /// Decide existence of an equilibrium of the given kind.
    Solve {
        net: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long, default_value_t = 1_000_000)]
        guard: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// The six-node network with no Nash equilibrium.
    Fig1 {
        #[arg(long, default_value = "1/4")]
        theta: String,
        #[arg(long, default_value = "1/3")]
        w1: String,
        #[arg(long, default_value = "1/2")]
        w2: String,
        #[arg(long, default_value = "1")]
        c0: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The three-cycle with an infinite improvement path.
    Fig3 {
        #[arg(long, default_value = "1/4")]
        theta: String,
        #[arg(long, default_value = "1/2")]
        w: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The PARTITION reduction over the given instance values.
    Partition {
        /// Comma-separated positive rationals, e.g. `--a 1/2,1/4,1/4`.
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<String>,
        /// Rescale the values so they sum to 1 first.
        #[arg(long)]
        normalize: bool,
        #[arg(long, default_value = "1/4")]
        theta: String,
        #[arg(long, default_value = "1/3")]
        w1: String,
        #[arg(long, default_value = "1/2")]
        w2: String,
        #[arg(long, default_value = "1")]
        c0: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The two-cycle whose only equilibrium wastes all welfare.
    PosWitness {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reweight a network so every incoming edge of node i weighs 1/|N(i)|.
    Equitable {
        /// Base network file; its weights are ignored.
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded pseudo-random network of a requested class.
    Random {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 2)]
        products: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1")]
        c0: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Trivial,
    Nontrivial,
    Determined,
}

impl From<KindArg> for NEKind {
    fn from(k: KindArg) -> NEKind {
        match k {
            KindArg::Trivial => NEKind::Trivial,
            KindArg::Nontrivial => NEKind::NonTrivial,
            KindArg::Determined => NEKind::Determined,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Brute,
    Dag,
    Cycle,
    Sourcefree,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Fip,
    Weak,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Dag,
    Cycle,
    Nosource,
    Any,
}

impl From<ClassArg> for RandomClass {
    fn from(c: ClassArg) -> RandomClass {
        match c {
            ClassArg::Dag => RandomClass::Dag,
            ClassArg::Cycle => RandomClass::SimpleCycle,
            ClassArg::Nosource => RandomClass::NoSource,
            ClassArg::Any => RandomClass::Any,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

// ---------------------------------------------------------------------------
// Error mapping
// ---------------------------------------------------------------------------

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| {
        Failure::new(
            EXIT_INVALID_INPUT,
            format!("cannot read {}: {e}", path.display()),
        )
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| {
        Failure::new(
            EXIT_INVALID_INPUT,
            format!("cannot write {}: {e}", path.display()),
        )
    })
}

fn load_network(path: &Path) -> Result<SocialNetwork, Failure> {
    let doc = read_file(path)?;
    format::parse_network(&doc)
        .map_err(|e| Failure::new(EXIT_INVALID_INPUT, format!("{}: {e}", e.code())))
}

fn load_profile(path: &Path, net: &SocialNetwork) -> Result<JointStrategy, Failure> {
    let doc = read_file(path)?;
    format::parse_profile(&doc, net)
        .map_err(|e| Failure::new(EXIT_INVALID_INPUT, format!("{}: {e}", e.code())))
}

fn parse_rational_arg(name: &str, value: &str) -> Result<Rational, Failure> {
    value
        .parse()
        .map_err(|e| Failure::new(EXIT_USAGE, format!("--{name}: {e}")))
}

fn solve_failure(err: SolveError) -> Failure {
    match err {
        SolveError::GuardExceeded { .. } => Failure::new(EXIT_GUARD, err.to_string()),
        SolveError::NotADag | SolveError::NotASimpleCycle | SolveError::HasSourceNodes => {
            Failure::new(EXIT_USAGE, err.to_string())
        }
        other => Failure::new(EXIT_INVALID_INPUT, other.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Command dispatch
// ---------------------------------------------------------------------------

fn run(command: Command) -> CmdResult {
    match command {
        Command::Validate { net } => {
            load_network(&net)?;
            println!("ok");
            Ok(0)
        }
        Command::Classify { net, json } => classify_cmd(&net, json),
        Command::Payoff { net, profile, json } => payoff_cmd(&net, &profile, json),
        Command::Ne(cmd) => ne_cmd(cmd),
        Command::Dynamics {
            net,
            start,
            scheduler,
            max_steps,
            trace,
            json,
        } => dynamics_cmd(&net, &start, &scheduler, max_steps, trace.as_deref(), json),
        Command::Igraph {
            net,
            dot,
            check,
            guard,
            json,
        } => igraph_cmd(&net, dot.as_deref(), check, guard, json),
        Command::Metrics { net, guard, json } => metrics_cmd(&net, guard, json),
        Command::Gen(cmd) => gen_cmd(cmd),
    }
}

fn classify_cmd(path: &Path, json: bool) -> CmdResult {
    let net = load_network(path)?;
    let class = classify_graph(&net);
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&class).expect("class serialization")
        );
    } else {
        println!("is_dag: {}", class.is_dag);
        println!("is_simple_cycle: {}", class.is_simple_cycle);
        println!("has_no_source_nodes: {}", class.has_no_source_nodes);
    }
    Ok(0)
}

fn payoff_cmd(net_path: &Path, profile_path: &Path, json: bool) -> CmdResult {
    let net = load_network(net_path)?;
    let s = load_profile(profile_path, &net)?;
    let mut payoffs: BTreeMap<String, String> = BTreeMap::new();
    for id in net.nodes() {
        let p = net
            .payoff(&s, id)
            .map_err(|e| Failure::new(EXIT_INVALID_INPUT, e.to_string()))?;
        payoffs.insert(id.to_string(), p.to_string());
    }
    let welfare = net
        .social_welfare(&s)
        .map_err(|e| Failure::new(EXIT_INVALID_INPUT, e.to_string()))?;
    if json {
        let doc = serde_json::json!({
            "payoffs": payoffs,
            "social_welfare": welfare.to_string(),
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        for (id, p) in &payoffs {
            println!("payoff {id}: {p}");
        }
        println!("social_welfare: {welfare}");
    }
    Ok(0)
}

fn ne_cmd(cmd: NeCommand) -> CmdResult {
    match cmd {
        NeCommand::Check { net, profile, json } => {
            let net = load_network(&net)?;
            let s = load_profile(&profile, &net)?;
            let verdict = is_nash(&net, &s).map_err(solve_failure)?;
            let class = classify_ne(&s);
            match &verdict {
                NashCheck::Equilibrium => {
                    if json {
                        let doc = serde_json::json!({
                            "nash": true,
                            "classification": class.to_string(),
                        });
                        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    } else {
                        println!("nash: true");
                        println!("classification: {class}");
                    }
                    Ok(0)
                }
                NashCheck::ImprovableBy { node, improvement } => {
                    if json {
                        let doc = serde_json::json!({
                            "nash": false,
                            "classification": class.to_string(),
                            "deviator": node.to_string(),
                            "improvement": improvement.to_string(),
                        });
                        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    } else {
                        println!("nash: false");
                        println!("classification: {class}");
                        println!("deviator: {node}");
                        println!("improvement: {improvement}");
                    }
                    Ok(EXIT_PROPERTY_FAILS)
                }
            }
        }
        NeCommand::Enumerate { net, guard, json } => {
            let net = load_network(&net)?;
            let nes = enumerate_ne(&net, guard).map_err(solve_failure)?;
            if json {
                let list: Vec<serde_json::Value> =
                    nes.iter().map(|s| profile_json(&net, s)).collect();
                let doc = serde_json::json!({ "count": nes.len(), "equilibria": list });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!("count: {}", nes.len());
                for (k, s) in nes.iter().enumerate() {
                    println!("ne {}: {}", k + 1, s.label(&net));
                }
            }
            Ok(if nes.is_empty() {
                EXIT_PROPERTY_FAILS
            } else {
                0
            })
        }
        NeCommand::Solve {
            net,
            kind,
            method,
            guard,
            json,
        } => solve_cmd(&net, kind, method, guard, json),
    }
}

fn solve_cmd(path: &Path, kind: KindArg, method: MethodArg, guard: u64, json: bool) -> CmdResult {
    let net = load_network(path)?;
    let kind: NEKind = kind.into();
    let mut notes: Vec<String> = Vec::new();

    let report: NEReport = match method {
        MethodArg::Auto => {
            if kind == NEKind::Determined && !classify_graph(&net).is_simple_cycle {
                notes.push(
                    "determined-kind decision on this graph class requires exhaustive search"
                        .to_string(),
                );
            }
            equilibria::solve_auto(&net, kind, guard).map_err(solve_failure)?
        }
        MethodArg::Brute => equilibria::solve_brute(&net, kind, guard).map_err(solve_failure)?,
        MethodArg::Dag => {
            if kind != NEKind::NonTrivial {
                return Err(Failure::new(
                    EXIT_USAGE,
                    "--method dag only serves --kind nontrivial",
                ));
            }
            let witness = construct_ne_dag(&net).map_err(solve_failure)?;
            NEReport {
                exists: true,
                classification: Some(classify_ne(&witness)),
                witness: Some(witness),
                method: SolveMethod::DagConstruction,
                non_best_response_witness: None,
            }
        }
        MethodArg::Cycle => {
            if kind == NEKind::Trivial {
                return Err(Failure::new(
                    EXIT_USAGE,
                    "--method cycle serves --kind nontrivial or determined",
                ));
            }
            decide_ne_cycle(&net, kind).map_err(solve_failure)?
        }
        MethodArg::Sourcefree => {
            if kind != NEKind::NonTrivial {
                return Err(Failure::new(
                    EXIT_USAGE,
                    "--method sourcefree only serves --kind nontrivial",
                ));
            }
            equilibria::find_nontrivial_ne_sourcefree(&net).map_err(solve_failure)?
        }
    };

    if json {
        let mut doc = serde_json::json!({
            "kind": kind_name(kind),
            "exists": report.exists,
            "method": report.method.to_string(),
        });
        let obj = doc.as_object_mut().unwrap();
        if let Some(class) = report.classification {
            obj.insert("classification".into(), class.to_string().into());
        }
        if let Some(witness) = &report.witness {
            obj.insert("witness".into(), profile_json(&net, witness));
        }
        if let Some((node, improvement)) = &report.non_best_response_witness {
            obj.insert("deviator".into(), node.to_string().into());
            obj.insert("improvement".into(), improvement.to_string().into());
        }
        if !notes.is_empty() {
            obj.insert("notes".into(), serde_json::json!(notes));
        }
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        println!("kind: {}", kind_name(kind));
        println!("exists: {}", report.exists);
        println!("method: {}", report.method);
        if let Some(class) = report.classification {
            println!("classification: {class}");
        }
        if let Some(witness) = &report.witness {
            println!("witness: {}", witness.label(&net));
        }
        if let Some((node, improvement)) = &report.non_best_response_witness {
            println!("deviator: {node}");
            println!("improvement: {improvement}");
        }
        for note in &notes {
            println!("note: {note}");
        }
    }
    Ok(if report.exists {
        0
    } else {
        EXIT_PROPERTY_FAILS
    })
}

fn kind_name(kind: NEKind) -> &'static str {
    match kind {
        NEKind::Trivial => "trivial",
        NEKind::NonTrivial => "nontrivial",
        NEKind::Determined => "determined",
    }
}

fn profile_json(net: &SocialNetwork, s: &JointStrategy) -> serde_json::Value {
    let map: BTreeMap<String, Option<String>> = s
        .entries(net)
        .map(|(id, choice)| (id.to_string(), choice.product().map(|p| p.to_string())))
        .collect();
    serde_json::json!(map)
}

fn dynamics_cmd(
    net_path: &Path,
    start: &str,
    scheduler: &str,
    max_steps: usize,
    trace_out: Option<&Path>,
    json: bool,
) -> CmdResult {
    let net = load_network(net_path)?;

    let start_profile = match start {
        "all-null" => JointStrategy::all_null(&net),
        other => {
            if let Some(seed) = other.strip_prefix("random:") {
                let seed: u64 = seed.parse().map_err(|_| {
                    Failure::new(EXIT_USAGE, format!("invalid start seed {seed:?}"))
                })?;
                dynamics::random_profile(&net, seed)
            } else {
                load_profile(Path::new(other), &net)?
            }
        }
    };

    let spec = match scheduler {
        "smallest-index" => SchedulerSpec::SmallestIndexBestResponse,
        other => {
            if let Some(seed) = other.strip_prefix("random:") {
                let seed: u64 = seed.parse().map_err(|_| {
                    Failure::new(EXIT_USAGE, format!("invalid scheduler seed {seed:?}"))
                })?;
                SchedulerSpec::RandomBetterResponse { seed }
            } else if let Some(order) = other.strip_prefix("fixed:") {
                SchedulerSpec::FixedOrderBestResponse {
                    order: order.split(',').map(|id| id.into()).collect(),
                }
            } else {
                return Err(Failure::new(
                    EXIT_USAGE,
                    format!("unknown scheduler {other:?}"),
                ));
            }
        }
    };

    if max_steps == 0 {
        return Err(Failure::new(EXIT_USAGE, "--max-steps must be at least 1"));
    }

    let trace = run_scheduler(&net, &start_profile, &spec, max_steps).map_err(|e| match e {
        dynamics::DynamicsError::InvalidScheduler(_) => Failure::new(EXIT_USAGE, e.to_string()),
        dynamics::DynamicsError::Model(_) => Failure::new(EXIT_INVALID_INPUT, e.to_string()),
        other => Failure::new(EXIT_INVALID_INPUT, other.to_string()),
    })?;

    if let Some(path) = trace_out {
        write_file(path, &trace.render())?;
    }

    let final_state = trace.final_state(&net).unwrap_or(start_profile);
    let (outcome_name, code) = match trace.outcome {
        TraceOutcome::ReachedNE(_) => ("reached-ne", 0),
        TraceOutcome::StepBudgetExhausted => ("step-budget-exhausted", EXIT_GUARD),
    };
    if json {
        let steps: Vec<serde_json::Value> = trace
            .steps
            .iter()
            .map(|step| {
                serde_json::json!({
                    "mover": step.mover.to_string(),
                    "old": step.old.to_string(),
                    "new": step.new.to_string(),
                    "delta": step.payoff_delta.to_string(),
                })
            })
            .collect();
        let doc = serde_json::json!({
            "steps": steps,
            "outcome": outcome_name,
            "final": profile_json(&net, &final_state),
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        println!("steps: {}", trace.steps.len());
        println!("outcome: {outcome_name}");
        println!("final: {}", final_state.label(&net));
    }
    Ok(code)
}

fn igraph_cmd(
    net_path: &Path,
    dot_out: Option<&Path>,
    check: Option<CheckArg>,
    guard: u64,
    json: bool,
) -> CmdResult {
    let net = load_network(net_path)?;
    let ig = build_improvement_graph(&net, guard).map_err(|e| match e {
        dynamics::DynamicsError::GuardExceeded { .. } => Failure::new(EXIT_GUARD, e.to_string()),
        other => Failure::new(EXIT_INVALID_INPUT, other.to_string()),
    })?;

    if let Some(path) = dot_out {
        write_file(path, &ig.to_dot())?;
    }

    let mut lines: Vec<(String, String)> = vec![
        ("states".into(), ig.num_states().to_string()),
        ("transitions".into(), ig.num_transitions().to_string()),
        ("sinks".into(), ig.sinks().len().to_string()),
    ];
    let mut code = 0u8;
    match check {
        Some(CheckArg::Fip) => {
            let fip = ig.is_acyclic();
            lines.push(("fip".into(), fip.to_string()));
            if !fip {
                code = EXIT_PROPERTY_FAILS;
            }
        }
        Some(CheckArg::Weak) => {
            let weak = ig.is_weakly_acyclic();
            lines.push(("weakly_acyclic".into(), weak.to_string()));
            if !weak {
                code = EXIT_PROPERTY_FAILS;
            }
        }
        None => {}
    }

    if json {
        let map: BTreeMap<_, _> = lines.into_iter().collect();
        println!("{}", serde_json::to_string_pretty(&map).unwrap());
    } else {
        for (key, value) in lines {
            println!("{key}: {value}");
        }
    }
    Ok(code)
}

fn metrics_cmd(net_path: &Path, guard: u64, json: bool) -> CmdResult {
    let net = load_network(net_path)?;
    let report =
        metrics::efficiency(&net, guard).map_err(|e| Failure::new(EXIT_GUARD, e.to_string()))?;

    let ratio_text = |r: &Option<RatioVerdict>| match r {
        None => "undefined".to_string(),
        Some(v) => v.to_string(),
    };
    if json {
        let mut doc = serde_json::json!({
            "optimum": report.optimum.to_string(),
            "optimum_profile": profile_json(&net, &report.optimum_profile),
            "ne_count": report.ne_count,
            "poa": ratio_text(&report.poa),
            "pos": ratio_text(&report.pos),
        });
        let obj = doc.as_object_mut().unwrap();
        if let Some((s, sw)) = &report.best_ne {
            obj.insert("best_ne".into(), profile_json(&net, s));
            obj.insert("best_ne_welfare".into(), sw.to_string().into());
        }
        if let Some((s, sw)) = &report.worst_ne {
            obj.insert("worst_ne".into(), profile_json(&net, s));
            obj.insert("worst_ne_welfare".into(), sw.to_string().into());
        }
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        println!("optimum: {}", report.optimum);
        println!("optimum_profile: {}", report.optimum_profile.label(&net));
        println!("ne_count: {}", report.ne_count);
        if let Some((s, sw)) = &report.best_ne {
            println!("best_ne: {}", s.label(&net));
            println!("best_ne_welfare: {sw}");
        }
        if let Some((s, sw)) = &report.worst_ne {
            println!("worst_ne: {}", s.label(&net));
            println!("worst_ne_welfare: {sw}");
        }
        println!("poa: {}", ratio_text(&report.poa));
        println!("pos: {}", ratio_text(&report.pos));
    }
    Ok(if report.ne_count == 0 {
        EXIT_PROPERTY_FAILS
    } else {
        0
    })
}

fn gen_cmd(cmd: GenCommand) -> CmdResult {
    let (net, out, note) = match cmd {
        GenCommand::Fig1 {
            theta,
            w1,
            w2,
            c0,
            out,
        } => {
            let net = gadgets::gen_fig1(
                parse_rational_arg("theta", &theta)?,
                parse_rational_arg("w1", &w1)?,
                parse_rational_arg("w2", &w2)?,
                parse_rational_arg("c0", &c0)?,
            )
            .map_err(gadget_failure)?;
            (net, out, None)
        }
        GenCommand::Fig3 { theta, w, out } => {
            let net = gadgets::gen_fig3(
                parse_rational_arg("theta", &theta)?,
                parse_rational_arg("w", &w)?,
            )
            .map_err(gadget_failure)?;
            (net, out, None)
        }
        GenCommand::Partition {
            a,
            normalize,
            theta,
            w1,
            w2,
            c0,
            out,
        } => {
            let mut values = Vec::with_capacity(a.len());
            for (k, v) in a.iter().enumerate() {
                values.push(parse_rational_arg(&format!("a[{k}]"), v)?);
            }
            let inst = if normalize {
                PartitionInstance::normalized(values)
            } else {
                PartitionInstance::new(values)
            }
            .map_err(gadget_failure)?;
            let net = gadgets::gen_partition_reduction(
                &inst,
                parse_rational_arg("theta", &theta)?,
                parse_rational_arg("w1", &w1)?,
                parse_rational_arg("w2", &w2)?,
                parse_rational_arg("c0", &c0)?,
            )
            .map_err(gadget_failure)?;
            (net, out, None)
        }
        GenCommand::PosWitness { out } => (gadgets::gen_pos_witness(), out, None),
        GenCommand::Equitable { from, out } => {
            let doc = read_file(&from)?;
            let shape = format::parse_equitable_shape(&doc)
                .map_err(|e| Failure::new(EXIT_INVALID_INPUT, format!("{}: {e}", e.code())))?;
            let net = gadgets::gen_equitable(&shape).map_err(gadget_failure)?;
            (net, out, None)
        }
        GenCommand::Random {
            class,
            nodes,
            products,
            seed,
            c0,
            out,
        } => {
            let net = gadgets::gen_random(
                class.into(),
                nodes,
                products,
                seed,
                parse_rational_arg("c0", &c0)?,
            )
            .map_err(gadget_failure)?;
            let note = format!("# seed={seed} nodes={nodes} products={products}");
            (net, out, Some(note))
        }
    };
    let doc = format::serialize_network(&net);
    match out {
        Some(path) => write_file(&path, &doc)?,
        None => print!("{doc}"),
    }
    if let Some(note) = note {
        eprintln!("{note}");
    }
    Ok(0)
}

fn gadget_failure(err: gadgets::GadgetError) -> Failure {
    match err {
        gadgets::GadgetError::InvalidShape(inner) => {
            Failure::new(EXIT_INVALID_INPUT, format!("{}: {inner}", inner.code()))
        }
        other => Failure::new(EXIT_USAGE, other.to_string()),
    }
}

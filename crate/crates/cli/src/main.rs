//! `mechsynth`: synthesize, check and reduce mechanism-design instances.
//!
//! Exit codes: 0 success or "yes", 1 "no" or a failed check, 2 bad input,
//! 3 branch-and-bound node budget exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use mechsynth::document::{
    AnyMechanism, DocumentError, MechanismFile, Problem, Provenance, describe_mechanism, parse_mechanism,
    parse_meta, parse_setting, write_mechanism, write_meta, write_setting,
};
use mechsynth::incentives::{Verdict, check, check_ds_rand};
use mechsynth::model::{Objective, expected_objective_rand};
use mechsynth::reductions::{
    GraphInstance, KnapsackInstance, ReductionError, ReductionKind, extract_is, extract_knapsack, reduce_is,
    reduce_knapsack,
};
use mechsynth::solver_det::{Decision, DetSolveError, DetSolveOptions, DetStatus, decide_det_with, solve_det_with};
use mechsynth::solver_rand::{RandSolveError, build_lp, decide_rand, solve_rand};
use mechsynth::{Concept, demo};

#[derive(Parser)]
#[command(name = "mechsynth", version, about = "Automated mechanism design over finite settings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConceptArg {
    Ds,
    Bn,
}

impl From<ConceptArg> for Concept {
    fn from(arg: ConceptArg) -> Self {
        match arg {
            ConceptArg::Ds => Concept::DominantStrategy,
            ConceptArg::Bn => Concept::BayesNash,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Det,
    Rand,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReductionArg {
    Is,
    Knapsack,
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Setting document (JSON)
    setting: PathBuf,
    #[arg(long, value_enum)]
    concept: ConceptArg,
    #[arg(long, value_enum, default_value = "det")]
    kind: KindArg,
    /// Node budget for the deterministic search
    #[arg(long)]
    budget: Option<u64>,
    /// Where to write the resulting mechanism document
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Find an optimal incentive-compatible mechanism and print its value
    Solve(SolveArgs),
    /// Decide whether the setting's goal is attainable; prints yes or no
    Decide(SolveArgs),
    /// Check a mechanism for incentive compatibility; prints PASS or FAIL
    Check {
        setting: PathBuf,
        mechanism: PathBuf,
        #[arg(long, value_enum)]
        concept: ConceptArg,
        /// Check a deterministic mechanism through its randomized lift
        #[arg(long)]
        as_randomized: bool,
    },
    /// Generate a mechanism-design instance from a source problem
    Reduce {
        #[arg(value_enum)]
        problem: ReductionArg,
        /// Instance text: "n K" then "u v" edges, or "C D" then "w v" items
        instance: PathBuf,
        #[arg(long)]
        setting_out: PathBuf,
        #[arg(long)]
        meta_out: PathBuf,
    },
    /// Read a source-problem solution off a mechanism for a generated instance
    Extract { meta: PathBuf, mechanism: PathBuf },
    /// Print the LP whose optimum is the best randomized mechanism
    ExportLp {
        setting: PathBuf,
        #[arg(long, value_enum)]
        concept: ConceptArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare deterministic and randomized optima on the built-in example
    Demo,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Document { path: PathBuf, source: DocumentError },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("{0}")]
    Det(DetSolveError),
    #[error("{0}")]
    Rand(#[from] RandSolveError),
    #[error("setting document has no goal")]
    MissingGoal,
    #[error("--budget only applies to --kind det")]
    BudgetWithRand,
}

impl From<DetSolveError> for CliError {
    fn from(err: DetSolveError) -> Self {
        match err {
            DetSolveError::MissingGoal => CliError::MissingGoal,
            other => CliError::Det(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Det(DetSolveError::BudgetExhausted { .. }) => 3,
            _ => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn document<T>(path: &Path, result: Result<T, DocumentError>) -> Result<T, CliError> {
    result.map_err(|source| CliError::Document {
        path: path.to_path_buf(),
        source,
    })
}

fn load_problem(path: &Path) -> Result<Problem, CliError> {
    let text = read(path)?;
    document(path, parse_setting(&text))
}

fn save_mechanism(path: &Path, problem: &Problem, file: &MechanismFile) -> Result<(), CliError> {
    let text = document(path, write_mechanism(&problem.setting, file))?;
    write(path, &text)
}

fn solver_name(kind: KindArg) -> &'static str {
    match kind {
        KindArg::Det => "branch-and-bound",
        KindArg::Rand => "simplex",
    }
}

fn options(args: &SolveArgs) -> Result<DetSolveOptions, CliError> {
    if args.budget.is_some() && args.kind == KindArg::Rand {
        return Err(CliError::BudgetWithRand);
    }
    Ok(DetSolveOptions {
        node_budget: args.budget,
    })
}

fn solve(args: &SolveArgs) -> Result<u8, CliError> {
    let problem = load_problem(&args.setting)?;
    let concept = args.concept.into();
    let options = options(args)?;
    let (mechanism, value) = match args.kind {
        KindArg::Det => {
            let result = solve_det_with(&problem.setting, &problem.objective, concept, &options)?;
            match result.status {
                DetStatus::Optimal { mechanism, value } => (AnyMechanism::Deterministic(mechanism), value),
                DetStatus::InfeasibleForGoal => unreachable!("no goal is passed when optimizing"),
            }
        }
        KindArg::Rand => {
            let (mechanism, value) = solve_rand(&problem.setting, &problem.objective, concept)?;
            (AnyMechanism::Randomized(mechanism), value)
        }
    };
    println!("{value}");
    if let Some(path) = &args.output {
        let file = MechanismFile {
            mechanism,
            provenance: Some(Provenance {
                solver: solver_name(args.kind).into(),
                concept,
                value,
            }),
        };
        save_mechanism(path, &problem, &file)?;
    }
    Ok(0)
}

fn decide(args: &SolveArgs) -> Result<u8, CliError> {
    let problem = load_problem(&args.setting)?;
    if problem.objective.goal.is_none() {
        return Err(CliError::MissingGoal);
    }
    let concept = args.concept.into();
    let options = options(args)?;
    let witness = match args.kind {
        KindArg::Det => match decide_det_with(&problem.setting, &problem.objective, concept, &options)?.0 {
            Decision::Yes { mechanism, value } => Some((AnyMechanism::Deterministic(mechanism), value)),
            Decision::No => None,
        },
        KindArg::Rand => match decide_rand(&problem.setting, &problem.objective, concept)? {
            Decision::Yes { mechanism, value } => Some((AnyMechanism::Randomized(mechanism), value)),
            Decision::No => None,
        },
    };
    let Some((mechanism, value)) = witness else {
        println!("no");
        return Ok(1);
    };
    println!("yes");
    if let Some(path) = &args.output {
        let file = MechanismFile {
            mechanism,
            provenance: Some(Provenance {
                solver: solver_name(args.kind).into(),
                concept,
                value,
            }),
        };
        save_mechanism(path, &problem, &file)?;
    }
    Ok(0)
}

fn check_command(setting: &Path, mechanism: &Path, concept: Concept, as_randomized: bool) -> Result<u8, CliError> {
    let problem = load_problem(setting)?;
    let text = read(mechanism)?;
    let file = document(mechanism, parse_mechanism(&text, &problem.setting))?;
    let s = &problem.setting;
    let verdict = match (&file.mechanism, as_randomized) {
        (AnyMechanism::Deterministic(m), false) => check(s, m, concept),
        (m, _) => check(s, &m.to_randomized(), concept),
    };
    match verdict {
        Verdict::Pass => {
            println!("PASS");
            Ok(0)
        }
        Verdict::Manipulable(witness) => {
            println!("FAIL");
            println!("{}", witness.describe(s));
            let agent = &s.agents()[witness.agent];
            println!("agent: {}", agent.name);
            println!("true type: {}", agent.types[witness.true_type]);
            println!("misreport: {}", agent.types[witness.misreport]);
            if let Some(context) = &witness.context {
                let others: Vec<&str> = s
                    .agents()
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != witness.agent)
                    .zip(context)
                    .map(|((_, other), &t)| other.types[t].as_str())
                    .collect();
                println!("context: {}", others.join(","));
            }
            println!("gain: {}", witness.gain);
            Ok(1)
        }
    }
}

fn reduce(problem: ReductionArg, instance: &Path, setting_out: &Path, meta_out: &Path) -> Result<u8, CliError> {
    let text = read(instance)?;
    let (setting, meta) = match problem {
        ReductionArg::Is => reduce_is(&GraphInstance::parse(&text)?),
        ReductionArg::Knapsack => reduce_knapsack(&KnapsackInstance::parse(&text)?)?,
    };
    let setting_text = document(setting_out, write_setting(&setting, &meta.objective()))?;
    write(setting_out, &setting_text)?;
    write(meta_out, &write_meta(&meta))?;
    println!("outcomes: {}", setting.num_outcomes());
    println!("goal: {}", meta.goal);
    Ok(0)
}

fn extract(meta_path: &Path, mechanism_path: &Path) -> Result<u8, CliError> {
    let meta = document(meta_path, parse_meta(&read(meta_path)?))?;
    let skeleton = meta.skeleton()?;
    let text = read(mechanism_path)?;
    let file = document(mechanism_path, parse_mechanism(&text, &skeleton))?;
    let AnyMechanism::Deterministic(mechanism) = file.mechanism else {
        return Err(CliError::Document {
            path: mechanism_path.to_path_buf(),
            source: DocumentError::Syntax("extraction needs a deterministic mechanism".into()),
        });
    };
    let (label, solution) = match meta.kind {
        ReductionKind::IndependentSet => ("vertices", extract_is(&meta, &mechanism)?),
        ReductionKind::Knapsack => ("items", extract_knapsack(&meta, &mechanism)?),
    };
    let list: Vec<String> = solution.iter().map(usize::to_string).collect();
    println!("{label}: {}", list.join(" "));
    Ok(0)
}

fn export_lp(setting: &Path, concept: Concept, output: Option<&Path>) -> Result<u8, CliError> {
    let problem = load_problem(setting)?;
    let lp = build_lp(&problem.setting, &problem.objective, concept).map_err(RandSolveError::from)?;
    let text = lp.to_lp_format(&problem.setting);
    match output {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn print_mechanism(problem: &Problem, mechanism: &AnyMechanism) {
    for (types, outcome) in describe_mechanism(&problem.setting, mechanism) {
        println!("  ({types}) -> {outcome}");
    }
}

fn run_demo() -> Result<u8, CliError> {
    let setting = demo::randomization_gap();
    let problem = Problem {
        setting,
        objective: Objective::social_welfare(),
    };
    let s = &problem.setting;
    let det = solve_det_with(s, &problem.objective, Concept::DominantStrategy, &DetSolveOptions::default())?;
    let DetStatus::Optimal { mechanism, value } = det.status else {
        unreachable!("optimization without a goal always has an optimum")
    };
    println!("deterministic optimum (dominant strategies): {value}");
    print_mechanism(&problem, &AnyMechanism::Deterministic(mechanism));

    let (mechanism, value) = solve_rand(s, &problem.objective, Concept::DominantStrategy)?;
    println!("randomized optimum (dominant strategies): {value}");
    print_mechanism(&problem, &AnyMechanism::Randomized(mechanism));

    let mixed = demo::randomization_gap_mixed(s);
    let verdict = if check_ds_rand(s, &mixed).is_pass() { "PASS" } else { "FAIL" };
    println!(
        "reference mixed mechanism: value {}, dominant-strategy check {verdict}",
        expected_objective_rand(s, &mixed, &problem.objective)
    );
    print_mechanism(&problem, &AnyMechanism::Randomized(mixed));
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Solve(args) => solve(&args),
        Command::Decide(args) => decide(&args),
        Command::Check {
            setting,
            mechanism,
            concept,
            as_randomized,
        } => check_command(&setting, &mechanism, concept.into(), as_randomized),
        Command::Reduce {
            problem,
            instance,
            setting_out,
            meta_out,
        } => reduce(problem, &instance, &setting_out, &meta_out),
        Command::Extract { meta, mechanism } => extract(&meta, &mechanism),
        Command::ExportLp {
            setting,
            concept,
            output,
        } => export_lp(&setting, concept.into(), output.as_deref()),
        Command::Demo => run_demo(),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hedonic::existence::{
    decide_nash_fe_f2, scc_partition, solve_individ_dag, solve_nash_dag, solve_nash_symmetric,
};
use hedonic::fpt::{
    verify_core_fpt_kd, verify_core_fpt_kf_with, ColorCodingConfig, SeparationConfig,
    DEFAULT_FAILURE_PROB,
};
use hedonic::io::{
    parse_clique, parse_instance, parse_partition, parse_x3c, serialize_instance,
    serialize_partition,
};
use hedonic::oracle::{exists_stable_partition, find_blocking_bruteforce};
use hedonic::reductions::{self, CaseKind, GeneratedCase, Witness};
use hedonic::report::Report;
use hedonic::verification::{
    verify_core_bruteforce, verify_core_dag_shortcut, verify_core_xp, verify_individual,
    verify_nash,
};
use hedonic::{compute_params, Error, Instance, Mode, Model, Notion, Outcome, Partition, Verdict};

#[derive(Parser)]
#[command(
    name = "hedonic",
    version,
    about = "Stability checks for friend-oriented hedonic games"
)]
struct Cli {
    /// Print the structured key/value report instead of a one-line summary.
    #[arg(long)]
    report: bool,
    /// Seed for the randomized verifiers.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a partition against a stability notion.
    Verify(VerifyArgs),
    /// Construct a stable partition or decide that none exists.
    Solve(SolveArgs),
    /// Compile an exact-cover or clique seed into a hard instance.
    Generate(GenerateArgs),
    /// Report Δ, κ and the feedback arc set number.
    Params(ParamsArgs),
    /// Exhaustive search, for small instances only.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Stability {
    Core,
    StrictCore,
    Nash,
    Individual,
}

impl Stability {
    fn notion(self) -> Notion {
        match self {
            Stability::Core => Notion::Core,
            Stability::StrictCore => Notion::StrictCore,
            Stability::Nash => Notion::Nash,
            Stability::Individual => Notion::Individual,
        }
    }

    fn mode(self) -> Option<Mode> {
        match self {
            Stability::Core => Some(Mode::Core),
            Stability::StrictCore => Some(Mode::StrictCore),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyAlgo {
    Brute,
    Xp,
    FptKd,
    FptKf,
    Dag,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    stability: Stability,
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    partition: PathBuf,
    /// Core verifier; ignored for nash and individual.
    #[arg(long, value_enum, default_value = "xp")]
    algo: VerifyAlgo,
    /// Failure probability of the randomized verifiers.
    #[arg(long, default_value_t = DEFAULT_FAILURE_PROB)]
    fail_prob: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveAlgo {
    Scc,
    DagIndivid,
    DagNash,
    Symmetric,
    F2,
    Brute,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    algo: SolveAlgo,
    /// Required by `brute`; checked against the algorithm's guarantee otherwise.
    #[arg(long, value_enum)]
    stability: Option<Stability>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Reduction {
    FeCoreF1,
    FeCorePlanar4,
    FeCoreClique,
    FenCoreF1,
    FenStrictcoreDag,
    FeNashex,
    FenIndividex,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoreMode {
    Core,
    StrictCore,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    reduction: Reduction,
    /// Seed file: exact-cover seed, or clique seed for fe-core-clique.
    #[arg(long = "seed")]
    seed_file: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Verification mode for the FE core reductions.
    #[arg(long, value_enum, default_value = "core")]
    mode: CoreMode,
}

#[derive(Args)]
struct ParamsArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Compute the feedback arc set number exactly instead of bounding it.
    #[arg(long)]
    exact_fas: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_enum)]
    notion: Stability,
    #[arg(long)]
    instance: PathBuf,
    /// With core or strict-core: search this partition for a blocking coalition.
    #[arg(long)]
    partition: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Run<Instance> {
    parse_instance(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_partition(path: &Path, inst: &Instance) -> Run<Partition> {
    parse_partition(&read(path)?, inst.n())
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Run<()> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn verify(args: &VerifyArgs, seed: u64, report: &mut Report) -> Run<Verdict> {
    let inst = load_instance(&args.instance)?;
    let pi = load_partition(&args.partition, &inst)?;
    report.push("stability", args.stability.notion());
    report.add_params(&compute_params(&inst, Some(&pi), false)?);
    let verdict = match args.stability.mode() {
        None if matches!(args.stability, Stability::Nash) => verify_nash(&inst, &pi)?,
        None => verify_individual(&inst, &pi)?,
        Some(mode) => match args.algo {
            VerifyAlgo::Brute => verify_core_bruteforce(&inst, &pi, mode)?,
            VerifyAlgo::Xp => verify_core_xp(&inst, &pi, mode)?,
            VerifyAlgo::Dag => verify_core_dag_shortcut(&inst, &pi, mode)?,
            VerifyAlgo::FptKd => {
                let cfg = SeparationConfig {
                    failure_prob: args.fail_prob,
                    seed,
                    ..SeparationConfig::default()
                };
                verify_core_fpt_kd(&inst, &pi, mode, &cfg)?
            }
            VerifyAlgo::FptKf => {
                let cfg = ColorCodingConfig {
                    failure_prob: args.fail_prob,
                    seed,
                    ..ColorCodingConfig::default()
                };
                verify_core_fpt_kf_with(&inst, &pi, mode, &cfg)?
            }
        },
    };
    Ok(verdict)
}

fn solve(args: &SolveArgs, report: &mut Report) -> Run<Verdict> {
    let inst = load_instance(&args.instance)?;
    let wanted = args.stability.map(Stability::notion);
    let guarantee = match args.algo {
        SolveAlgo::Scc => Some(if inst.model() == Model::Fe {
            Notion::StrictCore
        } else {
            Notion::Core
        }),
        SolveAlgo::DagIndivid => Some(Notion::Individual),
        SolveAlgo::DagNash | SolveAlgo::Symmetric | SolveAlgo::F2 => Some(Notion::Nash),
        SolveAlgo::Brute => None,
    };
    let notion = match (guarantee, wanted) {
        (None, None) => return Err(Failure::Usage("--algo brute needs --stability".into())),
        (None, Some(w)) => w,
        (Some(g), None) => g,
        (Some(g), Some(w)) if g == w || (g == Notion::StrictCore && w == Notion::Core) => w,
        (Some(g), Some(w)) => {
            return Err(Failure::Usage(format!(
                "this algorithm guarantees {g}, not {w}"
            )))
        }
    };
    report.push("stability", notion);
    let exists = |algo: &str, pi: Partition| Verdict::new(algo, Outcome::Exists(pi));
    Ok(match args.algo {
        SolveAlgo::Scc => scc_partition(&inst).1,
        SolveAlgo::DagIndivid => exists("dag-individ", solve_individ_dag(&inst)?),
        SolveAlgo::DagNash => exists("dag-nash", solve_nash_dag(&inst)?),
        SolveAlgo::Symmetric => exists("symmetric", solve_nash_symmetric(&inst)?),
        SolveAlgo::F2 => decide_nash_fe_f2(&inst)?,
        SolveAlgo::Brute => exists_stable_partition(&inst, notion)?,
    })
}

fn generate(args: &GenerateArgs, report: &mut Report) -> Run<()> {
    let text = read(&args.seed_file)?;
    let bad_seed = |e: Error| Failure::Usage(format!("{}: {e}", args.seed_file.display()));
    let mode = match args.mode {
        CoreMode::Core => Mode::Core,
        CoreMode::StrictCore => Mode::StrictCore,
    };
    let case: GeneratedCase = if args.reduction == Reduction::FeCoreClique {
        reductions::gen_fe_core_clique(&parse_clique(&text).map_err(bad_seed)?, mode)?
    } else {
        let x = parse_x3c(&text).map_err(bad_seed)?;
        match args.reduction {
            Reduction::FeCoreF1 => reductions::gen_fe_core_f1(&x, mode)?,
            Reduction::FeCorePlanar4 => reductions::gen_fe_core_planar4(&x, mode)?,
            Reduction::FenCoreF1 => reductions::gen_fen_core_f1(&x)?,
            Reduction::FenStrictcoreDag => reductions::gen_fen_strictcore_dag(&x)?,
            Reduction::FeNashex => reductions::gen_fe_nashex(&x)?,
            Reduction::FenIndividex => reductions::gen_fen_individex(&x)?,
            Reduction::FeCoreClique => unreachable!("handled above"),
        }
    };
    case.check_bounds()?;
    fs::create_dir_all(&args.out)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.out.display())))?;
    let mut files = vec!["instance.txt"];
    write(
        &args.out.join("instance.txt"),
        &serialize_instance(&case.instance, Some(&case.labels)),
    )?;
    if let Some(pi) = &case.pi {
        write(&args.out.join("partition.txt"), &serialize_partition(pi))?;
        files.push("partition.txt");
    }
    match &case.witness {
        Some(Witness::Coalition(c)) => {
            let ids: Vec<String> = c.iter().map(|a| a.to_string()).collect();
            write(
                &args.out.join("witness.txt"),
                &format!("coalition {}\n", ids.join(" ")),
            )?;
            files.push("witness.txt");
        }
        Some(Witness::Partition(p)) => {
            write(&args.out.join("witness.txt"), &serialize_partition(p))?;
            files.push("witness.txt");
        }
        None => {}
    }
    report.push("reduction", case.reduction);
    report.push(
        "question",
        match case.kind {
            CaseKind::Verification(m) => format!("verify {m}"),
            CaseKind::Existence(n) => format!("exists {n}"),
        },
    );
    report.push("agents", case.instance.n());
    report.push(
        "ground_truth",
        case.ground_truth
            .map_or("unknown".to_string(), |b| b.to_string()),
    );
    report.add_params(&compute_params(&case.instance, case.pi.as_ref(), false)?);
    report.push("files", files.join(" "));
    Ok(())
}

fn params(args: &ParamsArgs, report: &mut Report) -> Run<()> {
    let inst = load_instance(&args.instance)?;
    let pi = match &args.partition {
        Some(p) => Some(load_partition(p, &inst)?),
        None => None,
    };
    report.push("agents", inst.n());
    report.push("model", inst.model());
    report.add_params(&compute_params(&inst, pi.as_ref(), args.exact_fas)?);
    Ok(())
}

fn oracle(args: &OracleArgs, report: &mut Report) -> Run<Verdict> {
    let inst = load_instance(&args.instance)?;
    report.push("stability", args.notion.notion());
    match (&args.partition, args.notion.mode()) {
        (Some(p), Some(mode)) => {
            let pi = load_partition(p, &inst)?;
            let outcome = match find_blocking_bruteforce(&inst, &pi, mode.block_kind(), None)? {
                Some(cert) => Outcome::Unstable(cert),
                None => Outcome::Stable,
            };
            Ok(Verdict::new(format!("oracle-blocking-{mode}"), outcome))
        }
        (Some(_), None) => Err(Failure::Usage(
            "--partition is only meaningful for core and strict-core".into(),
        )),
        (None, _) => Ok(exists_stable_partition(&inst, args.notion.notion())?),
    }
}

fn summary(report: &Report) -> String {
    let get = |k| report.get(k).unwrap_or("");
    match report.get("verdict") {
        Some(v) => {
            let mut line = v.to_string();
            match (
                report.get("certificate"),
                report.get("partition"),
                report.get("reason"),
            ) {
                (Some(c), _, _) if c != "none" => line += &format!(": {c}"),
                (_, Some(p), _) => line += &format!(": {p}"),
                (_, _, Some(r)) => line += &format!(": {r}"),
                _ => {}
            }
            format!("{line}  [{}]", get("algorithm"))
        }
        None => report
            .entries()
            .iter()
            .skip(1)
            .map(|(k, v)| format!("{k}: {v}"))
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let name = match &cli.command {
        Command::Verify(_) => "verify",
        Command::Solve(_) => "solve",
        Command::Generate(_) => "generate",
        Command::Params(_) => "params",
        Command::Oracle(_) => "oracle",
    };
    let mut report = Report::new(name);
    let result: Run<Option<Verdict>> = match &cli.command {
        Command::Verify(a) => verify(a, cli.seed, &mut report).map(Some),
        Command::Solve(a) => solve(a, &mut report).map(Some),
        Command::Generate(a) => generate(a, &mut report).map(|_| None),
        Command::Params(a) => params(a, &mut report).map(|_| None),
        Command::Oracle(a) => oracle(a, &mut report).map(Some),
    };
    match result {
        Ok(verdict) => {
            let code = match &verdict {
                Some(v) => {
                    report.add_verdict(v);
                    u8::from(!v.outcome.is_positive())
                }
                None => 0,
            };
            if cli.report {
                print!("{}", report.render(Some(start.elapsed().as_millis())));
            } else {
                println!("{}", summary(&report));
            }
            ExitCode::from(code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::SizeLimit(_)) {
                3
            } else {
                2
            })
        }
    }
}

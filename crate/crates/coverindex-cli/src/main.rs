//! Command-line scenario runner.
//!
//! Configs are JSON documents (see the library's harness module); a bare
//! name selects the built-in scenario of that name. Exit codes: 0 all checks
//! pass, 1 at least one check fails, 2 configuration or input error.

use clap::{Args, Parser, Subcommand};
use coverindex::harness::{
    builtin_scenario, builtin_scenarios, run_scenario, CheckConfig, ScenarioConfig, VerdictReport,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "coverindex", version, about = "Index tables of vector fields on G-covers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check of a scenario and write its artifacts.
    Run(RunArgs),
    /// Compute the scenario's index table and write index_table.csv.
    IndexTable(RunArgs),
    /// Run only the summing-criterion checks of a scenario.
    Whyte(RunArgs),
    /// Run only the Stokes checks of a scenario.
    Stokes(RunArgs),
    /// List the built-in scenarios.
    ListScenarios,
}

#[derive(Args)]
struct RunArgs {
    /// Path to a scenario JSON file, or the name of a built-in scenario.
    config: String,
    /// Override the window radius.
    #[arg(long)]
    radius: Option<u32>,
    /// Override the quadrature panels per unit (both model dimensions).
    #[arg(long)]
    quad: Option<usize>,
    /// Directory for index_table.csv, whyte.csv, and verdict.json.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> coverindex::Result<bool> {
    match cli.command {
        Command::Run(args) => execute(args, None),
        Command::IndexTable(args) => execute(
            args,
            Some(&|check: &CheckConfig| {
                matches!(
                    check,
                    CheckConfig::IndexTableConstant { .. }
                        | CheckConfig::Class { .. }
                        | CheckConfig::ClassEqualConstant { .. }
                        | CheckConfig::WindingTable { .. }
                        | CheckConfig::ThomVsWinding
                        | CheckConfig::Diffeo { .. }
                        | CheckConfig::EulerTotal { .. }
                )
            }),
        ),
        Command::Whyte(args) => execute(
            args,
            Some(&|check: &CheckConfig| {
                matches!(
                    check,
                    CheckConfig::WhyteCertifyDelta { .. }
                        | CheckConfig::WhyteRefuteSweep { .. }
                        | CheckConfig::Ponzi { .. }
                )
            }),
        ),
        Command::Stokes(args) => execute(
            args,
            Some(&|check: &CheckConfig| matches!(check, CheckConfig::Stokes { .. })),
        ),
        Command::ListScenarios => {
            for s in builtin_scenarios() {
                let statements: Vec<String> = s
                    .checks
                    .iter()
                    .map(statement_tag)
                    .collect::<std::collections::BTreeSet<_>>()
                    .into_iter()
                    .collect();
                println!("{:<20} {}", s.name, statements.join(", "));
            }
            Ok(true)
        }
    }
}

fn execute(
    args: RunArgs,
    filter: Option<&dyn Fn(&CheckConfig) -> bool>,
) -> coverindex::Result<bool> {
    let mut config = load_config(&args.config)?;
    if let Some(r) = args.radius {
        config.radius = r;
    }
    if let Some(q) = args.quad {
        config.quad.panels_1d = q;
        config.quad.panels_2d = q;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(predicate) = filter {
        config.checks.retain(|c| predicate(c));
        if config.checks.is_empty() {
            return Err(coverindex::Error::Config(
                "no checks of the requested kind in this scenario".into(),
            ));
        }
    }
    let report = run_scenario(&config, args.out_dir.as_deref())?;
    print_report(&report);
    Ok(report.pass)
}

fn load_config(arg: &str) -> coverindex::Result<ScenarioConfig> {
    let path = std::path::Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        return ScenarioConfig::from_json(&text);
    }
    builtin_scenario(arg).ok_or_else(|| {
        coverindex::Error::Config(format!(
            "'{}' is neither a config file nor a built-in scenario (try list-scenarios)",
            arg
        ))
    })
}

fn print_report(report: &VerdictReport) {
    println!("scenario: {}", report.scenario);
    for check in &report.checks {
        let mark = if check.pass { "PASS" } else { "FAIL" };
        println!(
            "  [{}] {} ({}): expected {}; computed {}",
            mark, check.name, check.statement, check.expected, check.computed
        );
    }
    println!(
        "verdict: {}",
        if report.pass { "PASS" } else { "FAIL" }
    );
}

fn statement_tag(check: &CheckConfig) -> String {
    match check {
        CheckConfig::IndexTableConstant { .. } | CheckConfig::ClassEqualConstant { .. } => {
            "equivariant-poincare-hopf".into()
        }
        CheckConfig::Class { .. } => "coinvariant-class".into(),
        CheckConfig::FolnerMeans { .. } => "folner-averaging".into(),
        CheckConfig::Infinitude { .. } => "infinitely-many-zeros".into(),
        CheckConfig::Diffeo { .. } => "fixed-points-near-identity".into(),
        CheckConfig::WindingTable { .. } => "local-index-sum".into(),
        CheckConfig::ThomVsWinding => "thom-pullback-vs-winding".into(),
        CheckConfig::Stokes { .. } => "stokes-per-domain".into(),
        CheckConfig::Antiderivative { .. } => "line-antiderivative".into(),
        CheckConfig::AntiderivativeRandom { .. } => "line-isomorphism-evidence".into(),
        CheckConfig::WhyteCertifyDelta { .. } | CheckConfig::WhyteRefuteSweep { .. } => {
            "whyte-criterion".into()
        }
        CheckConfig::Ponzi { .. } => "ponzi-flow".into(),
        CheckConfig::FacetPartition { .. } => "facet-generators".into(),
        CheckConfig::Orientation { .. } => "orientation-opposition".into(),
        CheckConfig::EulerTotal { .. } => "finite-cover-euler".into(),
    }
}

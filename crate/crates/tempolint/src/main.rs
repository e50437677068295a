//! Command-line front end: parse, decompose, debug, solve, monitor and
//! generate, with deterministic JSON or text reports.
//!
//! Exit codes: 0 when the analysis found nothing wrong (passed, SAT,
//! entailed, all traces satisfied, no vacuous signals), 1 when it produced
//! findings, 2 for usage, file or configuration errors.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use tempolint::debugger::{debug_pipeline, DebugConfig, FinalStatus};
use tempolint::monitor::{
    antecedent_failure_check, classify_rr, evaluate, falsification_localize,
    literal_removal_check, TimedTrace, VacuityFinding,
};
use tempolint::predicate::table_for_formula;
use tempolint::rational::{format_rational, parse_rational, rat, Rational};
use tempolint::report::{
    debug_report_json, debug_report_text, sat_verdict_json, signal_finding_json,
};
use tempolint::sat::{check_sat, entails, export_dimacs, GridConfig, SatStatus};
use tempolint::tracegen::{generate_synthetic_traces, TraceProfile};
use tempolint::{parse, to_nnf, Formula};

#[derive(Parser)]
#[command(name = "tempolint", version, about = "Debug and monitor real-time requirements")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Grid step for the satisfiability engine (rational, e.g. 1 or 1/2)
    #[arg(long, global = true, default_value = "1")]
    grid_step: String,

    /// Refuse satisfiability queries whose horizon exceeds this bound
    #[arg(long, global = true)]
    horizon_cap: Option<String>,

    /// Stop at the first finding
    #[arg(long, global = true)]
    early_stop: bool,

    /// Re-solve each query at half the grid step and report verdict changes
    #[arg(long, global = true)]
    refine_check: bool,

    /// Drop mutual-exclusion side constraints
    #[arg(long, global = true)]
    no_mutex: bool,

    /// Declare a mutual-exclusion group of atoms, e.g. --mutex p1,p3
    #[arg(long, global = true, value_name = "ATOMS")]
    mutex: Vec<String>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for trace generation
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Trace duration override (rational time units)
    #[arg(long, global = true)]
    duration: Option<String>,

    /// Write the report (or generated traces) here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full debugging pipeline on a specification file
    Debug { spec: PathBuf },
    /// Decide satisfiability of a specification
    Sat {
        spec: PathBuf,
        /// Emit the DIMACS encoding instead of solving
        #[arg(long)]
        dimacs: bool,
    },
    /// Check whether the left specification entails the right one
    Entails { lhs: PathBuf, rhs: PathBuf },
    /// Evaluate a specification on trace files
    Monitor {
        spec: PathBuf,
        #[arg(required = true)]
        traces: Vec<PathBuf>,
    },
    /// Signal-vacuity analysis: antecedent failure for request-response
    /// specifications, literal-occurrence removal otherwise
    VacuitySignal {
        spec: PathBuf,
        #[arg(required = true)]
        traces: Vec<PathBuf>,
    },
    /// Find the literals responsible for a falsified trace
    Localize { spec: PathBuf, trace: PathBuf },
    /// Decompose the specification's predicates into mutually exclusive atoms
    Decompose { spec: PathBuf },
    /// Generate synthetic traces from a profile (`at`, `at-gear3`, or a JSON file)
    GenTraces {
        profile: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

struct Options {
    grid: GridConfig,
    early_stop: bool,
    mutex_enabled: bool,
    extra_mutex: Vec<Vec<String>>,
    format: Format,
    seed: u64,
    duration: Option<Rational>,
    out: Option<PathBuf>,
}

#[derive(Debug)]
struct CliError(String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

type CliResult = Result<ExitCode, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn options(cli: &Cli) -> Result<Options, CliError> {
    let step = parse_rational(&cli.grid_step).map_err(|e| CliError(format!("--grid-step: {e}")))?;
    if step <= rat(0) {
        return Err(CliError("--grid-step must be positive".to_string()));
    }
    let horizon_cap = cli
        .horizon_cap
        .as_deref()
        .map(parse_rational)
        .transpose()
        .map_err(|e| CliError(format!("--horizon-cap: {e}")))?;
    let duration = cli
        .duration
        .as_deref()
        .map(parse_rational)
        .transpose()
        .map_err(|e| CliError(format!("--duration: {e}")))?;
    let extra_mutex: Vec<Vec<String>> = cli
        .mutex
        .iter()
        .map(|group| {
            group
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect()
        })
        .collect();
    Ok(Options {
        grid: GridConfig {
            step,
            horizon_cap,
            refine_check: cli.refine_check,
        },
        early_stop: cli.early_stop,
        mutex_enabled: !cli.no_mutex,
        extra_mutex,
        format: cli.format,
        seed: cli.seed,
        duration,
        out: cli.out.clone(),
    })
}

fn config_json(opts: &Options) -> Value {
    json!({
        "gridStep": format_rational(&opts.grid.step),
        "horizonCap": opts.grid.horizon_cap.as_ref().map(format_rational),
        "refineCheck": opts.grid.refine_check,
        "earlyStop": opts.early_stop,
        "mutexEnabled": opts.mutex_enabled,
        "extraMutex": opts.extra_mutex,
        "seed": opts.seed,
        "duration": opts.duration.as_ref().map(format_rational),
    })
}

fn load_spec(path: &Path) -> Result<Formula, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))?;
    parse(text.trim()).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn load_traces(paths: &[PathBuf], duration: Option<Rational>) -> Result<Vec<TimedTrace>, CliError> {
    paths
        .iter()
        .map(|p| TimedTrace::from_csv_file(p, duration).map_err(CliError::from))
        .collect()
}

fn emit(opts: &Options, text_form: String, json_form: Value) -> Result<(), CliError> {
    let payload = match opts.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&json_form)?),
        Format::Text => text_form,
    };
    match &opts.out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| CliError(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn exit(found_issues: bool) -> ExitCode {
    if found_issues {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(cli: Cli) -> CliResult {
    let opts = options(&cli)?;
    match &cli.command {
        Command::Debug { spec } => cmd_debug(&opts, spec),
        Command::Sat { spec, dimacs } => cmd_sat(&opts, spec, *dimacs),
        Command::Entails { lhs, rhs } => cmd_entails(&opts, lhs, rhs),
        Command::Monitor { spec, traces } => cmd_monitor(&opts, spec, traces),
        Command::VacuitySignal { spec, traces } => cmd_vacuity_signal(&opts, spec, traces),
        Command::Localize { spec, trace } => cmd_localize(&opts, spec, trace),
        Command::Decompose { spec } => cmd_decompose(&opts, spec),
        Command::GenTraces { profile, count } => cmd_gen_traces(&opts, profile, *count),
    }
}

fn cmd_debug(opts: &Options, spec: &Path) -> CliResult {
    let formula = load_spec(spec)?;
    let cfg = DebugConfig {
        grid: opts.grid.clone(),
        early_stop: opts.early_stop,
        mutex_enabled: opts.mutex_enabled,
        extra_mutex: opts.extra_mutex.clone(),
        use_fast_path: true,
    };
    let report = debug_pipeline(&formula, None, &cfg)?;
    emit(
        opts,
        debug_report_text(&report),
        debug_report_json(&report, config_json(opts)),
    )?;
    Ok(exit(report.status != FinalStatus::Passed))
}

fn cmd_sat(opts: &Options, spec: &Path, dimacs: bool) -> CliResult {
    let formula = to_nnf(&load_spec(spec)?);
    let mutex = mutex_for(opts, &formula);
    if dimacs {
        let doc = export_dimacs(&formula, &mutex, &opts.grid)?;
        emit(opts, doc.clone(), json!({ "dimacs": doc, "config": config_json(opts) }))?;
        return Ok(ExitCode::SUCCESS);
    }
    let verdict = check_sat(&formula, &mutex, &opts.grid)?;
    let mut text = format!("status: {:?}\n", verdict.status);
    if let Some(witness) = &verdict.witness {
        text.push_str("witness:\n");
        text.push_str(&witness.to_csv());
    }
    if let Some(note) = &verdict.refinement_note {
        text.push_str(&format!("diagnostic: {note}\n"));
    }
    emit(opts, text, sat_verdict_json(&verdict, config_json(opts)))?;
    Ok(exit(verdict.status == SatStatus::Unsat))
}

fn cmd_entails(opts: &Options, lhs: &Path, rhs: &Path) -> CliResult {
    let lhs_f = load_spec(lhs)?;
    let rhs_f = load_spec(rhs)?;
    let mutex = mutex_for(opts, &Formula::and(lhs_f.clone(), rhs_f.clone()));
    let holds = entails(&lhs_f, &rhs_f, &mutex, &opts.grid)?;
    emit(
        opts,
        format!("entails: {holds}\n"),
        json!({ "entails": holds, "config": config_json(opts) }),
    )?;
    Ok(exit(!holds))
}

/// Mutex groups for a formula: the table of its own predicates (when
/// enabled) plus user-declared groups.
fn mutex_for(opts: &Options, formula: &Formula) -> Vec<Vec<String>> {
    let mut groups = Vec::new();
    if opts.mutex_enabled {
        if formula.has_predicates() {
            groups.extend(table_for_formula(formula).mutex_groups());
        }
        groups.extend(opts.extra_mutex.iter().cloned());
    }
    groups
}

fn cmd_monitor(opts: &Options, spec: &Path, trace_paths: &[PathBuf]) -> CliResult {
    let formula = load_spec(spec)?;
    let traces = load_traces(trace_paths, opts.duration)?;
    let mut rows = Vec::new();
    let mut text = format!("specification: {formula}\n");
    let mut falsified = 0usize;
    for trace in &traces {
        let verdict = evaluate(trace, &formula, &rat(0))?;
        if !verdict {
            falsified += 1;
        }
        text.push_str(&format!(
            "trace {}: {}\n",
            trace.id(),
            if verdict { "satisfied" } else { "falsified" }
        ));
        rows.push(json!({ "trace": trace.id(), "satisfied": verdict }));
    }
    text.push_str(&format!("falsified: {falsified} / {}\n", traces.len()));
    emit(
        opts,
        text,
        json!({
            "formula": formula.to_string(),
            "traces": rows,
            "falsified": falsified,
            "total": traces.len(),
            "config": config_json(opts),
        }),
    )?;
    Ok(exit(falsified > 0))
}

fn cmd_vacuity_signal(opts: &Options, spec: &Path, trace_paths: &[PathBuf]) -> CliResult {
    let formula = load_spec(spec)?;
    let traces = load_traces(trace_paths, opts.duration)?;
    let request_response = classify_rr(&formula);
    let mode = if request_response {
        "antecedent-failure"
    } else {
        "literal-removal"
    };
    let mut vacuous = 0usize;
    let mut rows = Vec::new();
    let mut findings_json = Vec::new();
    let mut text = format!("specification: {formula}\nmode: {mode}\n");
    for trace in &traces {
        let findings: Vec<VacuityFinding> = if request_response {
            antecedent_failure_check(&formula, trace)?
        } else {
            literal_removal_check(&formula, trace)?
        };
        let is_vacuous = !findings.is_empty();
        if is_vacuous {
            vacuous += 1;
        }
        text.push_str(&format!(
            "trace {}: {}\n",
            trace.id(),
            if is_vacuous { "vacuous" } else { "not vacuous" }
        ));
        for finding in &findings {
            text.push_str(&format!("  {finding}\n"));
            findings_json.push(signal_finding_json(trace.id(), finding));
        }
        rows.push(json!({ "trace": trace.id(), "vacuous": is_vacuous }));
    }
    text.push_str(&format!("vacuous signals: {vacuous} / {}\n", traces.len()));
    emit(
        opts,
        text,
        json!({
            "formula": formula.to_string(),
            "mode": mode,
            "traces": rows,
            "findings": findings_json,
            "vacuousSignals": vacuous,
            "allSignals": traces.len(),
            "config": config_json(opts),
        }),
    )?;
    Ok(exit(vacuous > 0))
}

fn cmd_localize(opts: &Options, spec: &Path, trace_path: &Path) -> CliResult {
    let formula = load_spec(spec)?;
    let trace = TimedTrace::from_csv_file(trace_path, opts.duration)?;
    let findings = falsification_localize(&formula, &trace)?;
    let mut text = format!("specification: {formula}\ntrace {}: falsified\n", trace.id());
    let mut findings_json = Vec::new();
    for finding in &findings {
        text.push_str(&format!("  {finding}\n"));
        findings_json.push(signal_finding_json(trace.id(), finding));
    }
    if findings.is_empty() {
        text.push_str("  no single literal rescues satisfaction\n");
    }
    emit(
        opts,
        text,
        json!({
            "formula": formula.to_string(),
            "trace": trace.id(),
            "findings": findings_json,
            "config": config_json(opts),
        }),
    )?;
    Ok(exit(!findings.is_empty()))
}

fn cmd_decompose(opts: &Options, spec: &Path) -> CliResult {
    let formula = load_spec(spec)?;
    let table = table_for_formula(&formula);
    let abstracted = tempolint::predicate::abstract_formula(&formula, &table)?;
    let mut text = format!("specification: {formula}\nabstracted: {abstracted}\n");
    for atom in &table.atoms {
        text.push_str(&format!(
            "atom {} := {} in {}\n",
            atom.name, atom.variable, atom.region
        ));
    }
    for (pred, atoms) in &table.rewrites {
        text.push_str(&format!("rewrite {pred} -> {}\n", atoms.join("|")));
    }
    for group in &table.mutex {
        text.push_str(&format!(
            "mutex {}: {}\n",
            group.variable,
            group.members.join(",")
        ));
    }
    let mut json_form = table.to_json();
    json_form["abstracted"] = json!(abstracted.to_string());
    json_form["formula"] = json!(formula.to_string());
    json_form["config"] = config_json(opts);
    emit(opts, text, json_form)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen_traces(opts: &Options, profile_spec: &str, count: usize) -> CliResult {
    let mut profile = TraceProfile::resolve(profile_spec)?;
    if let Some(duration) = opts.duration {
        profile.duration = duration;
    }
    let traces = generate_synthetic_traces(&profile, count, opts.seed)?;
    match &opts.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError(format!("cannot create {}: {e}", dir.display())))?;
            for (i, trace) in traces.iter().enumerate() {
                let path = dir.join(format!("trace-{i:04}.csv"));
                std::fs::write(&path, trace.to_csv())
                    .map_err(|e| CliError(format!("cannot write {}: {e}", path.display())))?;
            }
            eprintln!("wrote {} traces to {}", traces.len(), dir.display());
            Ok(ExitCode::SUCCESS)
        }
        None if count == 1 => {
            print!("{}", traces[0].to_csv());
            Ok(ExitCode::SUCCESS)
        }
        None => Err(CliError(
            "--out DIR is required when generating more than one trace".to_string(),
        )),
    }
}

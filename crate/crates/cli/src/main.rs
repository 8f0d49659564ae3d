//! `rolkit`: classify, enumerate and query finite residuated ortholattices.
//!
//! Exit status is 0 on success, 1 when a checked property fails or a
//! counterexample is found, and 2 on usage, input or size errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rolkit::classify::{b6_subalgebra, class_witness, classify, ClassName};
use rolkit::congruence::{all_congruences, check_1_regular, Signature};
use rolkit::consequence::{consequence, parse_query_file, Outcome, Query, DEFAULT_MAX_VARS};
use rolkit::enumerate::{self, EnumOptions, HARD_CAP};
use rolkit::format::{parse_alg, parse_catalog, write_alg, write_catalog};
use rolkit::laws::{check_all, failures, render_report};
use rolkit::ops::{bar_image, residuate};
use rolkit::term::{parse_equation, parse_with, translate, Vars};
use rolkit::FiniteAlgebra;

/// Environment variable holding the worker count.
const THREADS_VAR: &str = "ROLKIT_THREADS";

/// Largest size allowed without `--deep`.
const SHALLOW_CAP: usize = 10;

#[derive(Parser)]
#[command(
    name = "rolkit",
    version,
    about = "Finite ortholattices, orthomodular lattices and residuated ortholattices"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report class membership of an `.alg` file.
    Check {
        file: PathBuf,
        /// Check a single class and explain a failure.
        #[arg(long)]
        class: Option<ClassName>,
    },
    /// Enumerate a class up to isomorphism and print the count.
    Enumerate {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        class: ClassName,
        /// Write the catalog file here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow sizes 11 and 12.
        #[arg(long)]
        deep: bool,
    },
    /// Run the property suites.
    Props { file: PathBuf },
    /// Compute the residual and emit the algebra with it.
    Residuate {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the orthomodular lattice of bar-fixed points.
    Bar {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the negative translation to an equation or a term.
    Translate {
        input: String,
        /// Print without the `~` and `!` abbreviations.
        #[arg(long)]
        core: bool,
    },
    /// List the congruences of an algebra.
    Congruences {
        file: PathBuf,
        #[arg(long, default_value = "ol")]
        signature: Signature,
    },
    /// Decide a query over catalog files or freshly enumerated catalogs.
    Consequence(ConsequenceArgs),
    /// Print the numbers of orthomodular and residuated ortholattices.
    Counts {
        #[arg(long)]
        max: usize,
        /// Allow sizes 11 and 12.
        #[arg(long)]
        deep: bool,
    },
}

#[derive(Args)]
struct ConsequenceArgs {
    /// Catalog file; may be repeated, indices run over the concatenation.
    #[arg(long)]
    catalog: Vec<PathBuf>,
    /// Enumerate this class instead of reading catalogs.
    #[arg(long, conflicts_with = "catalog", requires = "max_size")]
    class: Option<ClassName>,
    /// With `--class`: all sizes `2..=max_size`.
    #[arg(long, requires = "class")]
    max_size: Option<usize>,
    /// Query file (`premises:` block and `goal:` line).
    #[arg(long, conflicts_with = "goal")]
    query: Option<PathBuf>,
    /// Inline goal equation.
    #[arg(long)]
    goal: Option<String>,
    /// Inline premise; may be repeated.
    #[arg(long, requires = "goal")]
    premise: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
    max_vars: usize,
    /// Decide the translated query instead.
    #[arg(long)]
    translate: bool,
}

enum Failure {
    /// Exit 1; the report is already printed.
    Violation,
    /// Exit 2.
    Usage(String),
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_alg(path: &Path) -> Result<FiniteAlgebra, Failure> {
    parse_alg(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check_size(n: usize, deep: bool) -> CmdResult {
    let cap = if deep { HARD_CAP } else { SHALLOW_CAP };
    if n > cap {
        let hint = if deep { "" } else { " (use --deep for 11 and 12)" };
        return Err(usage(format!("SizeBound: size {n} exceeds {cap}{hint}")));
    }
    Ok(())
}

fn cmd_check(file: &Path, class: Option<ClassName>) -> CmdResult {
    let a = load_alg(file)?;
    let flags = classify(&a).map_err(|w| usage(format!("classification cross-check failed: {}", w.render(&a))))?;
    let Some(class) = class else {
        for c in [ClassName::Bil, ClassName::Ol, ClassName::Oml, ClassName::Rol] {
            println!("{c}: {}", yes_no(flags.contains(c)));
        }
        return Ok(());
    };
    match class_witness(&a, class) {
        None => {
            let note = match class {
                ClassName::Rol if a.has_residual() => " (residual verified)",
                ClassName::Rol => " (residual computed)",
                _ => "",
            };
            println!("{class}: yes{note}");
            Ok(())
        }
        Some(w) => {
            let reason = if w.law == "B6Subalgebra" {
                let emb = b6_subalgebra(&a).expect("witness came from an embedding");
                let names: Vec<String> = emb.iter().map(|&x| a.name(x).into_owned()).collect();
                let identity = a.size() == 6 && emb.iter().enumerate().all(|(i, &x)| i == x);
                format!(
                    "B6 subalgebra {{{}}}{}",
                    names.join(","),
                    if identity { " (identity)" } else { "" }
                )
            } else {
                w.render(&a)
            };
            println!("{class}: no — {reason}");
            Err(Failure::Violation)
        }
    }
}

fn cmd_enumerate(size: usize, class: ClassName, out: Option<&Path>, deep: bool) -> CmdResult {
    check_size(size, deep)?;
    let catalog = enumerate::enumerate_class_with(size, class, EnumOptions::default()).map_err(usage)?;
    if let Some(path) = out {
        emit(&write_catalog(class, size, &catalog.algebras), Some(path))?;
    }
    println!("{}", catalog.len());
    Ok(())
}

fn cmd_props(file: &Path) -> CmdResult {
    let a = load_alg(file)?;
    let results = check_all(&a);
    print!("{}", render_report(&a, &results));
    let failed = failures(&results).len();
    println!("{} laws, {failed} failed", results.len());
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn residuated(a: &FiniteAlgebra) -> Result<FiniteAlgebra, Failure> {
    if a.has_residual() {
        return Ok(a.clone());
    }
    residuate(a).map_err(|w| {
        println!("not residuated: {}", w.render(a));
        Failure::Violation
    })
}

fn cmd_residuate(file: &Path, out: Option<&Path>) -> CmdResult {
    let a = load_alg(file)?;
    let r = residuate(&a.clone().without_residual()).map_err(|w| {
        println!("not residuated: {}", w.render(&a));
        Failure::Violation
    })?;
    emit(&write_alg(&r), out)
}

fn cmd_bar(file: &Path, out: Option<&Path>) -> CmdResult {
    let a = residuated(&load_alg(file)?)?;
    let image = bar_image(&a).map_err(|e| {
        println!("{e}");
        Failure::Violation
    })?;
    emit(&write_alg(&image.algebra), out)
}

fn cmd_translate(input: &str, core: bool) -> CmdResult {
    if input.contains('=') {
        let (eq, vars) = parse_equation(input).map_err(usage)?;
        let t = eq.translate();
        if core {
            println!("{}", t.display(&vars));
        } else {
            println!("{}", t.pretty(&vars));
        }
    } else {
        let mut vars = Vars::new();
        let term = parse_with(input, &mut vars).map_err(usage)?;
        let t = translate(&term);
        if core {
            println!("{}", t.display(&vars));
        } else {
            println!("{}", t.pretty(&vars));
        }
    }
    Ok(())
}

fn cmd_congruences(file: &Path, signature: Signature) -> CmdResult {
    let mut a = load_alg(file)?;
    if signature == Signature::Rol {
        a = residuated(&a)?;
    }
    let all = all_congruences(&a, signature).map_err(usage)?;
    println!("{} congruences ({signature} signature)", all.len());
    for c in &all {
        println!("{}", c.render(&a));
    }
    if signature == Signature::Rol {
        match check_1_regular(&a).map_err(usage)? {
            None => println!("1-regular: yes"),
            Some((t, p)) => println!(
                "1-regular: no — {} and {} share the class of 1",
                t.render(&a),
                p.render(&a)
            ),
        }
    }
    Ok(())
}

fn load_catalogs(args: &ConsequenceArgs) -> Result<(String, Vec<FiniteAlgebra>), Failure> {
    if let (Some(class), Some(max)) = (args.class, args.max_size) {
        check_size(max, false)?;
        let cats = enumerate::enumerate_range(max, class).map_err(usage)?;
        let algebras: Vec<FiniteAlgebra> = cats.into_iter().flat_map(|c| c.algebras).collect();
        return Ok((format!("{class} n <= {max}"), algebras));
    }
    if args.catalog.is_empty() {
        return Err(usage("give --catalog files or --class with --max-size"));
    }
    let mut algebras = Vec::new();
    let mut labels = Vec::new();
    for path in &args.catalog {
        let cat = parse_catalog(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        labels.push(format!("{} {}", cat.class, cat.size));
        algebras.extend(cat.algebras);
    }
    Ok((labels.join(", "), algebras))
}

fn load_query(args: &ConsequenceArgs) -> Result<Query, Failure> {
    match (&args.query, &args.goal) {
        (Some(path), None) => parse_query_file(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display()))),
        (None, Some(goal)) => {
            let premises: Vec<&str> = args.premise.iter().map(String::as_str).collect();
            Query::parse(&premises, goal).map_err(usage)
        }
        _ => Err(usage("give exactly one of --query and --goal")),
    }
}

fn cmd_consequence(args: &ConsequenceArgs) -> CmdResult {
    let mut query = load_query(args)?;
    if args.translate {
        query = query.translated();
    }
    let (label, algebras) = load_catalogs(args)?;
    let outcome = consequence(&algebras, &query, args.max_vars).map_err(usage)?;
    let mut out = String::new();
    writeln!(out, "query: {query}").expect("write to string");
    writeln!(out, "catalog: {label} ({} algebras)", algebras.len()).expect("write to string");
    match outcome {
        Outcome::HoldsOverCatalog { algebras, assignments } => {
            writeln!(
                out,
                "result: holds over the catalog ({algebras} algebras, {assignments} assignments; not a claim about the variety)"
            )
            .expect("write to string");
            print!("{out}");
            Ok(())
        }
        Outcome::Counterexample(c) => {
            let a = &algebras[c.algebra];
            writeln!(out, "result: counterexample").expect("write to string");
            writeln!(out, "algebra: {} (size {})", c.algebra, a.size()).expect("write to string");
            let assignment: Vec<String> = c
                .assignment
                .iter()
                .enumerate()
                .map(|(i, &v)| format!("{}={}", query.vars.name(i), a.name(v)))
                .collect();
            writeln!(out, "assignment: {}", assignment.join(" ")).expect("write to string");
            for (p, (l, _)) in query.premises.iter().zip(&c.premise_values) {
                writeln!(out, "premise: {}  [both sides {}]", p.pretty(&query.vars), a.name(*l))
                    .expect("write to string");
            }
            writeln!(
                out,
                "goal: {}  [lhs {}, rhs {}]",
                query.goal.pretty(&query.vars),
                a.name(c.goal_values.0),
                a.name(c.goal_values.1)
            )
            .expect("write to string");
            out.push('\n');
            out.push_str(&write_alg(a));
            print!("{out}");
            Err(Failure::Violation)
        }
    }
}

fn cmd_counts(max: usize, deep: bool) -> CmdResult {
    check_size(max, deep)?;
    let rows = enumerate::count_table(max).map_err(usage)?;
    print!("n\tomls\trols\n{}", enumerate::format_counts(&rows));
    Ok(())
}

fn configure_threads() -> CmdResult {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| usage(format!("{THREADS_VAR} must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(usage)
}

fn run(cli: Cli) -> CmdResult {
    configure_threads()?;
    match cli.cmd {
        Cmd::Check { file, class } => cmd_check(&file, class),
        Cmd::Enumerate { size, class, out, deep } => cmd_enumerate(size, class, out.as_deref(), deep),
        Cmd::Props { file } => cmd_props(&file),
        Cmd::Residuate { file, out } => cmd_residuate(&file, out.as_deref()),
        Cmd::Bar { file, out } => cmd_bar(&file, out.as_deref()),
        Cmd::Translate { input, core } => cmd_translate(&input, core),
        Cmd::Congruences { file, signature } => cmd_congruences(&file, signature),
        Cmd::Consequence(args) => cmd_consequence(&args),
        Cmd::Counts { max, deep } => cmd_counts(max, deep),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("rolkit: {msg}");
            ExitCode::from(2)
        }
    }
}

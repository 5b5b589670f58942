//! `tangle`: model checking, translations, filtrations and bounded search
//! from the command line.
//!
//! Exit codes: 0 success or true, 1 false or counterexample found, 2 usage
//! or input error, 3 search budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use tangle_core::filtration::{self, FiltrationMode};
use tangle_core::formula::parse;
use tangle_core::kripke::TangleEval;
use tangle_core::logics::{self, LogicProfile, LogicsError, SatOutcome, Schema, Validity};
use tangle_core::translate;
use tangle_core::{ClosureSet, Formula, Frame, KripkeModel, TopoModel, WorldSet};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

impl From<LogicsError> for CliError {
    fn from(e: LogicsError) -> CliError {
        match e {
            LogicsError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => usage(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "tangle", version, about = "Tangled modal logic toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Read the formula from this file instead of the command line.
    #[arg(long, global = true)]
    formula_file: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Mu,
    D,
    Star,
}

#[derive(Debug, Args)]
struct FiltrationArgs {
    /// Model file.
    model: PathBuf,
    formula: Option<String>,
    /// Also split classes by the maximal clusters each world sees.
    #[arg(long)]
    refined: bool,
    /// Add `<>true` and `true` to the closure set.
    #[arg(long)]
    dia_top: bool,
    /// Write the quotient model file here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write DOT renderings of the quotients with this path prefix.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and print a formula in canonical form.
    Fmt { formula: Option<String> },
    /// Check a formula on a Kripke model.
    Mc {
        model: PathBuf,
        formula: Option<String>,
        /// Report only this world; exit 1 if the formula is false there.
        #[arg(long)]
        world: Option<String>,
        /// Evaluate tangles with the cycle-search oracle.
        #[arg(long)]
        lasso: bool,
    },
    /// Check a formula on a finite topological space.
    Tmc {
        space: PathBuf,
        formula: Option<String>,
        /// Report only this point; exit 1 if the formula is false there.
        #[arg(long)]
        point: Option<String>,
    },
    /// Translate a formula.
    Translate {
        #[arg(long, value_enum)]
        mode: Mode,
        formula: Option<String>,
    },
    /// Filtrate a model through the closure of a formula.
    Filtrate(FiltrationArgs),
    /// Filtrate, then untangle the quotient clusters.
    Untangle {
        #[command(flatten)]
        args: FiltrationArgs,
        /// Keep loops on worlds outside the nuclei.
        #[arg(long)]
        reflexive: bool,
    },
    /// Report relation properties, clusters, ranks and connectivity.
    Analyze { frame: PathBuf },
    /// Search for a model of a formula on frames of a logic profile.
    Sat {
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 4)]
        max: usize,
        #[arg(long, default_value_t = logics::DEFAULT_BUDGET)]
        budget: u64,
        formula: Option<String>,
    },
    /// Check validity of a formula on a frame over all valuations.
    Validate {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long, default_value_t = logics::DEFAULT_BUDGET)]
        budget: u64,
        formula: Option<String>,
    },
    /// Instantiate an axiom schema, or list a profile's schemata.
    Axioms {
        #[arg(long, required_unless_present = "profile")]
        schema: Option<String>,
        /// Substituted formulas, in schema order.
        #[arg(long, num_args = 0.., allow_hyphen_values = true)]
        args: Vec<String>,
        #[arg(long, conflicts_with = "schema")]
        profile: Option<String>,
    },
    /// Emit a built-in model.
    Fixture {
        #[command(subcommand)]
        which: Fixture,
    },
}

#[derive(Debug, Subcommand)]
enum Fixture {
    /// Initial segment of the reflexive zig-zag model with colours r, g, b.
    Figure3 {
        #[arg(long)]
        m: usize,
    },
}

struct Ctx {
    format: Format,
    formula_file: Option<PathBuf>,
}

impl Ctx {
    fn formula(&self, inline: Option<&String>) -> Result<Formula, CliError> {
        let text = match (&self.formula_file, inline) {
            (Some(_), Some(_)) => {
                return Err(usage(
                    "give the formula inline or with --formula-file, not both",
                ))
            }
            (Some(path), None) => read(path)?,
            (None, Some(t)) => t.clone(),
            (None, None) => return Err(usage("missing formula")),
        };
        parse(text.trim()).map_err(usage)
    }

    fn no_dot(&self, what: &str) -> Result<(), CliError> {
        if self.format == Format::Dot {
            Err(usage(format!("{what} has no DOT output")))
        } else {
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn structured(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("reports serialise")
}

fn names(frame: &Frame, s: &WorldSet) -> String {
    format!("{{{}}}", frame.names_of(s).join(", "))
}

/// `println!` that exits quietly once the reader has gone away.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout().lock(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        format: cli.format,
        formula_file: cli.formula_file,
    };
    match run(&ctx, cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(ctx: &Ctx, command: Command) -> Result<u8, CliError> {
    match command {
        Command::Fmt { formula } => {
            ctx.no_dot("fmt")?;
            let f = ctx.formula(formula.as_ref())?;
            match ctx.format {
                Format::Structured => out!(
                    "{}",
                    structured(&json!({
                        "formula": f.to_string(),
                        "size": f.size(),
                        "modal_depth": f.modal_depth(),
                        "free_atoms": f.free_atoms(),
                    }))
                ),
                _ => out!("{f}"),
            }
            Ok(0)
        }
        Command::Mc {
            model,
            formula,
            world,
            lasso,
        } => {
            ctx.no_dot("mc")?;
            let f = ctx.formula(formula.as_ref())?;
            let m = KripkeModel::from_json(&read(&model)?).map_err(usage)?;
            let mode = if lasso {
                TangleEval::Lasso
            } else {
                TangleEval::Cluster
            };
            let ext = m.model_check_with(&f, mode).map_err(usage)?;
            report_extension(ctx, &f, m.frame().worlds(), &ext, world.as_deref())
        }
        Command::Tmc {
            space,
            formula,
            point,
        } => {
            ctx.no_dot("tmc")?;
            let f = ctx.formula(formula.as_ref())?;
            let m = TopoModel::from_json(&read(&space)?).map_err(usage)?;
            let ext = m.model_check(&f).map_err(usage)?;
            report_extension(ctx, &f, m.space().points(), &ext, point.as_deref())
        }
        Command::Translate { mode, formula } => {
            ctx.no_dot("translate")?;
            let f = ctx.formula(formula.as_ref())?;
            let out = match mode {
                Mode::Mu => translate::to_mu(&f),
                Mode::D => translate::to_d(&f),
                Mode::Star => translate::star(&f).map_err(usage)?,
            };
            match ctx.format {
                Format::Structured => out!(
                    "{}",
                    structured(&json!({"input": f.to_string(), "output": out.to_string()}))
                ),
                _ => out!("{out}"),
            }
            Ok(0)
        }
        Command::Filtrate(args) => filtrate(ctx, &args, None),
        Command::Untangle { args, reflexive } => filtrate(ctx, &args, Some(reflexive)),
        Command::Analyze { frame } => analyze(ctx, &frame),
        Command::Sat {
            profile,
            max,
            budget,
            formula,
        } => {
            let f = ctx.formula(formula.as_ref())?;
            let profile: LogicProfile = profile.parse()?;
            if max == 0 {
                return Err(usage("--max must be at least 1"));
            }
            match logics::bounded_sat(&f, &profile, max, budget)? {
                SatOutcome::Sat { model, world } => {
                    match ctx.format {
                        Format::Text => {
                            out!("sat at {}", model.frame().name(world));
                            out!("{}", model.to_json());
                        }
                        Format::Structured => out!(
                            "{}",
                            structured(&json!({
                                "result": "sat",
                                "world": model.frame().name(world),
                                "model": model.to_file(),
                            }))
                        ),
                        Format::Dot => out!("{}", model.to_dot().trim_end()),
                    }
                    Ok(0)
                }
                SatOutcome::Unsat { max_worlds } => {
                    match ctx.format {
                        Format::Structured => out!(
                            "{}",
                            structured(&json!({"result": "unsat", "max_worlds": max_worlds}))
                        ),
                        _ => out!(
                            "no model on {} frames with at most {max_worlds} worlds",
                            profile.name
                        ),
                    }
                    Ok(1)
                }
            }
        }
        Command::Validate {
            frame,
            budget,
            formula,
        } => {
            ctx.no_dot("validate")?;
            let f = ctx.formula(formula.as_ref())?;
            let frame = Frame::from_json(&read(&frame)?).map_err(usage)?;
            match logics::frame_validates(&frame, &f, budget)? {
                Validity::Valid => {
                    match ctx.format {
                        Format::Structured => out!("{}", structured(&json!({"valid": true}))),
                        _ => out!("valid"),
                    }
                    Ok(0)
                }
                Validity::Invalid { valuation, world } => {
                    let val: Vec<(String, Vec<String>)> = valuation
                        .iter()
                        .map(|(a, s)| (a.clone(), frame.names_of(s)))
                        .collect();
                    match ctx.format {
                        Format::Structured => out!(
                            "{}",
                            structured(&json!({
                                "valid": false,
                                "world": frame.name(world),
                                "valuation": val.into_iter().collect::<std::collections::BTreeMap<_, _>>(),
                            }))
                        ),
                        _ => {
                            out!("invalid: false at {}", frame.name(world));
                            for (a, s) in &valuation {
                                out!("  {a} = {}", names(&frame, s));
                            }
                        }
                    }
                    Ok(1)
                }
            }
        }
        Command::Axioms {
            schema,
            args,
            profile,
        } => {
            ctx.no_dot("axioms")?;
            if let Some(p) = profile {
                let p: LogicProfile = p.parse()?;
                let instances: Vec<(String, String)> = p
                    .schemas()
                    .into_iter()
                    .map(|s| (s.to_string(), s.generic().formula.to_string()))
                    .collect();
                match ctx.format {
                    Format::Structured => out!(
                        "{}",
                        structured(&json!({"profile": p, "axioms": instances}))
                    ),
                    _ => {
                        for (s, f) in instances {
                            out!("{s}: {f}");
                        }
                    }
                }
                return Ok(0);
            }
            let schema: Schema = schema.expect("clap requires it").parse()?;
            let args = args
                .iter()
                .map(|a| parse(a).map_err(usage))
                .collect::<Result<Vec<_>, _>>()?;
            let inst = schema.instantiate(&args)?;
            match ctx.format {
                Format::Structured => out!(
                    "{}",
                    structured(&json!({
                        "schema": inst.schema.to_string(),
                        "args": inst.args.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "formula": inst.formula.to_string(),
                    }))
                ),
                _ => out!("{}", inst.formula),
            }
            Ok(0)
        }
        Command::Fixture {
            which: Fixture::Figure3 { m },
        } => {
            let model = logics::figure3_model(m);
            match ctx.format {
                Format::Dot => out!("{}", model.to_dot().trim_end()),
                _ => out!("{}", model.to_json()),
            }
            Ok(0)
        }
    }
}

fn report_extension(
    ctx: &Ctx,
    f: &Formula,
    worlds: &[String],
    ext: &WorldSet,
    only: Option<&str>,
) -> Result<u8, CliError> {
    let selected: Vec<usize> = match only {
        Some(w) => vec![worlds
            .iter()
            .position(|x| x == w)
            .ok_or_else(|| usage(format!("unknown world {w:?}")))?],
        None => (0..worlds.len()).collect(),
    };
    match ctx.format {
        Format::Structured => {
            let truth: Vec<serde_json::Value> = selected
                .iter()
                .map(|&i| json!({"world": worlds[i], "value": ext.contains(i)}))
                .collect();
            let extension: Vec<&String> = ext.iter().map(|i| &worlds[i]).collect();
            out!(
                "{}",
                structured(
                    &json!({"formula": f.to_string(), "extension": extension, "truth": truth})
                )
            );
        }
        _ => {
            for &i in &selected {
                out!("{}: {}", worlds[i], ext.contains(i));
            }
            if only.is_none() {
                let extension: Vec<&str> = ext.iter().map(|i| worlds[i].as_str()).collect();
                out!("extension: {{{}}}", extension.join(", "));
            }
        }
    }
    Ok(match only {
        Some(_) if !ext.contains(selected[0]) => 1,
        _ => 0,
    })
}

fn filtrate(ctx: &Ctx, args: &FiltrationArgs, untangle: Option<bool>) -> Result<u8, CliError> {
    let f = ctx.formula(args.formula.as_ref())?;
    let m = KripkeModel::from_json(&read(&args.model)?).map_err(usage)?;
    let mut phi = ClosureSet::of([f]);
    if args.dia_top {
        phi = phi.with([Formula::dia(Formula::top()), Formula::top()]);
    }
    let mode = if args.refined {
        FiltrationMode::Refined
    } else {
        FiltrationMode::Standard
    };
    let fr = filtration::filtrate(&m, &phi, mode).map_err(usage)?;
    let conditions = fr.check_conditions(&m);
    let mut report = json!({
        "mode": mode,
        "source_worlds": m.len(),
        "closure_size": phi.len(),
        "quotient_worlds": fr.len(),
        "bound": format!("2^{}", phi.len()),
        "within_bound": phi.len() >= 64 || fr.len() as u64 <= 1u64 << phi.len(),
        "filtration_conditions": conditions.as_ref().err(),
        "classes": (0..fr.len())
            .map(|c| (fr.quotient().frame().name(c).to_string(), m.frame().names_of(fr.preimage(c))))
            .collect::<std::collections::BTreeMap<_, _>>(),
    });
    let mut failed = conditions.is_err();
    let mut dots = vec![("r_phi", fr.quotient().to_dot())];
    let output = match untangle {
        None => fr.quotient().clone(),
        Some(reflexive) => {
            let ut = filtration::untangle(&fr, &m, reflexive).map_err(usage)?;
            let reduction = filtration::verify_reduction(&fr, &ut, &m).map_err(usage)?;
            failed |= !reduction.holds();
            let preservation = filtration::preservation_report(&fr, &ut, &m);
            let clusters = ut.clusters();
            let critical: Vec<serde_json::Value> = (0..clusters.len())
                .map(|c| {
                    json!({
                        "cluster": fr.r_phi().names_of(clusters.cluster(c)),
                        "critical_point": m.frame().name(ut.critical_point(c)),
                        "nucleus": fr.r_phi().names_of(ut.nucleus(c)),
                    })
                })
                .collect();
            report["reflexive_mode"] = json!(reflexive);
            report["clusters"] = json!(critical);
            report["reduction"] = json!(reduction);
            report["preservation"] = json!(preservation);
            dots.push(("r_t", ut.model().to_dot()));
            ut.model().clone()
        }
    };
    if let Some(out) = &args.out {
        write(out, &output.to_json())?;
    }
    if let Some(prefix) = &args.dot {
        for (tag, text) in &dots {
            let mut path = prefix.clone().into_os_string();
            path.push(format!(".{tag}.dot"));
            write(Path::new(&path), text)?;
        }
    }
    match ctx.format {
        Format::Structured => out!("{}", structured(&report)),
        Format::Dot => out!("{}", output.to_dot().trim_end()),
        Format::Text => {
            out!(
                "{} worlds -> {} classes (|closure| = {}, bound 2^{})",
                m.len(),
                fr.len(),
                phi.len(),
                phi.len()
            );
            if let Err(e) = &conditions {
                out!("filtration conditions violated: {e}");
            }
            if let Some(r) = report.get("reduction") {
                out!("reduction: {}", if failed { "FAILED" } else { "holds" });
                if let Some(c) = r.get("counterexample").filter(|c| !c.is_null()) {
                    out!("  counterexample: {c}");
                }
            }
            if let Some(p) = report.get("preservation") {
                out!("preservation: {p}");
            }
            if args.out.is_none() {
                out!("{}", output.to_json());
            }
        }
    }
    Ok(failed as u8)
}

fn analyze(ctx: &Ctx, path: &Path) -> Result<u8, CliError> {
    let frame = Frame::from_json(&read(path)?).map_err(usage)?;
    if ctx.format == Format::Dot {
        out!("{}", frame.to_dot().trim_end());
        return Ok(0);
    }
    let props = frame.properties();
    let components: Vec<Vec<String>> = frame
        .path_components()
        .iter()
        .map(|c| frame.names_of(c))
        .collect();
    let local: Vec<(usize, bool)> = (1..=3).map(|n| (n, frame.locally_n_connected(n))).collect();
    let clusters = frame.clusters().ok().map(|d| {
        (0..d.len())
            .map(|c| {
                json!({
                    "worlds": frame.names_of(d.cluster(c)),
                    "degenerate": d.is_degenerate(c),
                    "rank": d.rank(c),
                })
            })
            .collect::<Vec<_>>()
    });
    match ctx.format {
        Format::Structured => {
            let local: Vec<serde_json::Value> = local
                .iter()
                .map(|(n, b)| json!({"n": n, "locally_n_connected": b}))
                .collect();
            out!(
                "{}",
                structured(&json!({
                    "worlds": frame.len(),
                    "properties": props,
                    "connected": frame.is_connected(),
                    "components": components,
                    "locally_n_connected": local,
                    "clusters": clusters,
                }))
            );
        }
        _ => {
            out!("worlds: {}", frame.len());
            out!(
                "reflexive={} transitive={} serial={}",
                props.reflexive,
                props.transitive,
                props.serial
            );
            out!(
                "connected={} components={}",
                frame.is_connected(),
                components.len()
            );
            for c in &components {
                out!("  component {{{}}}", c.join(", "));
            }
            for (n, b) in &local {
                out!("locally-{n}-connected={b}");
            }
            match &clusters {
                Some(cs) => {
                    for c in cs {
                        out!(
                            "cluster {} rank={} degenerate={}",
                            c["worlds"],
                            c["rank"],
                            c["degenerate"]
                        );
                    }
                }
                None => out!("clusters: frame is not transitive"),
            }
        }
    }
    Ok(0)
}

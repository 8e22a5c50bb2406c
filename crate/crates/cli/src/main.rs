//! `spinlift`: lift, project, classify and verify pseudo-orthogonal matrices
//! and spinor-group elements stored as JSON.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use spinlift::json::{self as docs, MultivectorDoc, OrthogonalDoc};
use spinlift::spin::{self, GroupTag};
use spinlift::par::{self, Exec};
use spinlift::{golden, ComponentTag, Error, Field, Multivector, OrthogonalMatrix, Signature};

#[derive(Parser)]
#[command(name = "spinlift", version, about = "Pin/Spin lifts of pseudo-orthogonal matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// Number of positive-square generators.
    #[arg(long)]
    p: Option<usize>,
    /// Number of negative-square generators.
    #[arg(long)]
    q: Option<usize>,
    /// Input file or inline JSON; stdin when omitted.
    #[arg(long)]
    input: Option<String>,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Lift an O(p,q) matrix to ±T in Pin(p,q).
    Lift(Common),
    /// Matrix of the twisted adjoint of a multivector.
    Project(Common),
    /// Connected component of an O(p,q) matrix.
    Classify(Common),
    /// Check that a multivector lies in Pin(p,q) and covers a given matrix.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Matrix file or inline JSON.
        #[arg(long)]
        matrix: String,
    },
    /// Random versor round trips: project, lift, compare up to sign.
    Fuzz {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Work over the complex field.
        #[arg(long)]
        complex: bool,
    },
    /// Run the packaged golden vectors, or those in --input.
    Selftest {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug)]
enum Failure {
    Property(String),
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Property(_) => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Property(m) | Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

fn input_error(e: Error) -> Failure {
    match e {
        Error::NotOrthogonal { residual } => {
            Failure::Input(format!("matrix is not in O(p,q): |P^T eta P - eta| = {residual:e}"))
        }
        e => Failure::Input(e.to_string()),
    }
}

type CmdResult = Result<(), Failure>;

fn read_source(source: Option<&str>) -> Result<String, Failure> {
    match source {
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Input(format!("reading stdin: {e}")))?;
            Ok(text)
        }
        Some(s) if s.trim_start().starts_with(['{', '[']) => Ok(s.to_string()),
        Some(path) => {
            std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("reading {path}: {e}")))
        }
    }
}

fn parse_value(text: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Input(format!("invalid JSON: {e}")))
}

/// Fills `p`/`q` from the flags when absent and rejects disagreements.
fn merge_signature(value: &mut Value, common: &Common) -> CmdResult {
    let Some(obj) = value.as_object_mut() else {
        return Err(Failure::Input("expected a JSON object".into()));
    };
    for (key, flag) in [("p", common.p), ("q", common.q)] {
        match (obj.get(key).and_then(Value::as_u64), flag) {
            (Some(doc), Some(flag)) if doc as usize != flag => {
                return Err(Failure::Input(format!(
                    "--{key} {flag} disagrees with the document ({key} = {doc})"
                )));
            }
            (None, Some(flag)) => {
                obj.insert(key.into(), json!(flag));
            }
            (None, None) => {
                return Err(Failure::Input(format!("signature missing: pass --{key}")));
            }
            _ => {}
        }
    }
    Ok(())
}

fn read_matrix(source: Option<&str>, common: &Common) -> Result<OrthogonalMatrix, Failure> {
    let mut value = parse_value(&read_source(source)?)?;
    merge_signature(&mut value, common)?;
    let doc: OrthogonalDoc =
        serde_json::from_value(value).map_err(|e| Failure::Input(format!("invalid matrix document: {e}")))?;
    doc.to_matrix(common.tolerance).map_err(input_error)
}

fn read_multivector(common: &Common) -> Result<Multivector, Failure> {
    let mut value = parse_value(&read_source(common.input.as_deref())?)?;
    if let Some(t) = value.get("t_plus") {
        value = t.clone();
    }
    merge_signature(&mut value, common)?;
    let doc: MultivectorDoc = serde_json::from_value(value)
        .map_err(|e| Failure::Input(format!("invalid multivector document: {e}")))?;
    Multivector::try_from(&doc).map_err(input_error)
}

fn emit(common: &Common, text: &str) -> CmdResult {
    match &common.output {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| Failure::Internal(format!("writing {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn groups_line(groups: &[GroupTag]) -> String {
    groups.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn cmd_lift(common: &Common) -> CmdResult {
    let p = read_matrix(common.input.as_deref(), common)?;
    let r = spin::lift(&p).map_err(|e| Failure::Internal(format!("lift failed: {e}")))?;
    emit(common, &docs::lift_to_json(&r))?;
    eprintln!("T = ±{}", r.t_plus);
    eprintln!("norm: T~T = {}", r.norm_type.as_str());
    eprintln!("groups: {}", groups_line(r.groups()));
    eprintln!("component: {} covering {}", r.membership.component, r.component);
    eprintln!("residual: {:e}", r.residual);
    Ok(())
}

fn cmd_project(common: &Common) -> CmdResult {
    let t = read_multivector(common)?;
    let p = spin::project(&t).map_err(input_error)?;
    emit(common, &docs::orthogonal_to_json(&p))?;
    eprintln!("component: {}", spinlift::classify_orthogonal(&p));
    Ok(())
}

fn cmd_classify(common: &Common) -> CmdResult {
    let p = read_matrix(common.input.as_deref(), common)?;
    let sig = p.signature();
    let tag = spinlift::classify_orthogonal(&p);
    let report = json!({
        "p": sig.p(),
        "q": sig.q(),
        "component": tag,
        "determinant": p.determinant(),
        "time_minor": p.time_minor(),
        "space_minor": p.space_minor(),
    });
    emit(common, &docs::to_pretty(&report))?;
    eprintln!("component: {tag}");
    Ok(())
}

fn cmd_verify(common: &Common, matrix: &str) -> CmdResult {
    let t = read_multivector(common)?;
    let p = read_matrix(Some(matrix), common)?;
    if t.signature().p() != p.signature().p() || t.signature().q() != p.signature().q() {
        return Err(Failure::Input("multivector and matrix signatures differ".into()));
    }
    let (report, ok) = match spin::membership(&t) {
        Err(e) => (json!({ "verified": false, "reason": e.to_string() }), false),
        Ok(m) => {
            let back = spin::project(&t).map_err(input_error)?;
            let residual = back.distance(&p);
            let ok = residual <= common.tolerance;
            let report = json!({
                "verified": ok,
                "residual": residual,
                "groups": m.groups,
                "pin_component": m.component,
                "component": spinlift::classify_orthogonal(&p),
            });
            (report, ok)
        }
    };
    emit(common, &docs::to_pretty(&report))?;
    if ok {
        eprintln!("verified: T covers P");
        Ok(())
    } else {
        Err(Failure::Property("T does not cover P".into()))
    }
}

fn cmd_fuzz(common: &Common, seed: u64, count: usize, complex: bool) -> CmdResult {
    let (Some(p), Some(q)) = (common.p, common.q) else {
        return Err(Failure::Input("fuzz needs --p and --q".into()));
    };
    let field = if complex { Field::Complex } else { Field::Real };
    let sig = Signature::new(p, q, field).map_err(input_error)?;
    let mut components: BTreeMap<&'static str, usize> =
        ComponentTag::ALL.iter().map(|c| (c.as_str(), 0)).collect();
    let mut max_residual = 0.0f64;
    let mut failures = Vec::new();
    let outcomes = par::map_range(Exec::default(), count, |trial| {
        let trial_seed = seed.wrapping_add(trial as u64);
        let k = 1 + (trial_seed % 6) as usize;
        let outcome = spin::random_versor(sig, k, trial_seed).and_then(|t| spin::round_trip(&t));
        (trial, trial_seed, outcome)
    });
    for (trial, trial_seed, outcome) in outcomes {
        match outcome {
            Ok((r, d)) if d <= common.tolerance => {
                max_residual = max_residual.max(d);
                *components.entry(r.component.as_str()).or_default() += 1;
            }
            Ok((_, d)) => {
                max_residual = max_residual.max(d);
                failures.push(json!({ "trial": trial, "seed": trial_seed, "error": format!("residual {d:e}") }));
            }
            Err(e) => failures.push(json!({ "trial": trial, "seed": trial_seed, "error": e.to_string() })),
        }
    }
    let passed = count - failures.len();
    let report = json!({
        "p": p,
        "q": q,
        "field": field,
        "seed": seed,
        "count": count,
        "passed": passed,
        "max_residual": max_residual,
        "components": components,
        "failures": failures,
    });
    emit(common, &docs::to_pretty(&report))?;
    eprintln!("{passed}/{count} ok");
    eprintln!("max residual: {max_residual:e}");
    for (c, n) in &components {
        eprintln!("{c}: {n}");
    }
    match failures.first() {
        None => Ok(()),
        Some(f) => Err(Failure::Property(format!(
            "{} trial(s) failed; reproduce with --seed {} --count 1",
            failures.len(),
            f["seed"]
        ))),
    }
}

fn cmd_selftest(common: &Common) -> CmdResult {
    let outcomes = match &common.input {
        None => golden::run_packaged(),
        Some(_) => {
            let text = read_source(common.input.as_deref())?;
            golden::run_text(&text).map_err(|e| Failure::Property(format!("golden file unreadable: {e}")))?
        }
    };
    let mut lines: Vec<String> = outcomes.iter().map(golden::Outcome::line).collect();
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.name.as_str())
        .collect();
    lines.push(format!("{}/{} golden items passed", outcomes.len() - failed.len(), outcomes.len()));
    emit(common, &lines.join("\n"))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Property(format!("failed: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Lift(c) => cmd_lift(c),
        Command::Project(c) => cmd_project(c),
        Command::Classify(c) => cmd_classify(c),
        Command::Verify { common, matrix } => cmd_verify(common, matrix),
        Command::Fuzz { common, seed, count, complex } => cmd_fuzz(common, *seed, *count, *complex),
        Command::Selftest { common } => cmd_selftest(common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

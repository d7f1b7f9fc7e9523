use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kqm_core::classifier::{
    classify_composition, classify_strict, classify_weighted, oracle_depth, vertex_defect, verify_with_oracle,
    weighted_vertex_defect, ClassificationReport, DefectQuery,
};
use kqm_core::derivatives::{f_factor, h, wgram};
use kqm_core::oracle::{defect_quadratic_form, Truncation};
use kqm_core::{corpus, Error, LoadedSpec, MeasureSpec, Result, SpecFile, VertexId, WeightSpec};

#[derive(Parser)]
#[command(name = "kqm", version, about = "Decide k-quasi-m-isometry of composition operators on one-circuit graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Quantity {
    H,
    #[value(name = "F")]
    F,
    Wgram,
}

#[derive(Subcommand)]
enum Command {
    /// Classify C (or W with --weighted) for the given k and m.
    Classify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        weighted: bool,
        /// Require m >= 2 and report strictness against m - 1.
        #[arg(long)]
        strict: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate h_p, F_p or h_p F_p at one vertex.
    Compute {
        #[arg(long)]
        spec: PathBuf,
        /// "c:r" or "b:r:i:j".
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum, default_value_t = Quantity::H)]
        quantity: Quantity,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Per-vertex defects from the truncated matrix next to the closed-form values.
    Oracle {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        weighted: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a built-in example (e1, e2, e3).
    Example {
        id: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check positivity and boundedness of a spec file.
    Validate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

struct Outcome {
    output: String,
    code: u8,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, code: 0 }
    }
}

fn load(path: &Path) -> Result<LoadedSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    kqm_core::parse_spec(&text)
}

fn query(loaded: &LoadedSpec, k: Option<usize>, m: Option<usize>) -> Result<DefectQuery> {
    let k = k.or(loaded.k).ok_or_else(|| Error::Parse("k is neither given by --k nor in the spec file".into()))?;
    let m = m.or(loaded.m).ok_or_else(|| Error::Parse("m is neither given by --m nor in the spec file".into()))?;
    DefectQuery::new(k, m)
}

fn weight_for(loaded: &LoadedSpec, weighted: bool) -> Result<Option<&WeightSpec>> {
    if !weighted {
        return Ok(None);
    }
    loaded
        .weight
        .as_ref()
        .map(Some)
        .ok_or_else(|| Error::Validation("--weighted needs a \"weight\" section in the spec file".into()))
}

fn classify(spec: &MeasureSpec, w: Option<&WeightSpec>, q: DefectQuery, strict: bool) -> Result<ClassificationReport> {
    let mut report = match w {
        Some(w) => {
            if strict && q.m < 2 {
                return Err(Error::Domain("strictness is defined for m >= 2".into()));
            }
            classify_weighted(spec, w, q)?
        }
        None if strict => classify_strict(spec, q)?,
        None => classify_composition(spec, q)?,
    };
    verify_with_oracle(&mut report, spec, w)?;
    Ok(report)
}

fn render(report: &ClassificationReport, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Structured => report.to_structured() + "\n",
    }
}

fn report_outcome(output: String, report: &ClassificationReport) -> Outcome {
    let code = if report.oracle_agrees == Some(false) { 3 } else { 0 };
    Outcome { output, code }
}

fn run_classify(path: &Path, k: Option<usize>, m: Option<usize>, weighted: bool, strict: bool, format: Format) -> Result<Outcome> {
    let loaded = load(path)?;
    let q = query(&loaded, k, m)?;
    let report = classify(&loaded.measure, weight_for(&loaded, weighted)?, q, strict)?;
    Ok(report_outcome(render(&report, format), &report))
}

fn run_compute(path: &Path, vertex: &str, p: usize, quantity: Quantity, format: Format) -> Result<Outcome> {
    let loaded = load(path)?;
    let spec = &loaded.measure;
    spec.validate()?;
    let v: VertexId = vertex.parse()?;
    let ones;
    let w = match &loaded.weight {
        Some(w) => w,
        None => {
            ones = WeightSpec::ones(spec.graph());
            &ones
        }
    };
    let (name, value) = match quantity {
        Quantity::H => ("h", h(spec, v, p)?),
        Quantity::F => ("F", f_factor(spec, w, v, p)?),
        Quantity::Wgram => ("wgram", wgram(spec, w, v, p)?),
    };
    let output = match format {
        Format::Text => format!("{value}\n"),
        Format::Structured => {
            let doc = serde_json::json!({
                "quantity": name,
                "vertex": v.to_string(),
                "p": p,
                "value": value.to_string(),
            });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
    };
    Ok(Outcome::ok(output))
}

fn run_oracle(
    path: &Path,
    k: Option<usize>,
    m: Option<usize>,
    depth: Option<usize>,
    weighted: bool,
    format: Format,
) -> Result<Outcome> {
    let loaded = load(path)?;
    let spec = &loaded.measure;
    spec.validate()?;
    let q = query(&loaded, k, m)?;
    let w = weight_for(&loaded, weighted)?;
    let depth = depth.unwrap_or_else(|| oracle_depth(spec, w, q));
    let window = Truncation::new(spec.graph(), depth);
    let table = defect_quadratic_form(spec, w, q, &window)?;
    let mut rows = Vec::new();
    let mut agrees = true;
    for (v, matrix) in &table {
        let closed = match w {
            Some(w) => weighted_vertex_defect(spec, w, q, *v)?,
            None => vertex_defect(spec, q, *v)?,
        };
        agrees &= closed == *matrix;
        rows.push((*v, matrix.clone(), closed));
    }
    let window_verdict = table.values().all(|d| d.is_zero());
    let output = match format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "window depth: {depth}");
            let _ = writeln!(out, "{:<12} {:>16} {:>16}", "vertex", "matrix", "closed form");
            for (v, matrix, closed) in &rows {
                let _ = writeln!(out, "{:<12} {:>16} {:>16}", v.to_string(), matrix.to_string(), closed.to_string());
            }
            let _ = writeln!(out, "all defects zero on window: {window_verdict}");
            let _ = writeln!(out, "agreement: {agrees}");
            out
        }
        Format::Structured => {
            let doc = serde_json::json!({
                "depth": depth,
                "k": q.k,
                "m": q.m,
                "weighted": w.is_some(),
                "defects": rows.iter().map(|(v, matrix, closed)| serde_json::json!({
                    "vertex": v.to_string(),
                    "matrix": matrix.to_string(),
                    "closed_form": closed.to_string(),
                })).collect::<Vec<_>>(),
                "window_verdict": window_verdict,
                "agreement": agrees,
            });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
    };
    Ok(Outcome { output, code: if agrees { 0 } else { 3 } })
}

fn run_example(id: &str, format: Format) -> Result<Outcome> {
    let ex = corpus::by_id(id).ok_or_else(|| Error::Parse(format!("unknown example {id:?}; expected e1, e2 or e3")))?;
    let w = if ex.weighted { ex.weight.as_ref() } else { None };
    let q = DefectQuery::new(ex.k, ex.m)?;
    let report = classify(&ex.measure, w, q, false)?;
    let file = SpecFile::from_spec(&ex.measure, ex.weight.as_ref(), Some(ex.k), Some(ex.m));
    let matches = report.verdict == ex.claimed_verdict;
    let output = match format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "example {}: {}", ex.id, ex.title);
            let _ = writeln!(out, "inputs:");
            for line in file.to_json().lines() {
                let _ = writeln!(out, "  {line}");
            }
            let _ = writeln!(out, "claimed: {} (verdict {})", ex.claim, ex.claimed_verdict);
            let _ = writeln!(out, "computed verdict: {}", report.verdict);
            let _ = writeln!(
                out,
                "claim check: {}",
                if matches { "computed verdict matches the claim" } else { "DISCREPANCY: computed verdict differs from the claim" }
            );
            if let Some(note) = ex.note {
                let _ = writeln!(out, "note: {note}");
            }
            let _ = writeln!(out, "report:");
            for line in report.to_text().lines() {
                let _ = writeln!(out, "  {line}");
            }
            out
        }
        Format::Structured => {
            let doc = serde_json::json!({
                "id": ex.id,
                "title": ex.title,
                "inputs": file,
                "claim": ex.claim,
                "claimed_verdict": ex.claimed_verdict,
                "computed_verdict": report.verdict,
                "matches_claim": matches,
                "note": ex.note,
                "report": report,
            });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
    };
    Ok(report_outcome(output, &report))
}

fn run_validate(path: &Path, format: Format) -> Result<Outcome> {
    let loaded = load(path)?;
    let report = loaded.measure.validate()?;
    if let Some(w) = &loaded.weight {
        w.check_compatible(&loaded.measure)?;
    }
    let attained = report.sup_vertex.map(|v| v.to_string());
    let output = match format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "valid: true");
            let _ = writeln!(out, "sup h_1 = ||C||^2 = {}", report.sup_h1);
            match &attained {
                Some(v) => {
                    let _ = writeln!(out, "attained at: {v}");
                }
                None => {
                    let _ = writeln!(out, "attained at: not attained (limit along a branch)");
                }
            }
            let _ = writeln!(out, "explicit scan horizon: {}", report.horizon);
            let _ = writeln!(out, "weighted: {}", loaded.weight.is_some());
            out
        }
        Format::Structured => {
            let doc = serde_json::json!({
                "valid": true,
                "sup_h1": report.sup_h1.to_string(),
                "attained_at": attained,
                "horizon": report.horizon,
                "weighted": loaded.weight.is_some(),
            });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
    };
    Ok(Outcome::ok(output))
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Classify { spec, k, m, weighted, strict, format } => run_classify(&spec, k, m, weighted, strict, format),
        Command::Compute { spec, vertex, p, quantity, format } => run_compute(&spec, &vertex, p, quantity, format),
        Command::Oracle { spec, k, m, depth, weighted, format } => run_oracle(&spec, k, m, depth, weighted, format),
        Command::Example { id, format } => run_example(&id, format),
        Command::Validate { spec, format } => run_validate(&spec, format),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            print!("{}", outcome.output);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

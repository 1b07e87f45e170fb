//! `haraforge`: validate, generate, diff and report hazard analyses.
//!
//! Exit codes: 0 success, 1 error findings (or any finding with
//! `--strict`), 2 usage, IO or parse failure.

use std::fmt;
use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use haraforge_core::corpus::{ITEM_FILE, ITEM_TEXT, REVISION_FILES};
use haraforge_core::determine_asil;
use haraforge_core::diff::{classify_refinement, diff};
use haraforge_core::dsl::{decode_utf8, parse_hara_file, parse_item_file, write_csv, Diagnostics};
use haraforge_core::generator::{coverage_report, enumerate_candidates, malfunction_template};
use haraforge_core::model::{
    Controllability, Exposure, HaraDocument, ItemDefinition, RevisionHistory, RiskClass, Severity, Triple,
};
use haraforge_core::report::{render_diff_markdown, render_diff_text, render_document_markdown};
use haraforge_core::validator::{explain_rule, validate, Finding, FindingSeverity};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "haraforge", version, about = "Hazard analysis and risk assessment workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a HARA document against the rule catalog R1-R10.
    Validate {
        item: PathBuf,
        hara: PathBuf,
        /// Directory of earlier revisions (`*.hara`). A revision uses the
        /// `.item` file with the same stem when present, else ITEM.
        #[arg(long)]
        history: Option<PathBuf>,
        /// Fail on warnings as well.
        #[arg(long)]
        strict: bool,
        /// One JSON object per finding.
        #[arg(long)]
        machine: bool,
    },
    /// List candidate (function, guide word, mode) triples.
    Generate {
        item: PathBuf,
        /// Only triples the document neither analyses nor waives.
        #[arg(long, value_name = "HARA")]
        uncovered: Option<PathBuf>,
    },
    /// Determine the ASIL of a class triple, e.g. `asil S3 E4 C3`.
    Asil {
        #[arg(required = true, num_args = 1..=3)]
        classes: Vec<String>,
    },
    /// Compare two revisions and classify the refinement.
    Diff {
        base: PathBuf,
        next: PathBuf,
        item: PathBuf,
        /// Item definition of the next revision, if it differs.
        #[arg(long)]
        next_item: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = DiffFormat::Text)]
        format: DiffFormat,
    },
    /// Render the safety goal table and ASIL histogram, or the CSV table.
    Report {
        item: PathBuf,
        hara: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Md)]
        format: ReportFormat,
    },
    /// Describe a validation rule.
    Explain { rule: String },
    /// Write the bundled corpus files into a directory.
    Demo { dir: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Md,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiffFormat {
    Text,
    Md,
}

enum Failure {
    Usage(String),
    Io(PathBuf, io::Error),
    Parse(Diagnostics),
    Input(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "error: {m}"),
            Failure::Io(path, e) => write!(f, "error: {}: {e}", path.display()),
            Failure::Parse(d) => write!(f, "{d}"),
            Failure::Input(m) => write!(f, "error: {m}"),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let result = match cli.command {
        Command::Validate { item, hara, history, strict, machine } => {
            cmd_validate(&mut out, &item, &hara, history.as_deref(), strict, machine)
        }
        Command::Generate { item, uncovered } => cmd_generate(&mut out, &item, uncovered.as_deref()),
        Command::Asil { classes } => cmd_asil(&mut out, &classes),
        Command::Diff { base, next, item, next_item, format } => {
            cmd_diff(&mut out, &base, &next, &item, next_item.as_deref(), format)
        }
        Command::Report { item, hara, format } => cmd_report(&mut out, &item, &hara, format),
        Command::Explain { rule } => match explain_rule(&rule) {
            Ok(text) => write_out(&mut out, &format!("{text}\n")),
            Err(e) => Err(Failure::Usage(e.to_string())),
        },
        Command::Demo { dir } => cmd_demo(&mut out, &dir),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("{failure}");
            ExitCode::from(2)
        }
    }
}

fn write_out(out: &mut impl Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes()).map_err(|e| Failure::Io(PathBuf::from("<stdout>"), e))?;
    Ok(ExitCode::SUCCESS)
}

fn read(path: &Path) -> Result<String, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    let name = path.display().to_string();
    decode_utf8(&name, &bytes).map(str::to_string).map_err(Failure::Parse)
}

fn load_item(path: &Path) -> Result<Arc<ItemDefinition>, Failure> {
    let text = read(path)?;
    parse_item_file(&path.display().to_string(), &text).map(Arc::new).map_err(Failure::Parse)
}

fn load_hara(path: &Path, item: Arc<ItemDefinition>) -> Result<HaraDocument, Failure> {
    let text = read(path)?;
    parse_hara_file(&path.display().to_string(), &text, item).map_err(Failure::Parse)
}

/// Earlier revisions from `dir` plus `doc`, ordered by revision number.
fn load_history(dir: &Path, item_path: &Path, doc: &HaraDocument) -> Result<RevisionHistory, Failure> {
    let listing = fs::read_dir(dir).map_err(|e| Failure::Io(dir.to_path_buf(), e))?;
    let mut paths = Vec::new();
    for entry in listing {
        let path = entry.map_err(|e| Failure::Io(dir.to_path_buf(), e))?.path();
        if path.extension().is_some_and(|x| x == "hara") {
            paths.push(path);
        }
    }
    paths.sort();

    let mut revisions: Vec<HaraDocument> = Vec::new();
    for path in paths {
        let sibling = path.with_extension("item");
        let item = load_item(if sibling.is_file() { &sibling } else { item_path })?;
        let rev = load_hara(&path, item)?;
        if let Some(other) = revisions.iter().find(|r| r.revision == rev.revision) {
            if *other != rev {
                return Err(Failure::Input(format!(
                    "history holds two different documents for revision {}",
                    rev.revision
                )));
            }
            continue;
        }
        revisions.push(rev);
    }
    match revisions.iter().find(|r| r.revision == doc.revision) {
        Some(r) if r != doc => {
            return Err(Failure::Input(format!(
                "revision {} in the history differs from the validated document",
                doc.revision
            )))
        }
        Some(_) => {}
        None => revisions.push(doc.clone()),
    }
    revisions.sort_by_key(|r| r.revision);
    RevisionHistory::new(revisions).map_err(|e| Failure::Input(e.to_string()))
}

#[derive(Serialize)]
struct MachineFinding<'a> {
    rule: &'a str,
    location: String,
    severity: String,
    message: &'a str,
}

fn colored() -> bool {
    std::env::var_os("NO_COLOR").is_none() && io::stdout().is_terminal()
}

fn cmd_validate(
    out: &mut impl Write,
    item_path: &Path,
    hara_path: &Path,
    history_dir: Option<&Path>,
    strict: bool,
    machine: bool,
) -> Outcome {
    let item = load_item(item_path)?;
    let doc = load_hara(hara_path, item)?;
    let history = history_dir.map(|dir| load_history(dir, item_path, &doc)).transpose()?;
    let findings = validate(&doc, history.as_ref()).map_err(|e| Failure::Input(e.to_string()))?;

    let color = !machine && colored();
    let mut text = String::new();
    for f in &findings {
        if machine {
            let record = MachineFinding {
                rule: f.rule.code(),
                location: f.location.to_string(),
                severity: f.severity.to_string(),
                message: &f.message,
            };
            text.push_str(&serde_json::to_string(&record).expect("plain strings serialize"));
            text.push('\n');
        } else if color {
            let code = if f.severity == FindingSeverity::Error { 31 } else { 33 };
            text.push_str(&format!("\x1b[{code}m{}\x1b[0m\t{}\t{}\n", f.rule, f.location, f.message));
        } else {
            text.push_str(&format!("{f}\n"));
        }
    }
    write_out(out, &text)?;
    Ok(exit_for(&findings, strict))
}

fn exit_for(findings: &[Finding], strict: bool) -> ExitCode {
    let failing = findings.iter().any(|f| strict || f.severity == FindingSeverity::Error);
    if failing {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_generate(out: &mut impl Write, item_path: &Path, uncovered: Option<&Path>) -> Outcome {
    let item = load_item(item_path)?;
    let triples: Vec<Triple> = match uncovered {
        Some(path) => coverage_report(&load_hara(path, item.clone())?).into_iter().map(|f| f.triple).collect(),
        None => enumerate_candidates(&item).map_err(|e| Failure::Input(e.to_string()))?,
    };
    let mut text = String::new();
    for t in &triples {
        let function = item.function(&t.function).expect("enumerated from the item");
        let gw = item.guide_word(&t.guide_word).expect("enumerated from the item");
        text.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            t.function,
            t.guide_word,
            t.mode,
            malfunction_template(gw, &function.description)
        ));
    }
    write_out(out, &text)
}

fn cmd_asil(out: &mut impl Write, args: &[String]) -> Outcome {
    let words: Vec<&str> = args.iter().flat_map(|a| a.split_whitespace()).collect();
    let [s, e, c] = words[..] else {
        return Err(Failure::Usage(format!("expected three classes like `S3 E4 C3`, got {}", words.len())));
    };
    let usage = |e: haraforge_core::ModelError| Failure::Usage(e.to_string());
    let level = determine_asil(
        Severity::parse_code(s).map_err(usage)?,
        Exposure::parse_code(e).map_err(usage)?,
        Controllability::parse_code(c).map_err(usage)?,
    );
    write_out(out, &format!("{}\n", level.label()))
}

fn cmd_diff(
    out: &mut impl Write,
    base_path: &Path,
    next_path: &Path,
    item_path: &Path,
    next_item: Option<&Path>,
    format: DiffFormat,
) -> Outcome {
    let item = load_item(item_path)?;
    let next_item = match next_item {
        Some(p) => load_item(p)?,
        None => item.clone(),
    };
    let base = load_hara(base_path, item)?;
    let next = load_hara(next_path, next_item)?;
    let report = diff(&base, &next);
    let class = classify_refinement(&report);
    let text = match format {
        DiffFormat::Text => render_diff_text(&report, class),
        DiffFormat::Md => render_diff_markdown(&report, class),
    };
    write_out(out, &text)
}

fn cmd_report(out: &mut impl Write, item_path: &Path, hara_path: &Path, format: ReportFormat) -> Outcome {
    let doc = load_hara(hara_path, load_item(item_path)?)?;
    let text = match format {
        ReportFormat::Md => render_document_markdown(&doc),
        ReportFormat::Csv => write_csv(&doc),
    };
    write_out(out, &text)
}

fn cmd_demo(out: &mut impl Write, dir: &Path) -> Outcome {
    fs::create_dir_all(dir).map_err(|e| Failure::Io(dir.to_path_buf(), e))?;
    let mut listing = String::new();
    for (name, text) in std::iter::once((ITEM_FILE, ITEM_TEXT)).chain(REVISION_FILES) {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|e| Failure::Io(path.clone(), e))?;
        listing.push_str(&format!("{}\n", path.display()));
    }
    write_out(out, &listing)
}

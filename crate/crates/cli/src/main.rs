//! `bcc` — primitivity checks and Baum-Connes certification from the
//! command line.
//!
//! Exit codes: 0 established/primitive, 10 not established, 11 abstained
//! (weight cap exceeded), 2 input error. Reports go to stdout, diagnostics
//! to stderr.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use bcc_core::certify::{
    certify, check_one_relator, CertOptions, CertReport, GroupDescriptor, PrimitivityReason,
    PrimitivityVerdict, Verdict, DEFAULT_WEIGHT_CAP,
};
use bcc_core::lie::lyndon_words;
use bcc_core::linkdiag::{LinkVerdict, LinkingDiagram};
use bcc_core::words::Presentation;

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 2;
const EXIT_NOT_ESTABLISHED: u8 = 10;
const EXIT_ABSTAINED: u8 = 11;

const WEIGHT_CAP_ENV: &str = "BCC_WEIGHT_CAP";

#[derive(Parser)]
#[command(name = "bcc", version, about = "Primitivity and Baum-Connes certification checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide primitivity of a one-relator presentation.
    PrimitiveRelator(RelatorArgs),
    /// Decide primitivity of a linking diagram.
    PrimitiveLink(LinkArgs),
    /// Run a batch of certification jobs from a job file.
    Certify(CertifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Args)]
struct RelatorArgs {
    /// Presentation text, e.g. "< x, y | [x,y] >"; read from stdin if absent.
    #[arg(long)]
    presentation: Option<String>,
    /// Maximum lower-central-series degree to probe.
    #[arg(long)]
    weight_cap: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
}

#[derive(Args)]
struct LinkArgs {
    /// Linking matrix as inline JSON, e.g. "[[0,2],[2,0]]".
    #[arg(long)]
    matrix: Option<String>,
    /// File containing the linking matrix as JSON.
    #[arg(long)]
    file: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
}

#[derive(Args)]
struct CertifyArgs {
    /// Job file (JSON); read from stdin if absent.
    #[arg(long)]
    file: Option<String>,
    /// Maximum lower-central-series degree to probe, unless a job overrides it.
    #[arg(long)]
    weight_cap: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
}

#[derive(Deserialize)]
struct JobFile {
    format_version: u32,
    jobs: Vec<Job>,
}

#[derive(Deserialize)]
struct Job {
    job_id: String,
    descriptor: GroupDescriptor,
    #[serde(default)]
    options: JobOptions,
}

#[derive(Default, Deserialize)]
struct JobOptions {
    #[serde(default)]
    weight_cap: Option<usize>,
    #[serde(default)]
    output: Option<String>,
    /// Enables recognition of the iterated semidirect shape with a
    /// free-product innermost quotient.
    #[serde(default)]
    iterated: bool,
}

#[derive(Serialize)]
struct JobReport<'a> {
    job_id: &'a str,
    #[serde(flatten)]
    report: CertReport,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::PrimitiveRelator(args) => cmd_primitive_relator(args),
        Command::PrimitiveLink(args) => cmd_primitive_link(args),
        Command::Certify(args) => cmd_certify(args),
    };
    ExitCode::from(code)
}

fn input_error(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_INPUT
}

fn read_stdin() -> Result<String, std::io::Error> {
    let mut buf = String::new();
    std::io::stdin().read_to_string(&mut buf)?;
    Ok(buf)
}

/// Flag beats the environment; the built-in default comes last.
fn resolve_weight_cap(flag: Option<usize>) -> Result<usize, String> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(WEIGHT_CAP_ENV) {
        Ok(raw) => raw
            .parse::<usize>()
            .map_err(|_| format!("invalid {WEIGHT_CAP_ENV} value: {raw:?}")),
        Err(_) => Ok(DEFAULT_WEIGHT_CAP),
    }
}

fn cmd_primitive_relator(args: RelatorArgs) -> u8 {
    let cap = match resolve_weight_cap(args.weight_cap) {
        Ok(cap) => cap,
        Err(msg) => return input_error(msg),
    };
    let text = match args.presentation {
        Some(text) => text,
        None => match read_stdin() {
            Ok(text) => text,
            Err(err) => return input_error(format!("cannot read stdin: {err}")),
        },
    };
    let presentation = match Presentation::parse(text.trim()) {
        Ok(p) => p,
        Err(err) => return input_error(err),
    };
    let verdict = check_one_relator(&presentation, cap);
    match args.output {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string(&verdict).expect("report serializes"));
        }
        OutputFormat::Text => print_relator_text(&presentation, &verdict),
    }
    match verdict.reason {
        PrimitivityReason::WeightCapExceeded => EXIT_ABSTAINED,
        _ if verdict.primitive => EXIT_OK,
        _ => EXIT_NOT_ESTABLISHED,
    }
}

fn print_relator_text(presentation: &Presentation, v: &PrimitivityVerdict) {
    println!("presentation: {presentation}");
    match v.reason {
        PrimitivityReason::WeightCapExceeded => {
            println!("verdict: abstained (weight cap exceeded)");
            return;
        }
        _ => println!("verdict: {}", if v.primitive { "primitive" } else { "not primitive" }),
    }
    if let Some(weight) = v.weight {
        println!("weight: {weight}");
        if let Some(coords) = &v.coords {
            let basis = lyndon_words(presentation.rank(), weight);
            let rendered: Vec<String> = basis
                .iter()
                .zip(coords)
                .filter(|(_, c)| !c.is_zero())
                .map(|(word, c)| {
                    let monomial: Vec<String> = word
                        .iter()
                        .map(|g| presentation.names()[g - 1].clone())
                        .collect();
                    format!("{}:{c}", monomial.join(""))
                })
                .collect();
            println!("coordinates: {}", rendered.join(" "));
        }
        if let Some(gcd) = &v.coords_gcd {
            println!("gcd: {gcd}");
        }
    }
    if let Some(note) = &v.note {
        println!("note: {note}");
    }
}

fn cmd_primitive_link(args: LinkArgs) -> u8 {
    let raw = match (args.matrix, args.file) {
        (Some(_), Some(_)) => return input_error("--matrix and --file are mutually exclusive"),
        (Some(inline), None) => inline,
        (None, Some(path)) => match fs::read_to_string(&path) {
            Ok(text) => text,
            Err(err) => return input_error(format!("cannot read {path}: {err}")),
        },
        (None, None) => match read_stdin() {
            Ok(text) => text,
            Err(err) => return input_error(format!("cannot read stdin: {err}")),
        },
    };
    let diagram: LinkingDiagram = match serde_json::from_str(&raw) {
        Ok(d) => d,
        Err(err) => return input_error(format!("invalid linking matrix: {err}")),
    };
    let verdict = diagram.is_primitive();
    match args.output {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string(&verdict).expect("report serializes"));
        }
        OutputFormat::Text => print_link_text(&verdict),
    }
    if verdict.primitive {
        EXIT_OK
    } else {
        EXIT_NOT_ESTABLISHED
    }
}

fn print_link_text(v: &LinkVerdict) {
    if v.primitive {
        println!("verdict: primitive");
        for t in &v.trees {
            let edges: Vec<String> = t
                .edges
                .iter()
                .map(|(i, j)| format!("{i}-{j}"))
                .collect();
            println!("tree[{}]: {}", t.prime, edges.join(" "));
        }
    } else {
        println!("verdict: not primitive");
        if let Some(p) = &v.failing_prime {
            println!("failing prime: {p}");
        }
        let side: Vec<String> = v.disconnected.iter().map(|v| v.to_string()).collect();
        println!("disconnected component: {{{}}}", side.join(", "));
    }
}

fn cmd_certify(args: CertifyArgs) -> u8 {
    let default_cap = match resolve_weight_cap(args.weight_cap) {
        Ok(cap) => cap,
        Err(msg) => return input_error(msg),
    };
    let raw = match args.file {
        Some(path) => match fs::read_to_string(&path) {
            Ok(text) => text,
            Err(err) => return input_error(format!("cannot read {path}: {err}")),
        },
        None => match read_stdin() {
            Ok(text) => text,
            Err(err) => return input_error(format!("cannot read stdin: {err}")),
        },
    };
    let job_file: JobFile = match serde_json::from_str(&raw) {
        Ok(f) => f,
        Err(err) => return input_error(format!("invalid job file: {err}")),
    };
    if job_file.format_version != 1 {
        return input_error(format!(
            "unsupported format_version {}",
            job_file.format_version
        ));
    }
    let mut seen = std::collections::HashSet::new();
    for job in &job_file.jobs {
        if !seen.insert(&job.job_id) {
            return input_error(format!("duplicate job_id {:?}", job.job_id));
        }
        if let Err(err) = job.descriptor.validate() {
            return input_error(format!("job {:?}: {err}", job.job_id));
        }
        if let Some(format) = &job.options.output {
            if format != "json" && format != "text" {
                return input_error(format!(
                    "job {:?}: unknown output format {format:?}",
                    job.job_id
                ));
            }
        }
    }

    let mut all_established = true;
    for job in &job_file.jobs {
        let opts = CertOptions {
            weight_cap: job.options.weight_cap.unwrap_or(default_cap),
        };
        let report = if job.options.iterated {
            bcc_core::certify::certify_iterated(&job.descriptor, &opts)
        } else {
            certify(&job.descriptor, &opts)
        };
        if report.verdict == Verdict::NotEstablished {
            all_established = false;
        }
        let format = match job.options.output.as_deref() {
            Some("json") => OutputFormat::Json,
            Some("text") => OutputFormat::Text,
            _ => args.output,
        };
        match format {
            OutputFormat::Json => {
                let line = JobReport { job_id: &job.job_id, report };
                println!("{}", serde_json::to_string(&line).expect("report serializes"));
            }
            OutputFormat::Text => print_cert_text(&job.job_id, &report),
        }
    }
    if all_established {
        EXIT_OK
    } else {
        EXIT_NOT_ESTABLISHED
    }
}

fn print_cert_text(job_id: &str, report: &CertReport) {
    let verdict = match report.verdict {
        Verdict::BcHolds => "BC_HOLDS",
        Verdict::InFPlus => "IN_F_PLUS",
        Verdict::NotEstablished => "NOT_ESTABLISHED",
    };
    println!("job {job_id}: {verdict}");
    for e in &report.chain {
        let marker = if e.asserted { " [ASSERTED]" } else { "" };
        if e.anchor.is_empty() {
            println!("  {}{marker}: {}", e.rule, e.justification);
        } else {
            println!("  {}{marker}: {} ({})", e.rule, e.justification, e.anchor);
        }
    }
}

//! Command-line front end: compute linking matrices, twisted cohomology
//! dimensions, jump-locus scans, and deletion verifications for braid
//! closures of plane curve singularity links.
//!
//! Exit status: 0 on success (and on verification pass), 1 on any
//! validation or input error, 2 when a verification ran to completion and
//! found a mismatch.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use jumploci::branches::BranchInput;
use jumploci::corpus;
use jumploci::fox::twisted_dims;
use jumploci::variety::{scan, DEFAULT_BUDGET};
use jumploci::{
    linking_matrix_from_branches, verify_deletion, BraidInput, BraidWord, Branch, DeletionScenario,
    LinkingMatrix, TorsionCharacter,
};

const BUDGET_ENV: &str = "JUMPLOCI_BUDGET";

#[derive(Parser)]
#[command(
    name = "jumploci",
    version,
    about = "Twisted cohomology jump loci of plane curve singularity links",
    after_help = "Exit status: 0 success or verification pass, 1 validation error, \
                  2 verification mismatch."
)]
struct Cli {
    /// Worker threads for scans and verifications (default: all cores).
    #[arg(long, global = true, value_name = "J")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List built-in examples, or print one as an input object.
    Corpus {
        /// Name of the example to print; omit to list all.
        name: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print the pairwise linking matrix of the input.
    ///
    /// When the input carries both a braid and branch data (or an explicit
    /// matrix), all routes are computed and compared; disagreement is a
    /// verification failure.
    Linking {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Twisted cohomology dimensions h0, h1, h2 at one torsion character.
    Dims {
        #[command(flatten)]
        input: InputArgs,
        /// Character exponents, one rational in [0,1) per link component,
        /// e.g. "0,1/3".
        #[arg(long = "char", value_name = "EXPONENTS")]
        character: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Scan the grid of characters with coordinate order dividing N and
    /// report the jump locus of the selected degree and multiplicity.
    Scan {
        #[command(flatten)]
        input: InputArgs,
        /// Grid order bound N.
        #[arg(long, value_name = "N")]
        order: u64,
        /// Cohomological degree of the reported locus.
        #[arg(long, value_name = "I", default_value_t = 1)]
        degree: u8,
        /// Minimum dimension of the reported locus.
        #[arg(long, value_name = "K", default_value_t = 1)]
        mult: usize,
        /// Maximum number of grid evaluations (overrides JUMPLOCI_BUDGET).
        #[arg(long, value_name = "M")]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Verify the deletion predictions on every slice character of
    /// coordinate order dividing N, comparing against independent
    /// computation on the deleted braid.
    VerifyDeletion {
        #[command(flatten)]
        input: InputArgs,
        /// Grid order bound N.
        #[arg(long, value_name = "N")]
        order: u64,
        /// Component label to delete; repeat to delete several.
        #[arg(long = "delete", value_name = "C", required = true)]
        delete: Vec<usize>,
        /// Maximum number of grid evaluations (overrides JUMPLOCI_BUDGET).
        #[arg(long, value_name = "M")]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

/// Exactly one input source per invocation.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Built-in example name (see `jumploci corpus`).
    #[arg(long, value_name = "NAME")]
    corpus: Option<String>,
    /// JSON file with optional `braid`, `branches`, `linking` fields.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// Inline braid word "strands:letters", e.g. "2:1,1" or "3:1,2,-1".
    #[arg(long, value_name = "WORD")]
    braid: Option<String>,
}

/// On-disk input object; also what `corpus NAME --format json` emits.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InputFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    braid: Option<BraidInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    branches: Option<Vec<BranchInput>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    linking: Option<Vec<Vec<i64>>>,
}

/// Resolved input: whichever of the three ingredients the source carried.
struct JobInput {
    label: String,
    braid: Option<BraidWord>,
    branches: Option<Vec<Branch>>,
    linking: Option<LinkingMatrix>,
}

impl JobInput {
    fn resolve(args: &InputArgs) -> Result<JobInput> {
        if let Some(name) = &args.corpus {
            let entry = corpus::entry(name)?;
            return Ok(JobInput {
                label: entry.name().to_string(),
                braid: Some(entry.braid().clone()),
                branches: Some(entry.branches().to_vec()),
                linking: Some(entry.expected_linking()),
            });
        }
        if let Some(path) = &args.file {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let parsed: InputFile = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            let braid = parsed
                .braid
                .map(BraidWord::try_from)
                .transpose()
                .context("field `braid`")?;
            let branches = parsed
                .branches
                .map(|list| {
                    list.into_iter()
                        .enumerate()
                        .map(|(i, b)| {
                            Branch::try_from(b).with_context(|| format!("field `branches[{}]`", i))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .transpose()?;
            let linking = parsed
                .linking
                .map(LinkingMatrix::new)
                .transpose()
                .context("field `linking`")?;
            if braid.is_none() && branches.is_none() && linking.is_none() {
                bail!(
                    "{}: input object has none of `braid`, `branches`, `linking`",
                    path.display()
                );
            }
            let label = parsed.name.unwrap_or_else(|| path.display().to_string());
            return Ok(JobInput {
                label,
                braid,
                branches,
                linking,
            });
        }
        let word = args.braid.as_deref().expect("clap enforces one source");
        Ok(JobInput {
            label: word.to_string(),
            braid: Some(parse_inline_braid(word)?),
            branches: None,
            linking: None,
        })
    }

    fn require_braid(&self) -> Result<&BraidWord> {
        self.braid
            .as_ref()
            .ok_or_else(|| anyhow!("this command needs a braid in the input"))
    }
}

fn parse_inline_braid(word: &str) -> Result<BraidWord> {
    let (strands, letters) = word.split_once(':').ok_or_else(|| {
        anyhow!(
            "inline braid must look like \"strands:letters\", got {:?}",
            word
        )
    })?;
    let strands: usize = strands
        .trim()
        .parse()
        .with_context(|| format!("strand count {:?}", strands))?;
    let letters = letters
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<i32>()
                .with_context(|| format!("braid letter {:?}", s))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BraidWord::new(strands, letters)?)
}

fn resolve_budget(flag: Option<u64>) -> Result<u64> {
    if let Some(m) = flag {
        return Ok(m);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(value) => value
            .trim()
            .parse::<u64>()
            .with_context(|| format!("{}={:?} is not a budget", BUDGET_ENV, value)),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: setting --jobs {}: {}", jobs, err);
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {:#}", err);
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Corpus { name, format } => run_corpus(name, format),
        Command::Linking { input, format } => run_linking(&JobInput::resolve(&input)?, format),
        Command::Dims {
            input,
            character,
            format,
        } => run_dims(&JobInput::resolve(&input)?, &character, format),
        Command::Scan {
            input,
            order,
            degree,
            mult,
            budget,
            format,
        } => run_scan(
            &JobInput::resolve(&input)?,
            order,
            degree,
            mult,
            resolve_budget(budget)?,
            format,
        ),
        Command::VerifyDeletion {
            input,
            order,
            delete,
            budget,
            format,
        } => run_verify(
            &JobInput::resolve(&input)?,
            order,
            delete,
            resolve_budget(budget)?,
            format,
        ),
    }
}

fn corpus_object(entry: &corpus::CorpusEntry) -> InputFile {
    InputFile {
        name: Some(entry.name().to_string()),
        description: Some(entry.description().to_string()),
        braid: Some(BraidInput {
            strands: entry.braid().strands(),
            word: entry.braid().letters().to_vec(),
        }),
        branches: Some(entry.branches().iter().map(BranchInput::from).collect()),
        linking: Some(entry.expected_linking().entries().to_vec()),
    }
}

fn run_corpus(name: Option<String>, format: Format) -> Result<ExitCode> {
    match name {
        Some(name) => {
            let entry = corpus::entry(&name)?;
            let object = corpus_object(&entry);
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&object)?),
                Format::Table => {
                    println!("name: {}", entry.name());
                    println!("description: {}", entry.description());
                    println!(
                        "braid: {}:{}",
                        entry.braid().strands(),
                        entry
                            .braid()
                            .letters()
                            .iter()
                            .map(|l| l.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    );
                    println!("components: {}", entry.braid().components().count());
                    println!("branches: {}", entry.branches().len());
                    println!("linking:");
                    print!("{}", linking_table(&entry.expected_linking()));
                }
            }
        }
        None => match format {
            Format::Json => {
                let list: Vec<InputFile> = corpus::all().iter().map(corpus_object).collect();
                println!("{}", serde_json::to_string_pretty(&list)?);
            }
            Format::Table => {
                println!("name,components,description");
                for entry in corpus::all() {
                    println!(
                        "{},{},{}",
                        entry.name(),
                        entry.braid().components().count(),
                        entry.description()
                    );
                }
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn linking_table(m: &LinkingMatrix) -> String {
    let mut out = String::new();
    for row in m.entries() {
        let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct LinkingReport {
    input: String,
    entries: Vec<Vec<i64>>,
}

fn run_linking(input: &JobInput, format: Format) -> Result<ExitCode> {
    let mut routes: Vec<(&str, LinkingMatrix)> = Vec::new();
    if let Some(braid) = &input.braid {
        routes.push(("braid crossings", braid.linking_matrix()?));
    }
    if let Some(branches) = &input.branches {
        routes.push((
            "branch intersections",
            linking_matrix_from_branches(branches)?,
        ));
    }
    if let Some(explicit) = &input.linking {
        routes.push(("explicit matrix", explicit.clone()));
    }
    let (first_route, matrix) = routes
        .first()
        .ok_or_else(|| anyhow!("input carries no braid, branches, or linking matrix"))?;
    for (route, other) in &routes[1..] {
        if other != matrix {
            eprintln!(
                "linking mismatch: {} gives\n{}but {} gives\n{}",
                first_route,
                linking_table(matrix),
                route,
                linking_table(other)
            );
            return Ok(ExitCode::from(2));
        }
    }
    match format {
        Format::Json => {
            let report = LinkingReport {
                input: input.label.clone(),
                entries: matrix.entries().to_vec(),
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Format::Table => print!("{}", linking_table(matrix)),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize, Deserialize)]
struct DimsReport {
    input: String,
    t: TorsionCharacter,
    h0: usize,
    h1: usize,
    h2: usize,
}

fn run_dims(input: &JobInput, character: &str, format: Format) -> Result<ExitCode> {
    let braid = input.require_braid()?;
    let t =
        TorsionCharacter::from_str(character).with_context(|| format!("--char {:?}", character))?;
    let presentation = braid.artin_presentation()?;
    let dims = twisted_dims(&presentation, &t)?;
    match format {
        Format::Json => {
            let report = DimsReport {
                input: input.label.clone(),
                t,
                h0: dims.h0,
                h1: dims.h1,
                h2: dims.h2,
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Format::Table => {
            println!("h0,h1,h2");
            println!("{},{},{}", dims.h0, dims.h1, dims.h2);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_scan(
    input: &JobInput,
    order: u64,
    degree: u8,
    mult: usize,
    budget: u64,
    format: Format,
) -> Result<ExitCode> {
    let braid = input.require_braid()?;
    let presentation = braid.artin_presentation()?;
    let report = scan(
        &presentation,
        &input.label,
        order,
        &[(degree, mult)],
        budget,
    )?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Table => print!("{}", report.to_table()),
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify(
    input: &JobInput,
    order: u64,
    delete: Vec<usize>,
    budget: u64,
    format: Format,
) -> Result<ExitCode> {
    let braid = input.require_braid()?.clone();
    let scenario = match &input.linking {
        Some(linking) => DeletionScenario::with_linking(braid, delete, linking.clone())?,
        None => DeletionScenario::new(braid, delete)?,
    };
    let report = verify_deletion(&scenario, &input.label, order, budget)?;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Table => {
            print!("{}", report.to_table());
            println!(
                "{}: {}",
                report.scenario,
                if report.pass { "pass" } else { "FAIL" }
            );
        }
    }
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

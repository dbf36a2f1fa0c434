//! `ucca`: evaluate, validate, normalize, summarize and convert UCCA
//! passage XML files.
//!
//! Exit codes: 0 success, 1 usage error, 2 unreadable or ill-formed input
//! (the file is named on stderr), 3 token mismatch between paired passages,
//! 4 guideline violations under `validate --strict`.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ucca_core::io::{parse_xml_str, render_rows};
use ucca_core::report::{ScoreReport, Sections};
use ucca_core::{
    corpus_stats, export_bilexical, export_text, normalize, score_passage_with, serialize_xml,
    validate, EvalError, EvalScores, Passage, RuleSet, ScoreOptions,
};

#[derive(Parser)]
#[command(name = "ucca", version, about = "Tools for UCCA passage XML files")]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Default output format.
    #[arg(
        long,
        value_enum,
        env = "UCCA_OUTPUT",
        default_value = "table",
        global = true
    )]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
}

impl OutputArgs {
    fn json(&self) -> bool {
        self.json || self.format == Format::Json
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Score system passages against gold passages (labeled and unlabeled
    /// edge F1 over primary and remote edges).
    Evaluate {
        /// Gold passage file or directory.
        #[arg(long)]
        gold: PathBuf,
        /// System passage file or directory; paired with gold by file stem.
        #[arg(long)]
        system: PathBuf,
        /// Add per-category scores.
        #[arg(long)]
        fine_grained: bool,
        /// Report only unlabeled scores.
        #[arg(long)]
        unlabeled: bool,
        /// Leave Punctuation edges out of all counts.
        #[arg(long)]
        exclude_punct: bool,
        /// Score labels as written instead of mapping T to D and Q to E first.
        #[arg(long)]
        no_normalize: bool,
    },
    /// Check passages against annotation guideline rules.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Exit with status 4 when any violation is found.
        #[arg(long)]
        strict: bool,
        /// Comma-separated rule ids or names (default: all).
        #[arg(long, value_delimiter = ',')]
        rules: Vec<String>,
    },
    /// Rewrite legacy T and Q labels as D and E.
    Normalize {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Output directory; files keep their names.
        #[arg(long)]
        out: PathBuf,
    },
    /// Corpus structural statistics.
    Stats {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Export passages as plain text or bi-lexical dependencies.
    Convert {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum)]
        to: Target,
        /// Output directory, one file per passage; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Text,
    Bilexical,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Display) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }

    fn input(path: &Path, err: impl Display) -> Self {
        Failure {
            code: 2,
            message: format!("{}: {err}", path.display()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("ucca: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let json = cli.output.json();
    match cli.command {
        Command::Evaluate {
            gold,
            system,
            fine_grained,
            unlabeled,
            exclude_punct,
            no_normalize,
        } => {
            let sections = Sections {
                labeled: !unlabeled,
                unlabeled: true,
                categories: fine_grained,
            };
            let opts = ScoreOptions { exclude_punct };
            evaluate(&gold, &system, sections, opts, !no_normalize, json)
        }
        Command::Validate {
            paths,
            strict,
            rules,
        } => run_validate(&paths, &rules, strict, json),
        Command::Normalize { paths, out } => run_normalize(&paths, &out),
        Command::Stats { paths } => {
            let passages = read_all(&expand(&paths)?)?;
            let report = corpus_stats(passages.iter().map(|(_, p)| p));
            emit(&if json {
                report.to_json()
            } else {
                report.to_table()
            })
        }
        Command::Convert { paths, to, out } => run_convert(&paths, to, out.as_deref()),
    }
}

/// Files named directly, plus the `*.xml` files of named directories in
/// name order.
fn expand(paths: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(path)
                .map_err(|e| Failure::input(path, e))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "xml"))
                .collect();
            found.sort();
            files.extend(found);
        } else if path.is_file() {
            files.push(path.clone());
        } else {
            return Err(Failure::usage(format!(
                "{}: no such file or directory",
                path.display()
            )));
        }
    }
    Ok(files)
}

fn read_passage(path: &Path) -> Result<Passage, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(path, e))?;
    parse_xml_str(&text).map_err(|e| Failure::input(path, e))
}

fn read_all(files: &[PathBuf]) -> Result<Vec<(PathBuf, Passage)>, Failure> {
    files
        .iter()
        .map(|f| Ok((f.clone(), read_passage(f)?)))
        .collect()
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Gold and system files paired by stem. Two plain files pair with each
/// other whatever their names.
fn pair_files(gold: &Path, system: &Path) -> Result<Vec<(PathBuf, PathBuf)>, Failure> {
    if gold.is_file() && system.is_file() {
        return Ok(vec![(gold.to_path_buf(), system.to_path_buf())]);
    }
    let index = |root: &Path| -> Result<BTreeMap<String, PathBuf>, Failure> {
        let mut map = BTreeMap::new();
        for f in expand(&[root.to_path_buf()])? {
            if let Some(prev) = map.insert(stem(&f), f.clone()) {
                return Err(Failure::usage(format!(
                    "{} and {} share a file stem",
                    prev.display(),
                    f.display()
                )));
            }
        }
        Ok(map)
    };
    let golds = index(gold)?;
    let mut systems = index(system)?;
    let mut pairs = Vec::new();
    let mut missing = Vec::new();
    for (name, g) in golds {
        match systems.remove(&name) {
            Some(s) => pairs.push((g, s)),
            None => missing.push(name),
        }
    }
    let extra: Vec<String> = systems.into_keys().collect();
    if !missing.is_empty() || !extra.is_empty() {
        let mut msg = String::from("gold and system files do not pair up");
        if !missing.is_empty() {
            msg.push_str(&format!("; no system file for: {}", missing.join(", ")));
        }
        if !extra.is_empty() {
            msg.push_str(&format!("; no gold file for: {}", extra.join(", ")));
        }
        return Err(Failure::usage(msg));
    }
    if pairs.is_empty() {
        return Err(Failure::usage("no passages to evaluate"));
    }
    Ok(pairs)
}

fn evaluate(
    gold: &Path,
    system: &Path,
    sections: Sections,
    opts: ScoreOptions,
    normalized: bool,
    json: bool,
) -> Outcome {
    let prep = |p: Passage| if normalized { normalize(&p) } else { p };
    let mut loaded = Vec::new();
    for (g, s) in pair_files(gold, system)? {
        loaded.push((s.clone(), prep(read_passage(&s)?), prep(read_passage(&g)?)));
    }
    let mut total = EvalScores::default();
    for (path, output, gold) in &loaded {
        let scores = score_passage_with(output, gold, opts).map_err(|e| match e {
            EvalError::TokenMismatch { .. } => Failure {
                code: 3,
                message: format!("{}: {e}", path.display()),
            },
        })?;
        total.merge(&scores);
    }
    let report = ScoreReport::new(&total, sections);
    emit(&if json {
        report.to_json()
    } else {
        report.to_table()
    })
}

fn run_validate(paths: &[PathBuf], rules: &[String], strict: bool, json: bool) -> Outcome {
    let rules = if rules.is_empty() {
        RuleSet::default()
    } else {
        RuleSet::from_ids(rules).map_err(Failure::usage)?
    };
    let mut found = 0;
    let mut out = String::new();
    for (_, passage) in read_all(&expand(paths)?)? {
        let report = validate(&passage, &rules);
        found += report.violations.len();
        if json {
            out.push_str(&report.to_json_lines());
        } else {
            out.push_str(&report.to_string());
        }
    }
    emit(&out)?;
    if strict && found > 0 {
        return Err(Failure {
            code: 4,
            message: format!("{found} violation(s)"),
        });
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Outcome {
    fs::write(path, bytes).map_err(|e| Failure::input(path, e))
}

fn create_dir(dir: &Path) -> Outcome {
    fs::create_dir_all(dir).map_err(|e| Failure::input(dir, e))
}

fn run_normalize(paths: &[PathBuf], out: &Path) -> Outcome {
    let passages = read_all(&expand(paths)?)?;
    create_dir(out)?;
    for (path, passage) in passages {
        let name = path.file_name().expect("expanded paths name files");
        write_file(&out.join(name), &serialize_xml(&normalize(&passage)))?;
    }
    Ok(())
}

fn run_convert(paths: &[PathBuf], to: Target, out: Option<&Path>) -> Outcome {
    let passages = read_all(&expand(paths)?)?;
    let render = |p: &Passage| match to {
        Target::Text => format!("{}\n", export_text(p)),
        Target::Bilexical => render_rows(&export_bilexical(p)),
    };
    match out {
        Some(dir) => {
            create_dir(dir)?;
            let ext = match to {
                Target::Text => "txt",
                Target::Bilexical => "tsv",
            };
            for (path, passage) in &passages {
                let target = dir.join(format!("{}.{ext}", stem(path)));
                write_file(&target, render(passage).as_bytes())?;
            }
            Ok(())
        }
        None => {
            let sep = match to {
                Target::Text => "",
                Target::Bilexical => "\n",
            };
            let blocks: Vec<String> = passages.iter().map(|(_, p)| render(p)).collect();
            emit(&blocks.join(sep))
        }
    }
}

fn emit(text: &str) -> Outcome {
    let mut stdout = io::stdout().lock();
    let mut write = || -> io::Result<()> {
        stdout.write_all(text.as_bytes())?;
        if !text.is_empty() && !text.ends_with('\n') {
            stdout.write_all(b"\n")?;
        }
        stdout.flush()
    };
    match write() {
        Ok(()) => Ok(()),
        // A closed pipe (`ucca stats ... | head`) is not an error.
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(Failure::usage(format!("writing output: {e}"))),
    }
}

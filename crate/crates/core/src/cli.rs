//! Command-line front end. [`dispatch`] parses arguments, runs one command
//! and renders a [`RunReport`]; the binary only prints and exits.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::alpha;
use crate::constructor::Constructor;
use crate::error::{Error, Result};
use crate::fixtures::Fixtures;
use crate::morphism::{berstel_test, crochemore_test, TernaryMorphism};
use crate::search::{
    cross_check_appendix, search_seeds, SearchMode, SearchOptions, DEFAULT_SEARCH_CEILING,
};
use crate::squarefree::find_square;
use crate::stems::{factor_with_stem, sliding_window_square, stream_with_morphism, verify_muller};
use crate::thue_morse::make_x;
use crate::word::TernaryWord;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONEXISTENT: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    First,
    All,
}

#[derive(Debug, Parser)]
#[command(
    name = "ternstem",
    version,
    about = "Square-free ternary morphisms and stem words"
)]
pub struct Cli {
    /// Directory holding appendix.txt and muller.txt (default: $TERNSTEM_DATA, else bundled data)
    #[arg(long, global = true, value_name = "DIR")]
    pub data_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and certify the n-uniform square-free cyclic shift morphism
    Construct {
        #[arg(long)]
        n: usize,
    },
    /// Exhaustive search over seeds of length n
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::All)]
        mode: ModeArg,
        /// Stop after this many tree nodes
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value_t = 6)]
        split_depth: usize,
        /// Search all seeds instead of one per shift orbit
        #[arg(long)]
        no_symmetry: bool,
    },
    /// Stream a square-free word with an n-stem factorization
    Stream {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        length: usize,
        /// Write the JSON certificate here
        #[arg(long, value_name = "FILE")]
        certificate: Option<PathBuf>,
        /// Write the word here
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Certify a morphism given by seed, by images, or by length
    #[command(group(ArgGroup::new("subject").required(true).args(["n", "seed", "images"])))]
    VerifyMorphism {
        /// Constructed morphism for n, or the bundled one for n = 20, 21, 22
        #[arg(long)]
        n: Option<usize>,
        /// f(0) of a cyclic shift morphism
        #[arg(long)]
        seed: Option<String>,
        /// f(0),f(1),f(2)
        #[arg(long, value_delimiter = ',', num_args = 3)]
        images: Option<Vec<String>>,
    },
    /// Check that a word factors over a stem and is square-free
    VerifyStem {
        #[arg(long)]
        stem: String,
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
    /// Properties of the four α-words and the lemmas built on them
    CheckAlpha,
    /// Certify every appendix seed and rediscover small ones by search
    CheckAppendix {
        #[arg(long, default_value_t = DEFAULT_SEARCH_CEILING)]
        search_ceiling: usize,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// The bracketed Thue-Morse word r = 2102012·x·2102012 of length 4k-1
    MakeX {
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
}

/// One record per invocation.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub verdicts: Vec<Verdict>,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub exit_code: i32,
    pub timings_ms: BTreeMap<String, f64>,
    pub fixture_checksums: BTreeMap<String, String>,
    #[serde(skip)]
    text: Vec<String>,
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            verdicts: Vec::new(),
            details: Value::Null,
            error: None,
            exit_code: EXIT_OK,
            timings_ms: BTreeMap::new(),
            fixture_checksums: BTreeMap::new(),
            text: Vec::new(),
        }
    }

    fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
    }

    fn verdict(&mut self, name: &str, passed: bool) {
        self.verdicts.push(Verdict {
            name: name.to_string(),
            passed,
        });
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.verdicts.iter().all(|v| v.passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for (k, v) in &self.parameters {
            out += &format!("param {k}: {v}\n");
        }
        for line in &self.text {
            out += line;
            out.push('\n');
        }
        for v in &self.verdicts {
            out += &format!(
                "verdict {}: {}\n",
                v.name,
                if v.passed { "pass" } else { "FAIL" }
            );
        }
        if let Some(e) = &self.error {
            out += &format!("error: {e}\n");
        }
        for (k, v) in &self.fixture_checksums {
            out += &format!("sha256 {k}: {v}\n");
        }
        for (k, v) in &self.timings_ms {
            out += &format!("time {k}: {v:.3} ms\n");
        }
        out += &format!("exit: {}\n", self.exit_code);
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
        }
    }
}

/// Exit code for an error raised while running a command.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Nonexistent { .. } => EXIT_NONEXISTENT,
        Error::Verification(_)
        | Error::StreamRejected { .. }
        | Error::ConstructionFailed { .. } => EXIT_VERIFICATION,
        Error::Json(_) | Error::Record(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

/// Exit code and the text destined for stdout and stderr.
#[derive(Clone, Debug)]
pub struct Dispatch {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<RunReport>,
}

pub fn dispatch<I, T>(args: I) -> Dispatch
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Dispatch {
                code,
                stdout,
                stderr,
                report: None,
            };
        }
    };
    let report = run(&cli);
    Dispatch {
        code: report.exit_code,
        stdout: report.render(cli.format),
        stderr: report
            .error
            .as_ref()
            .map(|e| format!("error: {e}\n"))
            .unwrap_or_default(),
        report: Some(report),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Construct { .. } => "construct",
        Command::Search { .. } => "search",
        Command::Stream { .. } => "stream",
        Command::VerifyMorphism { .. } => "verify-morphism",
        Command::VerifyStem { .. } => "verify-stem",
        Command::CheckAlpha => "check-alpha",
        Command::CheckAppendix { .. } => "check-appendix",
        Command::MakeX { .. } => "make-x",
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> RunReport {
    let mut report = RunReport::new(command_name(&cli.command));
    let start = Instant::now();
    let result = Fixtures::resolve(cli.data_dir.as_deref()).and_then(|fixtures| {
        report.fixture_checksums = fixtures.checksums();
        execute(&cli.command, &fixtures, &mut report)
    });
    report
        .timings_ms
        .insert("total".into(), start.elapsed().as_secs_f64() * 1e3);
    report.exit_code = match result {
        Err(e) => {
            let code = exit_code_for(&e);
            report.error = Some(e.to_string());
            code
        }
        Ok(Some(code)) => code,
        Ok(None) if report.passed() => EXIT_OK,
        Ok(None) => EXIT_VERIFICATION,
    };
    report
}

fn timed<T>(report: &mut RunReport, key: &str, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    report
        .timings_ms
        .insert(key.into(), t.elapsed().as_secs_f64() * 1e3);
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn morphism_lines(report: &mut RunReport, m: &TernaryMorphism) {
    for (a, img) in m.images().iter().enumerate() {
        report.line(format!("f({a}) = {img}"));
    }
}

/// Runs one command, filling `report`. `Ok(Some(code))` overrides the exit
/// code derived from the verdicts.
fn execute(command: &Command, fixtures: &Fixtures, report: &mut RunReport) -> Result<Option<i32>> {
    match command {
        Command::Construct { n } => {
            report.param("n", n);
            let c = timed(report, "construct", || {
                Constructor::new(fixtures).construct(*n)
            })?;
            morphism_lines(report, &c.morphism);
            report.line(format!("recipe: {}", serde_json::to_string(&c.recipe)?));
            for l in c.certificate.to_string().lines() {
                report.line(format!("certificate {l}"));
            }
            report.verdict(c.certificate.method.as_str(), c.certificate.verdict);
            report.verdict("recipe-consistent", c.recipe.is_consistent());
            report.details = serde_json::to_value(&c)?;
            Ok(None)
        }
        Command::Search {
            n,
            mode,
            budget,
            jobs,
            split_depth,
            no_symmetry,
        } => {
            let mode = match mode {
                ModeArg::First => SearchMode::First,
                ModeArg::All => SearchMode::All,
            };
            report.param("n", n);
            report.param("mode", mode);
            report.param("budget", budget);
            report.param("split_depth", split_depth);
            report.param("symmetry", !no_symmetry);
            let options = SearchOptions {
                budget: *budget,
                jobs: *jobs,
                split_depth: *split_depth,
                symmetry: !no_symmetry,
            };
            let out = timed(report, "search", || search_seeds(*n, mode, &options));
            for s in &out.solutions {
                report.line(format!("solution {s}"));
            }
            report.line(format!("solutions: {}", out.solutions.len()));
            report.line(format!("nodes_explored: {}", out.nodes_explored));
            report.line(format!("symmetry_factor: {}", out.symmetry_factor));
            report.line(format!("exhaustive: {}", out.exhaustive));
            report.verdict("exhaustive", out.exhaustive);
            report.verdict("solutions-found", !out.solutions.is_empty());
            let nonexistent = out.proves_nonexistence();
            if nonexistent {
                report.line(format!(
                    "no {n}-uniform square-free cyclic shift morphism exists"
                ));
            }
            report.details = serde_json::to_value(&out)?;
            Ok(nonexistent.then_some(EXIT_NONEXISTENT))
        }
        Command::Stream {
            n,
            length,
            certificate,
            output,
        } => {
            report.param("n", n);
            report.param("length", length);
            let certified = Constructor::new(fixtures).construct(*n)?;
            let mut word = Vec::with_capacity(*length);
            let cert = timed(report, "stream", || {
                stream_with_morphism(certified, *length, |a| word.push(a.value()))
            })?;
            let word = TernaryWord::from_values(word)?;
            let window = 4 * n;
            let offline = timed(report, "sliding-window", || {
                sliding_window_square(word.as_slice(), window)
            });
            let f = &cert.factorization;
            report.line(format!("stem: {}", f.stem));
            report.line(format!("blocks: {}", f.block_count()));
            report.line(format!("covered_length: {}", f.covered_length));
            report.line(format!("source_letters: {}", cert.source_letters));
            report.verdict("incremental-checker", cert.checker_rejections == 0);
            report.verdict("factorization", f.certifies(&word) && f.all_cyclic());
            report.verdict("sliding-window", offline.is_none());
            if let Some(path) = certificate {
                write_file(path, &(serde_json::to_string(&cert)? + "\n"))?;
            }
            if let Some(path) = output {
                write_file(path, &format!("{word}\n"))?;
            }
            report.details = json!({
                "stem": f.stem,
                "blocks": f.block_count(),
                "covered_length": f.covered_length,
                "source_letters": cert.source_letters,
                "checker_rejections": cert.checker_rejections,
                "recipe": cert.morphism.recipe,
                "window": window,
            });
            Ok(None)
        }
        Command::VerifyMorphism { n, seed, images } => {
            if let Some(n) = n {
                report.param("n", n);
                if fixtures.muller.get(*n).is_some() {
                    let r = timed(report, "verify", || verify_muller(fixtures, *n))?;
                    report.line(format!("stem: {}", r.stem()));
                    report.line(format!(
                        "stem candidate: {} ({:?})",
                        r.candidate, r.candidate_source
                    ));
                    for d in &r.images {
                        match (d.blocks, d.failure) {
                            (Some(b), None) => report
                                .line(format!("h({}): {} letters, {b} blocks", d.letter, d.length)),
                            (_, Some(m)) => report.line(format!(
                                "h({}): {} letters, no stem block at offset {}",
                                d.letter, d.length, m.offset
                            )),
                            _ => {}
                        }
                    }
                    report.verdict("crochemore-5", r.crochemore.verdict);
                    report.verdict("stem-candidate", r.candidate_decodes);
                    report.verdict("stem-blocks", r.images.iter().all(|d| d.decoded()));
                    report.details = serde_json::to_value(&r)?;
                    return Ok(None);
                }
                let c = Constructor::new(fixtures).construct(*n)?;
                return certify(report, &c.morphism);
            }
            let m = match (seed, images) {
                (Some(s), _) => {
                    report.param("seed", s);
                    TernaryMorphism::from_seed(&TernaryWord::ingest(s)?)?
                }
                (None, Some(imgs)) => {
                    report.param("images", imgs);
                    let w = imgs
                        .iter()
                        .map(|s| TernaryWord::ingest(s))
                        .collect::<Result<Vec<_>>>()?;
                    let [a, b, c]: [TernaryWord; 3] = w
                        .try_into()
                        .map_err(|_| Error::Precondition("expected three images".into()))?;
                    TernaryMorphism::new([a, b, c])?
                }
                (None, None) => unreachable!("clap requires one subject"),
            };
            certify(report, &m)
        }
        Command::VerifyStem { stem, input } => {
            report.param("stem", stem);
            report.param("input", input.display().to_string());
            let stem = TernaryWord::ingest(stem)?;
            let text = std::fs::read_to_string(input).map_err(|source| Error::Io {
                path: input.clone(),
                source,
            })?;
            let word = TernaryWord::ingest(&text)?;
            report.param("length", word.len());
            let factored = factor_with_stem(&word, &stem);
            let square = timed(report, "square-check", || find_square(&word));
            match &factored {
                Ok(f) => report.line(format!("blocks: {}", f.block_count())),
                Err(m) => report.line(format!(
                    "no stem block at offset {} (block {})",
                    m.offset, m.block
                )),
            }
            if let Some(s) = square {
                report.line(format!(
                    "square at {} half_length {}",
                    s.start, s.half_length
                ));
            }
            report.verdict("stem-factorization", factored.is_ok());
            report.verdict("square-free", square.is_none());
            report.details = json!({
                "factorization": factored.as_ref().ok(),
                "mismatch": factored.as_ref().err(),
                "square": square,
            });
            Ok(None)
        }
        Command::CheckAlpha => {
            let mut details = serde_json::Map::new();
            for q in 1..=4 {
                let r = alpha::verify_remark2(q)?;
                for l in r.to_string().lines() {
                    report.line(l);
                }
                report.verdict(&format!("alpha{q}-properties"), r.passed());
                details.insert(format!("alpha{q}"), serde_json::to_value(&r)?);
            }
            for q in 1..=4 {
                let ok = alpha::verify_shift_isolation(q)?;
                report.verdict(&format!("alpha{q}-shift-isolation"), ok);
            }
            let aa = alpha::verify_lemma_aa();
            report.line(format!(
                "lemma aa: {} concatenations",
                alpha::LEMMA_AA_CASES
            ));
            report.verdict("lemma-aa", aa);
            report.verdict("lemma-qr", alpha::verify_lemma_qr());
            for k in [6, 20, 40] {
                let x = make_x(k)?.x;
                let mut all = true;
                for q in 1..=4 {
                    for r in (1..=4).filter(|&r| r != q) {
                        all &= alpha::verify_lemmas_with_x(&x, q, r)?;
                    }
                }
                report.line(format!("x for k = {k}: {x}"));
                report.verdict(&format!("lemmas-with-x-k{k}"), all);
            }
            report.details = Value::Object(details);
            Ok(None)
        }
        Command::CheckAppendix {
            search_ceiling,
            jobs,
        } => {
            report.param("search_ceiling", search_ceiling);
            let options = SearchOptions {
                jobs: *jobs,
                ..SearchOptions::default()
            };
            let r = timed(report, "check", || {
                cross_check_appendix(fixtures, 13..=122, *search_ceiling, &options)
            })?;
            for e in &r.entries {
                let search = match e.found_by_search {
                    Some(true) => "found by search",
                    Some(false) => "NOT found by search",
                    None => "not searched",
                };
                let cert = if e.certified {
                    "certified"
                } else {
                    "NOT certified"
                };
                report.line(format!("{} {}: {cert}, {search}", e.n, e.seed));
            }
            report.line(format!("entries: {}", r.entries.len()));
            report.verdict("entries-certified", r.entries.iter().all(|e| e.certified));
            report.verdict(
                "search-agrees",
                r.entries.iter().all(|e| e.found_by_search != Some(false)),
            );
            report.verdict(
                "entry-count",
                r.entries.len() == crate::fixtures::APPENDIX_ENTRIES,
            );
            report.details = serde_json::to_value(&r)?;
            Ok(None)
        }
        Command::MakeX { k } => {
            report.param("k", k);
            let b = make_x(*k)?;
            report.line(format!("r = {}", b.r));
            report.line(format!("x = {}", b.x));
            report.line(format!("|r| = {}, |x| = {}", b.r.len(), b.x.len()));
            report.verdict("length", b.r.len() == 4 * k - 1);
            report.verdict("square-free", find_square(&b.r).is_none());
            report.verdict(
                "avoids-010-212",
                crate::squarefree::avoids(&b.r, &["010".parse()?, "212".parse()?]),
            );
            report.verdict(
                "bracketed",
                b.r.starts_with(&alpha::BRACKET.parse()?)
                    && b.r.ends_with(&alpha::BRACKET.parse()?),
            );
            report.verdict("admissible-x", alpha::is_admissible_x(&b.x));
            report.details = serde_json::to_value(&b)?;
            Ok(None)
        }
    }
}

fn certify(report: &mut RunReport, m: &TernaryMorphism) -> Result<Option<i32>> {
    morphism_lines(report, m);
    let mut certs = Vec::new();
    if m.is_uniform() {
        certs.push(berstel_test(m)?);
    }
    certs.push(timed(report, "crochemore", || crochemore_test(m)));
    for c in &certs {
        for l in c.to_string().lines() {
            report.line(format!("certificate {l}"));
        }
        report.verdict(c.method.as_str(), c.verdict);
    }
    report.details = json!({
        "morphism": m,
        "uniform": m.is_uniform(),
        "cyclic_shift_form": m.is_cyclic_shift_form(),
        "certificates": certs,
    });
    Ok(None)
}

// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit codes: 0 success / equivalent, 1 usage, parse or IO error,
//! 2 mismatch, 3 inconclusive.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use web_time::Instant;

use crate::extractor::{validate_irreducible, IrrPoly};
use crate::generator::{gen_mastrovito, obfuscate, reduction_matrix, xor_cost, GenOptions};
use crate::netlist::{parse_netlist, GateKind, Netlist};
use crate::report::{
    millis, ConfigEcho, ExtractDocument, StatsDocument, StatsRow, VerdictRecord, VerifyDocument, TOOL, VERSION,
};
use crate::verify::{
    exhaustive_check, full_pipeline, random_check, symbolic_check, Status, Verdict, EXHAUSTIVE_LIMIT,
};
use crate::rewriter::rewrite_all;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyMethod {
    /// Exhaustive up to m = 8, random simulation above, plus symbolic.
    Auto,
    Exhaustive,
    Random,
    Symbolic,
}

#[derive(Parser, Debug)]
#[command(name = "gfextract", version, about = "Reverse-engineer the field polynomial of GF(2^m) multipliers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Allow exhaustive simulation above m = 8.
    #[arg(long, global = true)]
    pub force: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a Mastrovito multiplier netlist.
    Generate {
        #[arg(long)]
        m: usize,
        /// Descending exponent list, e.g. "4,1,0".
        #[arg(long)]
        poly: String,
        /// Share partial-sum trees between output columns (default).
        #[arg(long, conflicts_with = "no_share")]
        share: bool,
        #[arg(long)]
        no_share: bool,
        #[arg(long)]
        obfuscate_seed: Option<u64>,
        /// Number of obfuscating rewrites (default: gate count).
        #[arg(long)]
        rewrite_budget: Option<usize>,
        #[arg(long)]
        allow_reducible: bool,
    },
    /// Rewrite, extract P(x) and check against the golden multiplier.
    Extract {
        input: PathBuf,
        /// Include bit expressions even above m = 16.
        #[arg(long)]
        expressions: bool,
    },
    /// Check a netlist against a given polynomial.
    Verify {
        input: PathBuf,
        #[arg(long)]
        poly: String,
        #[arg(long, value_enum, default_value_t = VerifyMethod::Auto)]
        method: VerifyMethod,
        /// Random vectors for the random method.
        #[arg(long, default_value_t = 10_000)]
        vectors: usize,
    },
    /// Compare XOR cost and extraction effort across polynomials.
    Stats {
        /// Polynomial as a descending exponent list; repeatable.
        #[arg(long)]
        poly: Vec<String>,
        /// Directory of *.poly files, one exponent list per line.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        run_extract: bool,
        #[arg(long)]
        no_share: bool,
    },
    /// Apply seeded function-preserving rewrites to a netlist.
    Obfuscate {
        input: PathBuf,
        #[arg(long)]
        rewrite_budget: Option<usize>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn error(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_ERROR,
            message: message.into(),
        }
    }
}

type Outcome = Result<i32, Failure>;

fn default_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn read_netlist(path: &Path) -> Result<Netlist, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::error(format!("{}: {e}", path.display())))?;
    parse_netlist(&text).map_err(|e| Failure::error(format!("{}: {e}", path.display())))
}

fn parse_poly(s: &str) -> Result<IrrPoly, Failure> {
    IrrPoly::parse_list(s).map_err(|e| Failure::error(e.to_string()))
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Equivalent => EXIT_OK,
        Status::Mismatch => EXIT_MISMATCH,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn threads(&self) -> Result<usize, Failure> {
        match self.cli.threads {
            Some(0) => Err(Failure::error("--threads must be at least 1")),
            Some(n) => Ok(n),
            None => Ok(default_threads()),
        }
    }

    fn emit(&mut self, body: &str) -> Result<(), Failure> {
        match &self.cli.out {
            Some(path) => fs::write(path, body).map_err(|e| Failure::error(format!("{}: {e}", path.display()))),
            None => self
                .stdout
                .write_all(body.as_bytes())
                .map_err(|e| Failure::error(e.to_string())),
        }
    }

    /// Side information goes to stdout when the main output is a file.
    fn info(&mut self, line: &str) {
        let sink: &mut dyn Write = if self.cli.out.is_some() { self.stdout } else { self.stderr };
        let _ = writeln!(sink, "{line}");
    }

    fn config(&self, command: &str, input: Option<&Path>, threads: usize, poly: Option<&IrrPoly>) -> ConfigEcho {
        ConfigEcho {
            command: command.into(),
            input: input.map(|p| p.display().to_string()),
            threads,
            polynomial: poly.map(|p| p.to_list()),
            seed: Some(self.cli.seed),
        }
    }

    fn structured(&self) -> bool {
        self.cli.report == ReportFormat::Structured
    }
}

fn to_json<T: serde::Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report documents serialize");
    s.push('\n');
    s
}

fn cmd_generate(ctx: &mut Ctx, cmd: &Command) -> Outcome {
    let Command::Generate {
        m,
        poly,
        share: _,
        no_share,
        obfuscate_seed,
        rewrite_budget,
        allow_reducible,
    } = cmd
    else {
        unreachable!()
    };
    let p = parse_poly(poly)?;
    if p.m() != *m {
        return Err(Failure::error(format!("--m {m} does not match the degree of {p}")));
    }
    if !validate_irreducible(&p) && !allow_reducible {
        return Err(Failure::error(format!(
            "{p} is reducible over GF(2); pass --allow-reducible to generate anyway"
        )));
    }
    let mut n = gen_mastrovito(&p, GenOptions { share: !no_share });
    if let Some(seed) = obfuscate_seed {
        n = obfuscate(&n, *seed, rewrite_budget.unwrap_or(n.gates().len()));
    }
    let rm = reduction_matrix(*m, &p).expect("degree checked");
    ctx.emit(&n.to_text())?;
    ctx.info(&format!(
        "P(x) = {p}: gates={} and={} xor={} xor_cost={}",
        n.gates().len(),
        n.count_kind(GateKind::And),
        n.count_kind(GateKind::Xor),
        xor_cost(&rm)
    ));
    Ok(EXIT_OK)
}

fn cmd_extract(ctx: &mut Ctx, input: &Path, expressions: bool) -> Outcome {
    let n = read_netlist(input)?;
    let threads = ctx.threads()?;
    let report = match full_pipeline(&n, threads) {
        Ok(r) => r,
        Err(e) => {
            return Err(Failure {
                code: EXIT_INCONCLUSIVE,
                message: e.to_string(),
            })
        }
    };
    let doc = ExtractDocument::new(&report, n.gates().len(), ctx.config("extract", Some(input), threads, None), expressions);
    let body = if ctx.structured() { to_json(&doc) } else { doc.render_text() };
    ctx.emit(&body)?;
    Ok(status_code(report.verdict.status))
}

fn cmd_verify(ctx: &mut Ctx, input: &Path, poly: &str, method: VerifyMethod, vectors: usize) -> Outcome {
    let start = Instant::now();
    let n = read_netlist(input)?;
    let p = parse_poly(poly)?;
    let threads = ctx.threads()?;
    let err = |e: crate::verify::VerifyError| Failure::error(e.to_string());
    let symbolic = |n: &Netlist| -> Result<Verdict, Failure> {
        let r = rewrite_all(n, threads).map_err(|e| Failure {
            code: EXIT_INCONCLUSIVE,
            message: e.to_string(),
        })?;
        symbolic_check(&r, &p).map_err(err)
    };
    let verdicts = match method {
        VerifyMethod::Exhaustive => vec![exhaustive_check(&n, &p, ctx.cli.force, threads).map_err(err)?],
        VerifyMethod::Random => vec![random_check(&n, &p, vectors, ctx.cli.seed).map_err(err)?],
        VerifyMethod::Symbolic => vec![symbolic(&n)?],
        VerifyMethod::Auto => {
            let sim = if n.m() <= EXHAUSTIVE_LIMIT || ctx.cli.force {
                exhaustive_check(&n, &p, ctx.cli.force, threads).map_err(err)?
            } else {
                random_check(&n, &p, vectors, ctx.cli.seed).map_err(err)?
            };
            vec![sim, symbolic(&n)?]
        }
    };
    let status = if verdicts.iter().any(|v| v.status == Status::Mismatch) {
        Status::Mismatch
    } else if verdicts.iter().all(|v| v.status == Status::Equivalent) {
        Status::Equivalent
    } else {
        Status::Inconclusive
    };
    let doc = VerifyDocument {
        tool: TOOL.into(),
        version: VERSION.into(),
        config: ctx.config("verify", Some(input), threads, Some(&p)),
        m: n.m(),
        polynomial: p.to_string(),
        verdicts: verdicts.iter().map(|v| VerdictRecord::from_verdict(v, n.m())).collect(),
        total_ms: millis(start.elapsed()),
    };
    let body = if ctx.structured() { to_json(&doc) } else { doc.render_text() };
    ctx.emit(&body)?;
    Ok(status_code(status))
}

fn read_corpus(dir: &Path) -> Result<Vec<String>, Failure> {
    let io = |e: std::io::Error| Failure::error(format!("{}: {e}", dir.display()));
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "poly"))
        .collect();
    files.sort();
    let mut polys = Vec::new();
    for f in files {
        let text = fs::read_to_string(&f).map_err(io)?;
        for line in text.lines() {
            let body = line.split('#').next().unwrap_or("").trim();
            if !body.is_empty() {
                polys.push(body.to_string());
            }
        }
    }
    Ok(polys)
}

fn cmd_stats(ctx: &mut Ctx, polys: &[String], corpus: Option<&Path>, run_extract: bool, no_share: bool) -> Outcome {
    let threads = ctx.threads()?;
    let mut lists: Vec<String> = polys.to_vec();
    if let Some(dir) = corpus {
        lists.extend(read_corpus(dir)?);
    }
    let mut rows = Vec::new();
    for s in &lists {
        let p = parse_poly(s)?;
        let rm = reduction_matrix(p.m(), &p).expect("degree matches");
        let n = gen_mastrovito(&p, GenOptions { share: !no_share });
        let mut row = StatsRow {
            polynomial: p.to_string(),
            m: p.m(),
            irreducible: validate_irreducible(&p),
            xor_cost: xor_cost(&rm),
            and_gates: n.count_kind(GateKind::And),
            xor_gates: n.count_kind(GateKind::Xor),
            total_gates: n.gates().len(),
            extract_ms: None,
            peak_monomials: None,
            recovered: None,
        };
        if run_extract {
            let r = full_pipeline(&n, threads).map_err(|e| Failure::error(e.to_string()))?;
            row.extract_ms = Some(millis(r.total_time));
            row.peak_monomials = Some(r.rewrite.peak_monomials());
            row.recovered = Some(r.recovered() == Some(&p));
        }
        rows.push(row);
    }
    let doc = StatsDocument {
        tool: TOOL.into(),
        version: VERSION.into(),
        config: ctx.config("stats", corpus, threads, None),
        rows,
    };
    let body = if ctx.structured() { to_json(&doc) } else { doc.render_text() };
    ctx.emit(&body)?;
    Ok(EXIT_OK)
}

fn cmd_obfuscate(ctx: &mut Ctx, input: &Path, budget: Option<usize>) -> Outcome {
    let n = read_netlist(input)?;
    let out = obfuscate(&n, ctx.cli.seed, budget.unwrap_or(n.gates().len()));
    ctx.emit(&out.to_text())?;
    ctx.info(&format!("gates: {} -> {}", n.gates().len(), out.gates().len()));
    Ok(EXIT_OK)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                EXIT_ERROR
            } else {
                let _ = write!(stdout, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        cli: &cli,
        stdout,
        stderr,
    };
    let result = match &cli.command {
        cmd @ Command::Generate { .. } => cmd_generate(&mut ctx, cmd),
        Command::Extract { input, expressions } => cmd_extract(&mut ctx, input, *expressions),
        Command::Verify {
            input,
            poly,
            method,
            vectors,
        } => cmd_verify(&mut ctx, input, poly, *method, *vectors),
        Command::Stats {
            poly,
            corpus,
            run_extract,
            no_share,
        } => cmd_stats(&mut ctx, poly, corpus.as_deref(), *run_extract, *no_share),
        Command::Obfuscate { input, rewrite_budget } => cmd_obfuscate(&mut ctx, input, *rewrite_budget),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(ctx.stderr, "error: {}", f.message);
            f.code
        }
    }
}

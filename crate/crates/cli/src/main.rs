use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tracecode::bounds::Bounds;
use tracecode::charsum::char_sum_report;
use tracecode::field::{parse_modulus, FieldCtx};
use tracecode::job::{
    field_info, parse_tasks, random_grid, resolve_a, resolve_field, run, sweep, to_csv, to_json,
    to_text, write_codeword_dump, ASpec, JobConfig, RunReport, SweepReport, Task,
};
use tracecode::{Error, Result};

#[derive(Parser)]
#[command(
    name = "tracecode",
    version,
    about = "Trace codes over GF(p): build, enumerate and verify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Field construction.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Code construction and enumeration.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Verification suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Applications of the weight distribution.
    #[command(subcommand)]
    Apps(AppsCmd),
    /// The character sums I1(a), I2(a) and their predicted values.
    Charsums(CodeArgs),
}

#[derive(Subcommand)]
enum FieldCmd {
    /// Modulus, primitivity and trace basis of GF(p^m).
    Info(FieldArgs),
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Run a list of tasks on one code.
    Run(RunArgs),
    /// Run tasks over a grid of codes.
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Closed forms of the character sums and counting functions against brute force.
    Lemmas(TaskArgs),
    /// Low-weight dual counts by two methods against the predicted values.
    Dual(TaskArgs),
}

#[derive(Subcommand)]
enum AppsCmd {
    /// Ratio test and exhaustive minimality check.
    Minimality(TaskArgs),
    /// Sum-set check of the projective point set.
    Sumset(SumsetArgs),
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    m: usize,
    /// Ascending monic coefficients, e.g. 2,2,2,0,1,2,0,0,1.
    #[arg(long)]
    modulus: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CodeArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// exp:K for beta^K, or coeffs:c0,c1,...
    #[arg(long)]
    a: String,
}

#[derive(Args)]
struct TaskArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Seed for randomized samples inside the run.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Comma list from enumerate, predict, verify-lemmas, dual, minimality, sumset.
    #[arg(long, default_value = "enumerate,predict")]
    tasks: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of summands for the sumset task.
    #[arg(long, default_value_t = 3)]
    s: u32,
    /// Write one line per codeword to this file.
    #[arg(long)]
    dump_codewords: Option<PathBuf>,
}

#[derive(Args)]
struct SumsetArgs {
    #[command(flatten)]
    task: TaskArgs,
    #[arg(long, default_value_t = 3)]
    s: u32,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON file holding a list of job configurations.
    #[arg(long, conflicts_with_all = ["ps", "ms"])]
    grid: Option<PathBuf>,
    /// Characteristics for a random grid.
    #[arg(long, value_delimiter = ',')]
    ps: Vec<u32>,
    /// Degrees for a random grid.
    #[arg(long, value_delimiter = ',')]
    ms: Vec<usize>,
    /// Values of a drawn per (p, m).
    #[arg(long, default_value_t = 5)]
    count: usize,
    /// Required for random a selection.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "enumerate,predict")]
    tasks: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

fn bounds() -> Result<Bounds> {
    Bounds::from_env()
}

fn job(code: &CodeArgs, tasks: Vec<Task>, seed: u64, s: u32) -> Result<JobConfig> {
    let a: ASpec = code.a.parse()?;
    let mut cfg = JobConfig::new(code.field.p, code.field.m, a, tasks);
    cfg.modulus = code
        .field
        .modulus
        .as_deref()
        .map(parse_modulus)
        .transpose()?;
    cfg.bounds = bounds()?;
    cfg.seed = seed;
    cfg.s = s;
    Ok(cfg)
}

fn emit(out: &OutputArgs, text: &str) -> Result<()> {
    let io_err = |e: io::Error| Error::Config(format!("cannot write output: {e}"));
    match &out.output {
        Some(path) => std::fs::write(path, text).map_err(io_err),
        None => io::stdout().write_all(text.as_bytes()).map_err(io_err),
    }
}

fn render_report(r: &RunReport, format: Format) -> String {
    match format {
        Format::Json => to_json(r) + "\n",
        Format::Csv => to_csv(r),
        Format::Text => to_text(r),
    }
}

fn render_sweep(r: &SweepReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(r).expect("sweep serializes") + "\n",
        Format::Csv => {
            let mut s = String::from("p,m,a,case,ok,error\n");
            for c in &r.cells {
                let case = c.report.as_ref().map(|x| x.case.as_str()).unwrap_or("");
                let err = c.error.as_deref().unwrap_or("").replace(',', ";");
                s += &format!(
                    "{},{},{},{},{},{}\n",
                    c.config.p,
                    c.config.m,
                    c.config.a.to_string().replace(',', " "),
                    case,
                    c.ok,
                    err
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &r.cells {
                let status = match (&c.error, c.ok) {
                    (Some(e), _) => format!("ERROR {e}"),
                    (None, true) => "ok".into(),
                    (None, false) => "FAILED".into(),
                };
                let case = c
                    .report
                    .as_ref()
                    .map(|x| x.case.clone())
                    .unwrap_or_default();
                s += &format!(
                    "p={} m={} a={} {} {}\n",
                    c.config.p, c.config.m, c.config.a, case, status
                );
            }
            s + &format!("{} passed, {} failed\n", r.passed, r.failed)
        }
    }
}

fn run_tasks(code: &CodeArgs, tasks: Vec<Task>, seed: u64, s: u32) -> Result<bool> {
    let cfg = job(code, tasks, seed, s)?;
    let report = run(&cfg)?;
    emit(
        &code.field.out,
        &render_report(&report, code.field.out.format),
    )?;
    Ok(report.ok)
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Field(FieldCmd::Info(f)) => {
            let modulus = f.modulus.as_deref().map(parse_modulus).transpose()?;
            let ctx = FieldCtx::new(f.p, f.m, modulus.as_deref())?;
            let info = field_info(&ctx);
            let text = match f.out.format {
                Format::Json | Format::Csv => {
                    serde_json::to_string_pretty(&info).expect("info serializes") + "\n"
                }
                Format::Text => format!(
                    "GF({}^{}) order {} modulus {} primitive {} trace basis {:?} Gauss sum {}\n",
                    info.p,
                    info.m,
                    info.order,
                    tracecode::field::format_modulus(&info.modulus),
                    info.generator_primitive,
                    info.trace_basis,
                    info.gauss_sum
                ),
            };
            emit(&f.out, &text)?;
            Ok(true)
        }
        Command::Code(CodeCmd::Run(r)) => {
            let tasks = parse_tasks(&r.tasks)?;
            if let Some(path) = &r.dump_codewords {
                let cfg = job(&r.code, tasks.clone(), r.seed, r.s)?;
                let (ctx, _) = resolve_field(&cfg)?;
                let a = resolve_a(&ctx, &cfg.a)?;
                let file = File::create(path)
                    .map_err(|e| Error::Config(format!("cannot create {path:?}: {e}")))?;
                let mut w = BufWriter::new(file);
                write_codeword_dump(&ctx, &a, &cfg.bounds, &mut w)?;
                w.flush()
                    .map_err(|e| Error::Config(format!("cannot write {path:?}: {e}")))?;
            }
            run_tasks(&r.code, tasks, r.seed, r.s)
        }
        Command::Code(CodeCmd::Sweep(sw)) => {
            let tasks = parse_tasks(&sw.tasks)?;
            let grid: Vec<JobConfig> = match &sw.grid {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Error::Config(format!("cannot read {path:?}: {e}")))?;
                    serde_json::from_str(&text)
                        .map_err(|e| Error::Config(format!("invalid grid file: {e}")))?
                }
                None if sw.ps.is_empty() || sw.ms.is_empty() => Vec::new(),
                None => {
                    let seed = sw
                        .seed
                        .ok_or_else(|| Error::Config("random a selection needs --seed".into()))?;
                    random_grid(&sw.ps, &sw.ms, sw.count, seed, &tasks, bounds()?)?
                }
            };
            let report = sweep(&grid);
            emit(&sw.out, &render_sweep(&report, sw.out.format))?;
            Ok(report.ok)
        }
        Command::Verify(VerifyCmd::Lemmas(t)) => {
            run_tasks(&t.code, vec![Task::VerifyLemmas], t.seed, 3)
        }
        Command::Verify(VerifyCmd::Dual(t)) => run_tasks(&t.code, vec![Task::Dual], t.seed, 3),
        Command::Apps(AppsCmd::Minimality(t)) => {
            run_tasks(&t.code, vec![Task::Minimality], t.seed, 3)
        }
        Command::Apps(AppsCmd::Sumset(s)) => {
            run_tasks(&s.task.code, vec![Task::Sumset], s.task.seed, s.s)
        }
        Command::Charsums(c) => {
            let cfg = job(&c, Vec::new(), 0, 3)?;
            let (ctx, _) = resolve_field(&cfg)?;
            let a = resolve_a(&ctx, &cfg.a)?;
            let rep = char_sum_report(&ctx, &a)?;
            let text = match c.field.out.format {
                Format::Text => format!(
                    "I1 = {}, I2 = {}, eta(a) = {}, prediction {:?}, holds {}\n",
                    rep.i1,
                    rep.i2,
                    rep.eta_a,
                    rep.prediction,
                    rep.prediction_holds()
                ),
                _ => serde_json::to_string_pretty(&rep).expect("report serializes") + "\n",
            };
            emit(&c.field.out, &text)?;
            Ok(rep.prediction_holds())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

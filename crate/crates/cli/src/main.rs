use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use longcf::cf::{expand_sqrt, DEFAULT_MAX_PERIOD};
use longcf::exact_arith::{square_free_probe, DEFAULT_SQUARE_FREE_BOUND};
use longcf::families::{display_errata, generate};
use longcf::verify::{run_sweep, sweep_grid, verify};
use longcf::word::{eval_finite, normalize_with_budget, DEFAULT_REWRITE_BUDGET};
use longcf::{BigInt, Error, FamilyId, Params, VerifyConfig, Word};

#[derive(Parser)]
#[command(
    name = "longcf",
    version,
    about = "Continued fractions of square roots and long-period families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand √d into a₀ and one period.
    Expand {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, default_value_t = DEFAULT_MAX_PERIOD)]
        max_period: usize,
        #[arg(long)]
        json: bool,
    },
    /// Unit P + Q√d read off the expansion.
    Unit {
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, default_value_t = DEFAULT_MAX_PERIOD)]
        max_period: usize,
        #[arg(long, default_value_t = DEFAULT_SQUARE_FREE_BOUND)]
        square_free_bound: u64,
        #[arg(long)]
        json: bool,
    },
    /// Print a family instance without checking it.
    Predict {
        #[arg(long)]
        family: String,
        #[arg(long)]
        params: String,
        #[arg(long)]
        json: bool,
    },
    /// Check one family instance against the expansion.
    Verify {
        #[arg(long)]
        family: String,
        #[arg(long)]
        params: String,
        #[arg(long, default_value_t = DEFAULT_MAX_PERIOD)]
        max_period: usize,
        #[arg(long, default_value_t = DEFAULT_SQUARE_FREE_BOUND)]
        square_free_bound: u64,
        #[arg(long)]
        json: bool,
        /// Also write the report as JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every admissible instance up to the bounds.
    Sweep {
        /// Comma-separated family names, or `all`.
        #[arg(long, default_value = "all")]
        families: String,
        #[arg(long, default_value_t = 3)]
        param_bound: u64,
        #[arg(long, default_value_t = 4)]
        k_bound: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_PERIOD)]
        max_period: usize,
        #[arg(long, default_value_t = DEFAULT_SQUARE_FREE_BOUND)]
        square_free_bound: u64,
        /// JSON-lines report; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Rewrite a word with zero or negative entries into a regular one.
    Normalize {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value_t = DEFAULT_REWRITE_BUDGET)]
        budget: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Lib(Error),
    Io(PathBuf, io::Error),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Lib(e) => match e {
                Error::PerfectSquare(_) => 2,
                Error::PeriodTooLong { .. } => 3,
                Error::Inadmissible(_) | Error::UnknownFamily(_) => 4,
                Error::NonTerminating { .. } => 6,
                Error::NormalizationMismatch(_) => 7,
                _ => 1,
            },
            Failure::Io(..) => 5,
            Failure::Mismatch(_) => 7,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Mismatch(m) => f.write_str(m),
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Expand {
            d,
            max_period,
            json,
        } => cmd_expand(&parse_d(&d)?, max_period, json),
        Command::Unit {
            d,
            max_period,
            square_free_bound,
            json,
        } => cmd_unit(&parse_d(&d)?, max_period, square_free_bound, json),
        Command::Predict {
            family,
            params,
            json,
        } => cmd_predict(&family, &params, json),
        Command::Verify {
            family,
            params,
            max_period,
            square_free_bound,
            json,
            out,
        } => {
            let config = VerifyConfig {
                max_period,
                square_free_bound,
            };
            cmd_verify(&family, &params, &config, json, out.as_deref())
        }
        Command::Sweep {
            families,
            param_bound,
            k_bound,
            max_period,
            square_free_bound,
            out,
            jobs,
        } => {
            let config = VerifyConfig {
                max_period,
                square_free_bound,
            };
            cmd_sweep(
                &families,
                param_bound,
                k_bound,
                &config,
                out.as_deref(),
                jobs,
            )
        }
        Command::Normalize { word, budget, json } => cmd_normalize(&word, budget, json),
    }
}

fn parse_d(s: &str) -> Result<BigInt, Failure> {
    s.trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("`{s}` is not an integer")))
}

fn parse_family(s: &str) -> Result<FamilyId, Failure> {
    Ok(s.trim().parse()?)
}

fn parse_families(s: &str) -> Result<Vec<FamilyId>, Failure> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(FamilyId::ALL.to_vec());
    }
    let mut ids = Vec::new();
    for name in s.split(',') {
        let id = parse_family(name)?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    Ok(ids)
}

fn parse_word(s: &str) -> Result<Word, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>())
        .collect::<Result<Word, _>>()
        .map_err(|_| Failure::Usage(format!("`{s}` is not a comma-separated list of integers")))
}

fn csv(w: &[BigInt]) -> String {
    w.iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn mod8(d: &BigInt) -> u8 {
    // d is positive once the expansion has succeeded.
    let r: BigInt = d % 8;
    u8::try_from(&r).expect("residue below 8")
}

fn write_file(path: &Path, contents: &str) -> Outcome {
    std::fs::write(path, contents).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn cmd_expand(d: &BigInt, max_period: usize, json: bool) -> Outcome {
    let cf = expand_sqrt(d, max_period)?;
    if json {
        // Raw JSON numbers: they are exact and need no quoting.
        println!(
            "{{\"a0\":{},\"period\":[{}],\"len\":{}}}",
            cf.a0,
            csv(&cf.period),
            cf.period_len()
        );
    } else {
        println!("{cf}");
    }
    Ok(())
}

fn cmd_unit(d: &BigInt, max_period: usize, square_free_bound: u64, json: bool) -> Outcome {
    let cf = expand_sqrt(d, max_period)?;
    let (unit, norm) = cf.fundamental_unit();
    let (p, q) = (unit.a().to_integer(), unit.b().to_integer());
    let residue = mod8(d);
    let status = square_free_probe(d, square_free_bound);
    if residue == 5 {
        eprintln!("warning: d ≡ 5 (mod 8); the unit of Z[(1+√d)/2] may be a cube root of this one");
    }
    if json {
        let value = serde_json::json!({
            "d": d.to_string(),
            "p": p.to_string(),
            "q": q.to_string(),
            "norm": norm,
            "len": cf.period_len(),
            "d_mod8": residue,
            "square_free": status.to_string(),
        });
        println!("{value}");
    } else {
        let q = if q == BigInt::from(1) {
            String::new()
        } else {
            q.to_string()
        };
        println!("{p} + {q}√{d}");
        println!("norm {norm:+}");
        println!("period length {}", cf.period_len());
        println!("d mod 8 = {residue}");
        println!("{status}");
    }
    Ok(())
}

fn cmd_predict(family: &str, params: &str, json: bool) -> Outcome {
    let id = parse_family(family)?;
    let params: Params = params.parse()?;
    let inst = generate(id, &params)?;
    let errata = display_errata(id, &params)?;
    if json {
        let value = serde_json::json!({
            "family": id,
            "params": params,
            "d": inst.d.to_string(),
            "a0": inst.a0.to_string(),
            "period": inst.predicted_period.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "len": inst.predicted_len,
            "unit": inst.predicted_unit.as_ref().map(|u| [u.a().to_string(), u.b().to_string()]),
            "notes": errata,
        });
        println!("{value}");
    } else {
        println!("{id} {}", params.display_for(id));
        println!("d = {}", inst.d);
        println!(
            "[{}; {}] l={}",
            inst.a0, inst.predicted_period, inst.predicted_len
        );
        if let Some(u) = &inst.predicted_unit {
            println!("unit {} + {}√d", u.a(), u.b());
        }
        for note in errata {
            println!("note: {note}");
        }
    }
    Ok(())
}

fn flag(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "NO"
    }
}

fn cmd_verify(
    family: &str,
    params: &str,
    config: &VerifyConfig,
    json: bool,
    out: Option<&Path>,
) -> Outcome {
    let id = parse_family(family)?;
    let params: Params = params.parse()?;
    let report = verify(id, &params, config)?;
    let line = serde_json::to_string(&report).expect("report serializes");
    if let Some(path) = out {
        write_file(path, &format!("{line}\n"))?;
    }
    if json {
        println!("{line}");
    } else {
        println!("{id} {}", params.display_for(id));
        println!("d = {}", report.d);
        println!(
            "[{}; {}] l={}",
            report.a0,
            report.oracle_period,
            report.oracle_period.len()
        );
        println!("word match    {}", flag(report.word_match));
        println!("length match  {}", flag(report.len_match));
        let unit = match report.unit_match {
            Some(b) => flag(b),
            None => "n/a",
        };
        println!("unit match    {unit}");
        println!("pell sign     {:+}", report.pell_sign);
        println!("d mod 8       {}", report.d_mod8);
        println!("square-free   {}", report.square_free);
        for note in &report.notes {
            println!("note: {note}");
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!(
            "{id} {} does not match its expansion",
            params.display_for(id)
        )))
    }
}

fn cmd_sweep(
    families: &str,
    param_bound: u64,
    k_bound: u64,
    config: &VerifyConfig,
    out: Option<&Path>,
    jobs: Option<usize>,
) -> Outcome {
    if param_bound == 0 || k_bound == 0 {
        return Err(Failure::Usage("bounds must be at least 1".into()));
    }
    let jobs = match jobs {
        Some(0) => return Err(Failure::Usage("--jobs must be at least 1".into())),
        Some(j) => j,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let ids = parse_families(families)?;
    let grid = sweep_grid(&ids, param_bound, k_bound);
    let results = run_sweep(&grid, config, jobs);

    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(&mut sink);
    let mut failed = Vec::new();
    for (id, params, outcome) in &results {
        let line = match outcome {
            Ok(report) => {
                if !report.passed() {
                    failed.push(format!("{id} {}", params.display_for(*id)));
                }
                serde_json::to_string(report).expect("report serializes")
            }
            Err(e) => {
                failed.push(format!("{id} {}: {e}", params.display_for(*id)));
                serde_json::json!({ "family": id, "params": params, "error": e.to_string() })
                    .to_string()
            }
        };
        writeln!(sink, "{line}")
            .map_err(|e| Failure::Io(out.unwrap_or(Path::new("-")).into(), e))?;
    }
    sink.flush()
        .map_err(|e| Failure::Io(out.unwrap_or(Path::new("-")).into(), e))?;
    drop(sink);

    let summary = format!(
        "instances {}  pass {}  fail {}",
        results.len(),
        results.len() - failed.len(),
        failed.len()
    );
    // Keep standard output clean when it carries the report.
    if out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    for f in &failed {
        eprintln!("fail: {f}");
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!(
            "{} instances failed",
            failed.len()
        )))
    }
}

fn show<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref()
        .map_or_else(|| "undefined".to_string(), T::to_string)
}

fn cmd_normalize(word: &str, budget: usize, json: bool) -> Outcome {
    let w = parse_word(word)?;
    let before = eval_finite(&w).ok();
    let regular = normalize_with_budget(&w, budget)?;
    let after = eval_finite(&regular).ok();
    if json {
        let value = serde_json::json!({
            "word": regular.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "before": show(&before),
            "after": show(&after),
        });
        println!("{value}");
    } else {
        println!("{}", csv(&regular));
        println!("before {}", show(&before));
        println!("after  {}", show(&after));
    }
    Ok(())
}

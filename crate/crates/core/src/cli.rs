//! Command-line front end. Exit codes: 0 success, 1 malformed input,
//! 2 negative answer (not Calabi-Yau, no cover, failed check),
//! 3 inconclusive search.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::enumerate::{enumerate, to_csv, EnumerationQuery};
use crate::error::{Error, Result};
use crate::family;
use crate::hodge::{self, HodgeStatus};
use crate::hurwitz::{self, Permutation, SearchOptions, SearchOutcome};
use crate::lattice;
use crate::monodromy;
use crate::profile::{BranchPoint, RamificationProfile};
use crate::roots;
use crate::scalar::{fmt_rational, parse_rational};
use crate::selftest;
use crate::transitions;
use crate::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "k3fib", version, about = "Calabi-Yau threefolds fibred by mirror-quartic K3 surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank, signature and discriminant group of a standard lattice.
    Lattice { name: String },
    /// Calabi-Yau check and smoothness of a profile file.
    Validate { profile: PathBuf },
    /// Hodge numbers for one or more profile files.
    Hodge {
        #[arg(required = true)]
        profiles: Vec<PathBuf>,
        #[arg(long)]
        csv: bool,
    },
    /// Local monodromy of the transcendental system, or its relation suite.
    Monodromy(MonodromyArgs),
    /// Permutation-tuple search and transposition factorization.
    Hurwitz {
        #[command(subcommand)]
        command: HurwitzCommand,
    },
    /// Critical data of the (i,j) family.
    Family(FamilyArgs),
    /// Move a simple branch point into 0, 1/256 or infinity.
    Degenerate {
        profile: PathBuf,
        #[arg(long)]
        target: BranchPoint,
        /// Two part indices of the target partition, e.g. `0,1`.
        #[arg(long, value_parser = parse_pair)]
        parts: (usize, usize),
        /// Also transform a witness of the profile.
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// List Calabi-Yau profiles up to a degree.
    Enumerate {
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        smooth: bool,
        #[arg(long)]
        h21: Option<i64>,
        #[arg(long)]
        witness: bool,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long)]
        csv: bool,
    },
    /// Run the built-in acceptance checks.
    Selftest,
}

#[derive(Args, Debug)]
struct MonodromyArgs {
    #[arg(long, required_unless_present = "check", requires = "index")]
    point: Option<BranchPoint>,
    #[arg(long, requires = "point")]
    index: Option<u64>,
    #[arg(long, conflicts_with_all = ["point", "index"])]
    check: bool,
}

#[derive(Subcommand, Debug)]
enum HurwitzCommand {
    /// Search for a witness tuple.
    Find {
        profile: PathBuf,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
    },
    /// Minimal transposition factorization of a permutation in cycle notation.
    Factor { cycles: String },
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long)]
    i: usize,
    #[arg(long)]
    j: usize,
    #[arg(long = "A", value_parser = parse_rational_arg, required_unless_present = "sweep")]
    a: Option<Rational>,
    /// `A=p/q..p'/q':points`, evenly spaced, endpoints included.
    #[arg(long, value_parser = parse_sweep)]
    sweep: Option<(Rational, Rational, usize)>,
}

fn parse_rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational number: {s:?}"))
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected two indices like 0,1")?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((p(a)?, p(b)?))
}

fn parse_sweep(s: &str) -> std::result::Result<(Rational, Rational, usize), String> {
    let body = s.strip_prefix("A=").ok_or("sweep must start with A=")?;
    let (range, points) = body.rsplit_once(':').ok_or("expected :points")?;
    let (from, to) = range.split_once("..").ok_or("expected from..to")?;
    let points = points.parse::<usize>().map_err(|e| e.to_string())?;
    Ok((parse_rational_arg(from)?, parse_rational_arg(to)?, points))
}

fn read_profile(path: &PathBuf) -> Result<RamificationProfile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    RamificationProfile::from_json_str(&text)
}

fn io_error(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::BrokenPipe {
        Error::OutputClosed
    } else {
        Error::Output(e.to_string())
    }
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let s = serde_json::to_string_pretty(value).map_err(|e| Error::Output(e.to_string()))?;
    writeln!(out, "{s}").map_err(io_error)
}

fn write_text(out: &mut dyn Write, s: &str) -> Result<()> {
    out.write_all(s.as_bytes()).map_err(io_error)
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Error::OutputClosed) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_MALFORMED
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Lattice { name } => {
            emit(out, &lattice::build_standard(&name)?.summary()?)?;
            Ok(EXIT_OK)
        }
        Command::Validate { profile } => {
            let p = read_profile(&profile)?;
            let check = p.is_calabi_yau();
            let smoothness = check.calabi_yau.then(|| p.smoothness()).transpose()?;
            emit(
                out,
                &json!({
                    "profile": p,
                    "canonical_degree": p.canonical_degree(),
                    "calabi_yau": check.calabi_yau,
                    "reason": check.reason,
                    "smoothness": smoothness,
                }),
            )?;
            Ok(if check.calabi_yau { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Hodge { profiles, csv } => hodge_cmd(&profiles, csv, out),
        Command::Monodromy(args) => {
            if args.check {
                let rel = monodromy::standard_system().check_relations();
                let ok = rel.iter().all(|(_, b)| *b);
                let rows: Vec<_> = rel.iter().map(|(n, b)| json!({"relation": n, "holds": b})).collect();
                emit(out, &rows)?;
                return Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE });
            }
            let (Some(point), Some(index)) = (args.point, args.index) else {
                return Err(Error::Parse("--point and --index are required".into()));
            };
            if index == 0 {
                return Err(Error::Parse("ramification index must be positive".into()));
            }
            emit(out, &monodromy::report(point, index))?;
            Ok(EXIT_OK)
        }
        Command::Hurwitz { command } => hurwitz_cmd(command, out),
        Command::Family(args) => family_cmd(args, out),
        Command::Degenerate { profile, target, parts, witness, budget } => {
            let p = read_profile(&profile)?;
            let report = transitions::degenerate(&p, target, parts)?;
            if !witness {
                emit(out, &report)?;
                return Ok(EXIT_OK);
            }
            let opts = SearchOptions { budget, ..SearchOptions::default() };
            let w = transitions::degeneration_witness(&report, opts, 100_000)?;
            let code = match w {
                transitions::DegenerationWitness::Found { .. } => EXIT_OK,
                transitions::DegenerationWitness::Impossible { .. } => EXIT_NEGATIVE,
                transitions::DegenerationWitness::Inconclusive { .. } => EXIT_INCONCLUSIVE,
            };
            emit(out, &json!({ "report": report, "witness": w }))?;
            Ok(code)
        }
        Command::Enumerate { max_degree, smooth, h21, witness, budget, csv } => {
            let q = EnumerationQuery {
                max_degree,
                require_smooth: smooth,
                fixed_h21: h21,
                require_hurwitz_witness: witness,
                budget,
            };
            let rows = enumerate(&q)?;
            if csv {
                write_text(out, &to_csv(&rows)?)?;
            } else {
                emit(out, &rows)?;
            }
            Ok(EXIT_OK)
        }
        Command::Selftest => {
            let results = selftest::run();
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                let line = format!("[{status}] {:>2} {} ({:.2}s): {}\n", r.id, r.name, r.seconds, r.detail);
                write_text(out, &line)?;
            }
            Ok(if results.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_NEGATIVE })
        }
    }
}

fn hodge_cmd(files: &[PathBuf], csv: bool, out: &mut dyn Write) -> Result<i32> {
    let mut rows = Vec::new();
    let mut code = EXIT_OK;
    for f in files {
        let p = read_profile(f)?;
        let status = HodgeStatus::of(&p);
        if status.data().is_none() {
            code = EXIT_NEGATIVE;
        }
        rows.push((f.display().to_string(), p, status));
    }
    if csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Output(e.to_string());
        w.write_record(["file", "n", "k", "r", "h11", "h21", "euler", "smooth"]).map_err(io)?;
        for (file, p, status) in &rows {
            let cell = |v: Option<i64>| v.map(|v| v.to_string()).unwrap_or_default();
            let h = status.data();
            w.write_record([
                file.clone(),
                p.n().to_string(),
                p.k().to_string(),
                p.r().to_string(),
                cell(h.map(|h| h.h11)),
                cell(h.map(|h| h.h21)),
                cell(h.map(|h| h.euler)),
                (p.m() == p.n()).to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Output(e.to_string()))?;
        write_text(out, &String::from_utf8_lossy(&bytes))?;
    } else {
        let json: Vec<_> = rows
            .iter()
            .map(|(file, p, status)| match status {
                HodgeStatus::Available(h) => json!({"file": file, "profile": p, "hodge": h}),
                HodgeStatus::Unavailable(why) => json!({"file": file, "profile": p, "error": why}),
            })
            .collect();
        if json.len() == 1 {
            emit(out, &json[0])?;
        } else {
            emit(out, &json)?;
        }
    }
    Ok(code)
}

fn hurwitz_cmd(cmd: HurwitzCommand, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        HurwitzCommand::Find { profile, budget, max_degree } => {
            let p = read_profile(&profile)?;
            let outcome = hurwitz::find_cover(&p, SearchOptions { budget, max_degree })?;
            emit(out, &json!({ "profile": p, "search": outcome }))?;
            Ok(match outcome {
                SearchOutcome::Found { .. } => EXIT_OK,
                SearchOutcome::NotFound { .. } => EXIT_NEGATIVE,
                SearchOutcome::Inconclusive { .. } => EXIT_INCONCLUSIVE,
            })
        }
        HurwitzCommand::Factor { cycles } => {
            let sigma = Permutation::parse_cycles(&cycles, None)?;
            let factors = hurwitz::min_transposition_factorization(&sigma);
            emit(
                out,
                &json!({
                    "permutation": sigma.to_string(),
                    "degree": sigma.degree(),
                    "length": factors.len(),
                    "factorization": factors.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
            )?;
            Ok(EXIT_OK)
        }
    }
}

fn family_cmd(args: FamilyArgs, out: &mut dyn Write) -> Result<i32> {
    if let Some((from, to, points)) = args.sweep {
        let grid = family::sweep_grid(&from, &to, points)?;
        let rows = family::sweep(args.i, args.j, &grid)?;
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Output(e.to_string());
        w.write_record(["A", "critical_values", "collides"]).map_err(io)?;
        for r in rows {
            let values: Vec<String> = r
                .critical_values
                .iter()
                .map(|v| match v {
                    family::Enclosure::Exact(q) => fmt_rational(q),
                    family::Enclosure::Interval(iv) => {
                        format!("[{},{}]", fmt_rational(&iv.lo), fmt_rational(&iv.hi))
                    }
                })
                .collect();
            w.write_record([fmt_rational(&r.a), values.join(" "), r.collides.to_string()])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Output(e.to_string()))?;
        write_text(out, &String::from_utf8_lossy(&bytes))?;
        return Ok(EXIT_OK);
    }
    let a = args.a.expect("clap requires --A without --sweep");
    let f = family::build_ij_family(args.i, args.j, &a)?;
    let width = roots::default_width();
    let critical = family::critical_values(&f, &width);
    let collision = family::detect_quarter_collision(&f, &width);
    let profile = f.profile_with(vec![1; f.degree()])?;
    emit(
        out,
        &json!({
            "map": f,
            "generic_profile": profile,
            "h21": hodge::h21_closed_form(&profile).ok(),
            "critical": critical,
            "collision": collision,
        }),
    )?;
    Ok(EXIT_OK)
}

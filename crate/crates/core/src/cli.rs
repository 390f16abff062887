//! Command-line front end. Every command prints one JSON object (or JSON
//! lines for record streams) on stdout and diagnostics on stderr.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure,
//! 3 internal error.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::cycint::{CycInt, FieldCtx};
use crate::cycunits::{epsilon, unit_product_check, varpi};
use crate::error::Error;
use crate::harness::{self, ScanRecord};
use crate::par::{self, Exec};
use crate::powsym::symbol;
use crate::regulab::{h_minus_eval, irregular_pairs, vandiver_witness};
use crate::resfield::{split_prime, IdealJson, PrimeIdealRep, Sign};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "cyclores",
    version,
    about = "Exact computations in the p-th cyclotomic field"
)]
struct Cli {
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true, env = "CYCLORES_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Prime ideals above q.
    Split {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
    /// Power residue symbol (alpha / ideal) as an exponent of zeta.
    Symbol {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        /// Image of zeta: an integer for f = 1, comma-separated residue
        /// coefficients (low to high) for f > 1.
        #[arg(long)]
        w: String,
        /// Defining polynomial of the residue field for f > 1,
        /// comma-separated coefficients low to high.
        #[arg(long)]
        modulus: Option<String>,
        /// JSON array of p-1 power-basis coefficients.
        #[arg(long)]
        alpha: String,
    },
    /// The units varpi_a and epsilon_a with their norms.
    Units {
        #[arg(long)]
        p: u64,
    },
    /// Irregular pairs (p, k).
    Irregular {
        #[arg(long)]
        p: u64,
    },
    /// Relative class number.
    Hminus {
        #[arg(long)]
        p: u64,
        /// Fixed working precision instead of the adaptive search.
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Searches for a nontrivial symbol of the eigencomponent unit.
    Vandiver {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 10)]
        candidates: usize,
    },
    /// Factors (x^p ± y^p)/(x ± y) and records the symbol table at each q.
    Scan {
        #[arg(long)]
        p: u64,
        #[arg(
            long,
            allow_hyphen_values = true,
            requires = "y",
            conflicts_with = "bound"
        )]
        x: Option<BigInt>,
        #[arg(long, allow_hyphen_values = true, requires = "x")]
        y: Option<BigInt>,
        /// Sweep all coprime pairs with |x|, |y| <= bound instead.
        #[arg(long, conflicts_with = "x")]
        bound: Option<i64>,
        /// plus or minus; sweeps scan both when omitted.
        #[arg(long)]
        sign: Option<Sign>,
        #[arg(long, default_value_t = 1_000_000)]
        trial_bound: u64,
        /// Write JSON lines here and print a summary instead.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-checks every record of a JSON-lines scan file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Symbolic replay of the telescoping chains.
    Telescope {
        #[arg(long, default_value_t = 97)]
        pmax: u64,
    },
    /// Evaluates the Barlow-Abel relations on (x, y, z).
    Barlow {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        x: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        y: BigInt,
        #[arg(long, allow_hyphen_values = true)]
        z: BigInt,
    },
}

enum Failure {
    Lib(Error),
    Io(std::io::Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Io(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) | Error::ContextMismatch { .. } | Error::PrecisionExhausted(_) => {
            EXIT_INTERNAL
        }
        _ => EXIT_USAGE,
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let exec = match cli.jobs {
        Some(j) => {
            par::init_threads(j);
            Exec::from_jobs(j)
        }
        None => Exec::default(),
    };
    match dispatch(cli.command, exec, out) {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INTERNAL
        }
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    writeln!(out, "{v}")?;
    Ok(())
}

fn parse_alpha(ctx: &FieldCtx, s: &str) -> Result<CycInt, Failure> {
    let v: Value =
        serde_json::from_str(s).map_err(|e| Failure::Usage(format!("--alpha is not JSON: {e}")))?;
    Ok(CycInt::from_json(ctx, &v)?)
}

fn split_list(s: &str) -> Vec<String> {
    s.trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

fn ideal_from_args(
    ctx: &FieldCtx,
    q: u64,
    w: &str,
    modulus: Option<&str>,
) -> Result<PrimeIdealRep, Failure> {
    match modulus {
        None => {
            let w: u64 = w.trim().parse().map_err(|_| {
                Failure::Usage(format!(
                    "--w {w:?} is not an integer; pass --modulus for f > 1"
                ))
            })?;
            Ok(PrimeIdealRep::degree_one(ctx, q, w)?)
        }
        Some(m) => {
            let modulus = split_list(m);
            let j = IdealJson {
                q,
                f: modulus.len().saturating_sub(1) as u32,
                w: split_list(w).join(","),
                modulus,
            };
            Ok(PrimeIdealRep::from_json(ctx, &j)?)
        }
    }
}

fn dispatch(cmd: Command, exec: Exec, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Split { p, q } => {
            let ctx = FieldCtx::new(p)?;
            let ideals = split_prime(&ctx, q)?;
            let f = ideals.first().map_or(0, |i| i.f());
            emit(
                out,
                &json!({
                    "p": p,
                    "q": q,
                    "f": f,
                    "g": ideals.len(),
                    "ideals": ideals.iter().map(|i| i.to_json()).collect::<Vec<_>>(),
                }),
            )?;
            Ok(EXIT_OK)
        }
        Command::Symbol {
            p,
            q,
            w,
            modulus,
            alpha,
        } => {
            let ctx = FieldCtx::new(p)?;
            let ideal = ideal_from_args(&ctx, q, &w, modulus.as_deref())?;
            let a = parse_alpha(&ctx, &alpha)?;
            let e = symbol(&a, &ideal)?;
            let j = ideal.to_json();
            let mut v = json!({ "alpha": a.to_json(), "q": q, "w": j.w, "e": e.e() });
            if j.f > 1 {
                v["modulus"] = json!(j.modulus);
            }
            emit(out, &v)?;
            Ok(EXIT_OK)
        }
        Command::Units { p } => {
            let ctx = FieldCtx::new(p)?;
            let family =
                |f: fn(&FieldCtx, u64) -> crate::Result<CycInt>| -> Result<Vec<Value>, Failure> {
                    let items = exec.map_range(1..p, |a| {
                        let u = f(&ctx, a)?;
                        Ok(json!({ "a": a, "coeffs": u.to_json(), "norm": u.norm()?.to_string() }))
                    });
                    items
                        .into_iter()
                        .collect::<crate::Result<Vec<_>>>()
                        .map_err(Failure::from)
                };
            let v = json!({
                "p": p,
                "varpi": family(varpi)?,
                "epsilon": family(epsilon)?,
                "product_identity": unit_product_check(&ctx)?,
            });
            emit(out, &v)?;
            Ok(EXIT_OK)
        }
        Command::Irregular { p } => {
            let pairs = irregular_pairs(p)?;
            let ks: Vec<u64> = pairs.iter().map(|pr| pr.k).collect();
            emit(out, &json!({ "p": p, "regular": ks.is_empty(), "k": ks }))?;
            Ok(EXIT_OK)
        }
        Command::Hminus { p, bits } => {
            let eval = match bits {
                Some(b) => crate::regulab::h_minus_at(p, b, exec)?,
                None => h_minus_eval(p, exec)?,
            };
            let v = json!({
                "p": p,
                "h_minus": eval.value.to_string(),
                "bits": eval.bits,
                "log2_error": eval.log2_error,
                "log2_distance": eval.log2_distance.is_finite().then_some(eval.log2_distance),
                "certified": eval.certified,
            });
            emit(out, &v)?;
            Ok(if eval.certified { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Vandiver { p, k, candidates } => {
            let v = match vandiver_witness(p, k, candidates, exec)? {
                Some(w) => {
                    let mut v = w.to_json();
                    v["status"] = json!("witness");
                    v
                }
                None => {
                    json!({ "p": p, "k": k, "candidates": candidates, "status": "inconclusive" })
                }
            };
            emit(out, &v)?;
            Ok(EXIT_OK)
        }
        Command::Scan {
            p,
            x,
            y,
            bound,
            sign,
            trial_bound,
            out: path,
        } => {
            let ctx = FieldCtx::new(p)?;
            let results = match (x, y, bound) {
                (Some(x), Some(y), None) => {
                    let sign = sign
                        .ok_or_else(|| Failure::Usage("--sign is required with --x/--y".into()))?;
                    vec![harness::scan(&ctx, &x, &y, sign, trial_bound, exec)?]
                }
                (None, None, Some(b)) if b >= 1 => {
                    let all = harness::sweep(&ctx, &harness::coprime_pairs(b), trial_bound, exec)?;
                    all.into_iter()
                        .filter(|r| sign.is_none_or(|s| s == r.sign))
                        .collect()
                }
                _ => {
                    return Err(Failure::Usage(
                        "give either --x and --y, or --bound >= 1".into(),
                    ))
                }
            };
            let lines: Vec<String> = results.iter().flat_map(|r| r.json_lines()).collect();
            match path {
                None => {
                    for l in &lines {
                        writeln!(out, "{l}")?;
                    }
                }
                Some(path) => {
                    let mut f = BufWriter::new(File::create(&path)?);
                    for l in &lines {
                        writeln!(f, "{l}")?;
                    }
                    f.flush()?;
                    let records: usize = results.iter().map(|r| r.records.len()).sum();
                    let partial = results.iter().filter(|r| r.unfactored.is_some()).count();
                    emit(
                        out,
                        &json!({
                            "p": p,
                            "scans": results.len(),
                            "records": records,
                            "partial": partial,
                            "out": path.display().to_string(),
                        }),
                    )?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify { input } => {
            let reader = BufReader::new(File::open(&input)?);
            let mut parsed = Vec::new();
            let mut unfactored = 0usize;
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let v: Value = serde_json::from_str(&line)
                    .map_err(|e| Failure::Usage(format!("line {}: not JSON: {e}", i + 1)))?;
                match v.get("kind").and_then(Value::as_str) {
                    Some("unfactored") => unfactored += 1,
                    _ => parsed.push(ScanRecord::from_json(&v)?),
                }
            }
            let verdicts = exec
                .map(&parsed, harness::verify_record)
                .into_iter()
                .collect::<crate::Result<Vec<_>>>()?;
            let failures = verdicts.iter().filter(|v| !v.pass).count();
            for v in &verdicts {
                emit(out, &serde_json::to_value(v).expect("plain struct"))?;
            }
            emit(
                out,
                &json!({
                    "summary": true,
                    "records": verdicts.len(),
                    "failures": failures,
                    "unfactored": unfactored,
                    "pass": failures == 0,
                }),
            )?;
            Ok(if failures == 0 { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Telescope { pmax } => {
            if pmax < 5 {
                return Err(Failure::Usage("--pmax must be at least 5".into()));
            }
            let sweep = harness::telescope_sweep(pmax, exec)?;
            emit(out, &serde_json::to_value(&sweep).expect("plain struct"))?;
            Ok(if sweep.matches { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Barlow { p, x, y, z } => {
            if p < 3 || !crate::arith::is_prime_u64(p) {
                return Err(Failure::Usage(format!("{p} is not an odd prime")));
            }
            if x == BigInt::from(0) || y == BigInt::from(0) || z == BigInt::from(0) {
                return Err(Failure::Usage("x, y, z must be nonzero".into()));
            }
            let report = harness::barlow_abel_check(p, &x, &y, &z);
            emit(out, &serde_json::to_value(&report).expect("plain struct"))?;
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("cyclores").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn symbol_example() {
        let (code, out, _) = call(&[
            "symbol",
            "--p",
            "5",
            "--q",
            "11",
            "--w",
            "3",
            "--alpha",
            "[2,0,0,0]",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["e"], 4);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(
            call(&[
                "symbol",
                "--p",
                "5",
                "--q",
                "10",
                "--w",
                "3",
                "--alpha",
                "[1,0,0,0]"
            ])
            .0,
            1
        );
        assert_eq!(call(&["split", "--p", "4", "--q", "11"]).0, 1);
        assert_eq!(call(&["frobnicate"]).0, 1);
        assert_eq!(call(&["split", "--p", "5"]).0, 1);
        assert_eq!(call(&["split", "--p", "5", "--q", "11", "--bogus"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn higher_degree_symbol() {
        let (_, out, _) = call(&["split", "--p", "5", "--q", "19"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        let ideal = &v["ideals"][0];
        assert_eq!(ideal["f"], 2);
        let modulus: Vec<String> = ideal["modulus"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c.as_str().unwrap().to_string())
            .collect();
        let w = ideal["w"].as_str().unwrap().to_string();
        let m = modulus.join(",");
        let args = [
            "symbol",
            "--p",
            "5",
            "--q",
            "19",
            "--w",
            &w,
            "--modulus",
            &m,
            "--alpha",
            "[1,1,0,0]",
        ];
        let (code, out, err) = call(&args);
        assert_eq!(code, 0, "{err}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!(v["e"].as_u64().unwrap() < 5);
    }

    #[test]
    fn telescope_matches() {
        let (code, out, _) = call(&["telescope", "--pmax", "31"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["match"], true);
    }

    #[test]
    fn negative_scan_arguments() {
        let (code, out, err) = call(&[
            "scan", "--p", "5", "--x", "-3", "--y", "2", "--sign", "minus",
        ]);
        assert_eq!(code, 0, "{err}");
        assert!(out
            .lines()
            .all(|l| serde_json::from_str::<Value>(l).is_ok()));
    }
}

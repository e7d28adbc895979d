//! `hgkit` command-line tool. Every command prints a JSON report (or CSV rows with
//! `--csv` where supported). Exit status: 0 success, 1 usage or input error,
//! 2 verification failure.

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hgkit::arith::{format_rational, parse_rational, Rational};
use hgkit::covers::{self, KummerCover};
use hgkit::group::{detect_obstructions, parse_group_spec};
use hgkit::local_tame::{self, LocalExtensionSpec};
use hgkit::oracle::{kummer_local_invariants, FiniteField};
use hgkit::strata;
use hgkit::{classify, FiniteGroup};
use serde::Serialize;
use serde_json::{json, Value};

const LEMMA32_HELP: &str = "Primes p <= BOUND with p = 1 mod R and p != 1 mod Q (p != Q): \
split completely in the R-th cyclotomic field and not in the Q-th. Only these cyclotomic \
conditions are computed; a Frobenius condition in an auxiliary field attached to a specific \
cover is not modelled. Q = 2 is rejected.";

#[derive(Parser, Debug)]
#[command(name = "hgkit", version, about = "Hilbert-Grunwald eligibility, tame local Galois data and Kummer specialization checks")]
struct Cli {
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV rows instead of JSON (strata, lemma32-set, tame-pairs, verify-beckmann).
    #[arg(long, global = true)]
    csv: bool,
    /// Seed for the ChaCha20 generator used by sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classification report for a group.
    Classify {
        /// Group spec (C<n>, D<n>, Q<n>, S<n>, A<n>, SD:P,Q,k, X:G*H) or a JSON table file.
        group: String,
    },
    /// Element-level obstructions with witnesses.
    Obstructions { group: String },
    /// Whether a cyclic degree-D extension of Q_q with ramification index E exists.
    LocalCyclic { q: u64, d: u64, e: u64 },
    /// Generating pairs (sigma, tau) with sigma^-1 tau sigma = tau^q.
    TamePairs { group: String, q: u64 },
    /// Local Grunwald feasibility for a group.
    Grunwald {
        group: String,
        /// Local problem `p,e,f[,D=<group>]`, repeatable.
        #[arg(long = "at", value_name = "P,E,F")]
        at: Vec<String>,
        /// JSON array of local problems.
        #[arg(long)]
        batch: Option<String>,
    },
    /// Predicted local invariants of a specialization.
    Specialize {
        /// Cover `d=<int>,m=<int>,c=<rational>`.
        cover: String,
        t0: String,
        p: u64,
    },
    /// Compare predictions with the finite-field oracle over seeded random (t0, p).
    VerifyBeckmann {
        cover: String,
        /// Largest prime sampled.
        #[arg(long, default_value_t = 10_000)]
        primes: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Local invariants of the splitting field of X^D - p^V W.
    Oracle {
        p: u64,
        d: u64,
        v: i64,
        /// Residue of the unit part; comma-separated coefficients over F_p when --base-degree > 1.
        #[arg(allow_hyphen_values = true)]
        w: String,
        /// Degree of the unramified base field over Q_p.
        #[arg(long, default_value_t = 1)]
        base_degree: usize,
    },
    /// Primes p <= BOUND with gcd(D, p - 1) = E.
    Strata {
        d: u64,
        e: u64,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    #[command(about = "Cyclotomic prime set: p = 1 mod R, p != 1 mod Q", long_about = LEMMA32_HELP)]
    Lemma32Set {
        q: u64,
        r: u64,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// Quadratic subfields of Q(sqrt A, sqrt B) in which P splits (1: sqrt A, 2: sqrt B, 3: sqrt AB).
    BiquadSplit {
        #[arg(allow_hyphen_values = true)]
        a: i64,
        #[arg(allow_hyphen_values = true)]
        b: i64,
        p: u64,
    },
    /// Whether a rational is a sum of two rational squares.
    SumTwoSquares {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
}

#[derive(Serialize)]
struct CommandReport {
    command: &'static str,
    inputs: Value,
    result: Value,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

enum Failure {
    Usage(String),
    Verification,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn load_group(spec: &str) -> Result<FiniteGroup, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        return Ok(FiniteGroup::from_json_str(&text)?);
    }
    Ok(parse_group_spec(spec)?)
}

fn emit(command: &'static str, inputs: Value, result: Value, seed: Option<u64>) -> Outcome {
    let report = CommandReport { command, inputs, result, version: env!("CARGO_PKG_VERSION"), seed };
    println!("{}", serde_json::to_string(&report)?);
    Ok(())
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn csv_unsupported(cli: &Cli, command: &str) -> Outcome {
    if cli.csv {
        return Err(Failure::Usage(format!("--csv is not supported by `{command}`")));
    }
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Classify { group } => {
            csv_unsupported(cli, "classify")?;
            let g = load_group(group)?;
            emit("classify", json!({ "group": group }), to_value(&classify(&g)), None)
        }
        Command::Obstructions { group } => {
            csv_unsupported(cli, "obstructions")?;
            let g = load_group(group)?;
            emit("obstructions", json!({ "group": group }), to_value(&detect_obstructions(&g)), None)
        }
        Command::LocalCyclic { q, d, e } => {
            csv_unsupported(cli, "local-cyclic")?;
            let exists = local_tame::cyclic_tame_exists(*q, *d, *e)?;
            emit("local-cyclic", json!({ "q": q, "d": d, "e": e }), json!({ "exists": exists }), None)
        }
        Command::TamePairs { group, q } => {
            let g = load_group(group)?;
            if !hgkit::arith::is_prime(*q) {
                return Err(Failure::Usage(format!("{q} is not prime")));
            }
            let pairs = local_tame::enumerate_tame_pairs(&g, *q);
            if cli.csv {
                println!("sigma,tau");
                for p in &pairs {
                    println!("{},{}", p.sigma, p.tau);
                }
                return Ok(());
            }
            let result = json!({ "count": pairs.len(), "pairs": pairs });
            emit("tame-pairs", json!({ "group": group, "q": q }), result, None)
        }
        Command::Grunwald { group, at, batch } => {
            csv_unsupported(cli, "grunwald")?;
            let g = load_group(group)?;
            let mut problems = Vec::new();
            for item in at {
                problems.push(parse_at(item)?);
            }
            if let Some(path) = batch {
                problems.extend(LocalExtensionSpec::parse_batch(&std::fs::read_to_string(path)?)?);
            }
            if problems.is_empty() {
                return Err(Failure::Usage("give at least one --at or --batch".into()));
            }
            let report = local_tame::grunwald_feasible(&g, &problems)?;
            emit("grunwald", json!({ "group": group, "problems": problems }), to_value(&report), None)
        }
        Command::Specialize { cover, t0, p } => {
            csv_unsupported(cli, "specialize")?;
            let c: KummerCover = cover.parse()?;
            let t: Rational = parse_rational(t0)?;
            let prediction = covers::predict_specialization(&c, &t, *p)?;
            let result = json!({
                "branch_data": c.branch_data(),
                "prediction": prediction,
            });
            emit("specialize", json!({ "cover": c.to_string(), "t0": format_rational(&t), "p": p }), result, None)
        }
        Command::VerifyBeckmann { cover, primes, samples } => verify_beckmann(cli, cover, *primes, *samples),
        Command::Oracle { p, d, v, w, base_degree } => {
            csv_unsupported(cli, "oracle")?;
            let field = FiniteField::new(*p, *base_degree)?;
            let coeffs = w
                .split(',')
                .map(|c| c.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Failure::Usage(format!("bad residue `{w}`")))?;
            let element = if coeffs.len() == 1 {
                field.from_int(coeffs[0])
            } else {
                let reduced: Vec<u64> = coeffs.iter().map(|&c| c.rem_euclid(*p as i64) as u64).collect();
                field.from_coeffs(&reduced)?
            };
            let inv = kummer_local_invariants(&field, *d, *v, &element)?;
            let inputs = json!({ "p": p, "d": d, "v": v, "w": coeffs, "base_degree": base_degree });
            emit("oracle", inputs, to_value(&inv), None)
        }
        Command::Strata { d, e, bound } => {
            let s = strata::enumerate_stratum(*d, *e, *bound)?;
            if cli.csv {
                for p in &s.primes {
                    println!("{p}");
                }
                return Ok(());
            }
            emit("strata", json!({ "d": d, "e": e, "bound": bound }), to_value(&s), None)
        }
        Command::Lemma32Set { q, r, bound } => {
            let primes = strata::lemma32_prime_set(*q, *r, *bound)?;
            if cli.csv {
                for p in &primes {
                    println!("{p}");
                }
                return Ok(());
            }
            emit("lemma32-set", json!({ "q": q, "r": r, "bound": bound }), json!({ "primes": primes }), None)
        }
        Command::BiquadSplit { a, b, p } => {
            csv_unsupported(cli, "biquad-split")?;
            let split = strata::biquadratic_split(*a, *b, *p)?;
            emit("biquad-split", json!({ "a": a, "b": b, "p": p }), json!({ "split": split }), None)
        }
        Command::SumTwoSquares { a } => {
            csv_unsupported(cli, "sum-two-squares")?;
            let x = parse_rational(a)?;
            let r = local_tame::c4_embeddable_quadratic(&x)?;
            emit("sum-two-squares", json!({ "a": format_rational(&x) }), to_value(&r), None)
        }
    }
}

/// `p,e,f[,D=<group>]`
fn parse_at(item: &str) -> Result<LocalExtensionSpec, Failure> {
    let (head, group) = match item.find("D=") {
        Some(i) => (item[..i].trim_end_matches(','), Some(&item[i..])),
        None => (item, None),
    };
    let nums: Vec<&str> = head.split(',').map(str::trim).collect();
    if nums.len() != 3 {
        return Err(Failure::Usage(format!("--at expects p,e,f[,D=<group>], got `{item}`")));
    }
    let mut text = format!("p={},e={},f={}", nums[0], nums[1], nums[2]);
    if let Some(g) = group {
        text.push(',');
        text.push_str(g);
    }
    Ok(text.parse()?)
}

fn verify_beckmann(cli: &Cli, cover: &str, primes: u64, samples: usize) -> Outcome {
    let c: KummerCover = cover.parse()?;
    let (reports, summary) = covers::sweep(&c, primes, samples, cli.seed)?;
    if cli.csv {
        println!("t0,p,point,multiplicity,predicted_e,predicted_f,oracle_e,oracle_f,exceptional,agree");
        for r in &reports {
            let point = r.intersection.point.map_or("none".to_string(), |p| format!("{p:?}"));
            let pf = r.predicted_f.map_or(String::new(), |f| f.to_string());
            println!(
                "{},{},{},{},{},{},{},{},{},{}",
                r.t0, r.p, point, r.intersection.multiplicity, r.predicted_e, pf, r.oracle_e, r.oracle_f, r.exceptional, r.agree
            );
        }
    } else {
        for r in &reports {
            println!("{}", serde_json::to_string(r)?);
        }
        let mut result = json!({ "summary": summary });
        if c.d % 2 == 1 && hgkit::arith::is_prime_power(c.d) {
            result["stratum_law"] = to_value(&strata::degree_law_report(c.d, primes)?);
        }
        let inputs = json!({ "cover": c.to_string(), "primes": primes, "samples": samples, "rng": "ChaCha20" });
        emit("verify-beckmann", inputs, result, Some(cli.seed))?;
    }
    if summary.disagree > 0 {
        return Err(Failure::Verification);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => {
            eprintln!("verification failed: non-exceptional disagreements found");
            ExitCode::from(2)
        }
    }
}

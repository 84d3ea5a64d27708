//! Command-line front end: argument definitions, dispatch, JSON rendering and
//! the exit-code contract.
//!
//! Exit codes: 0 success, 1 internal error or check violation, 2 domain error,
//! 3 undetermined (the input does not carry enough information).

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde_json::{json, Value};

use crate::algebra::padic::parse_rational;
use crate::algebra::{Field, PadicScalar};
use crate::checks::{run_suite, CheckConfig, Suite};
use crate::corresp::{
    galois_to_gl2, gl2_to_galois, reduce_crystalline, Coefficient, CrystallineParams,
};
use crate::error::{Error, Result};
use crate::reps::{canonical_pi, canonical_rho, ind_omega2, pi_supersingular_orbit, rho_orbit};
use crate::reps::{GaloisRep, Gss, MulCharacter};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "modpll",
    version,
    about = "Mod-p local Langlands computations for GL2(Qp)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduce a crystalline representation V_{k,a_p} mod p.
    Reduce(ReduceArgs),
    /// Apply the mod-p correspondence in either direction.
    Correspond(CorrespondArgs),
    /// Run property suites and report per-property counters.
    Check(CheckArgs),
    /// Canonical form and intertwining orbit of a parameter triple.
    Canonicalize(CanonArgs),
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub k: i64,
    /// `n`, `n/d`, or a JSON list of `[exponent, digit]` pairs in powers of pi.
    #[arg(long, allow_hyphen_values = true)]
    pub ap: String,
    /// Ramification index of `Q_p(pi)`, with `pi^e = p`.
    #[arg(long, default_value_t = 1)]
    pub e: u8,
    /// Forget everything about `a_p` except its valuation.
    #[arg(long)]
    pub val_only: bool,
    /// Number of pi-adic digits carried.
    #[arg(long, default_value_t = 60)]
    pub precision: i64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    G2p,
    P2g,
}

#[derive(Args, Debug)]
pub struct CorrespondArgs {
    #[arg(long, value_enum)]
    pub dir: Direction,
    /// A Galois representation (g2p) or a list of GL2 atoms (p2g), as JSON.
    /// The output of the opposite direction is accepted too.
    #[arg(long)]
    pub input: String,
    #[arg(long)]
    pub p: u32,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Comma-separated list of series, tower, amice, reps, corresp, or all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 60)]
    pub precision: i64,
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    #[arg(long, default_value_t = 3)]
    pub level: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Rho,
    Pi,
    #[value(name = "ind-omega2")]
    IndOmega2,
}

#[derive(Args, Debug)]
pub struct CanonArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 0)]
    pub r: u32,
    /// Twisting character, e.g. `w^2*mu(1+t)`.
    #[arg(long, default_value = "1")]
    pub chi: String,
    /// Hecke eigenvalue for `pi`; `0` gives a supersingular.
    #[arg(long, default_value = "0")]
    pub lambda: String,
    /// Exponent of `w_2` for `ind-omega2`.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub h: i64,
}

/// A rendered result: the exit code and the JSON document to print.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub json: Value,
}

impl Outcome {
    /// Pretty JSON with sorted keys.
    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.json).expect("JSON values always serialize")
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UndeterminedValuation(_)
        | Error::InsufficientPrecision(_)
        | Error::InsufficientDigits(_) => EXIT_UNDETERMINED,
        Error::OutOfTableRange(_)
        | Error::NotInImage(_)
        | Error::ReducibleInduction(_)
        | Error::OutOfRange(_)
        | Error::Parse(_)
        | Error::NotPrime(_)
        | Error::UnsupportedDegree(_)
        | Error::UnsupportedRamification(_)
        | Error::NotAUnit(_)
        | Error::DivisionByZero
        | Error::InconsistentProfile(_) => EXIT_DOMAIN,
        _ => EXIT_INTERNAL,
    }
}

fn error_kind(err: &Error) -> String {
    let dbg = format!("{err:?}");
    dbg.split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or("Error")
        .to_string()
}

fn error_outcome(err: &Error) -> Outcome {
    Outcome {
        code: exit_code(err),
        json: json!({
            "schema": "modpll/error/v1",
            "error": error_kind(err),
            "message": err.to_string(),
        }),
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let res = match &cli.command {
        Command::Reduce(a) => reduce(a),
        Command::Correspond(a) => correspond(a),
        Command::Check(a) => check(a),
        Command::Canonicalize(a) => canonicalize(a),
    };
    res.unwrap_or_else(|e| error_outcome(&e))
}

/// Parses the argument vector (including the program name) and runs it.
pub fn run_args<I, T>(args: I) -> std::result::Result<Outcome, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Ok(run(&Cli::try_parse_from(args)?))
}

fn ok(json: Value) -> Result<Outcome> {
    Ok(Outcome {
        code: EXIT_OK,
        json,
    })
}

fn parse_ap(a: &ReduceArgs) -> Result<PadicScalar> {
    let s = a.ap.trim();
    if s.starts_with('[') {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("--ap: {e}")))?;
        let pairs = v
            .as_array()
            .ok_or_else(|| Error::Parse("--ap must be a list of [exponent, digit] pairs".into()))?
            .iter()
            .map(|pair| match (pair[0].as_i64(), pair[1].as_i64()) {
                (Some(j), Some(d)) => Ok((j, d)),
                _ => Err(Error::Parse(format!("--ap: bad pair {pair}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        PadicScalar::from_pi_digits(a.p, a.e, &pairs, a.precision)
    } else {
        let (n, d) = parse_rational(s)?;
        PadicScalar::from_rational(n, d, a.p, a.e, a.precision)
    }
}

fn reduce(a: &ReduceArgs) -> Result<Outcome> {
    Field::kl(a.p)?;
    let exact = parse_ap(a)?;
    let a_p = if a.val_only {
        let v: Ratio<i64> = exact.valuation()?;
        Coefficient::ValuationOnly(v)
    } else {
        Coefficient::Exact(exact)
    };
    let res = reduce_crystalline(&CrystallineParams {
        p: a.p,
        k: a.k,
        a_p,
    })?;
    let mut out = res.to_json();
    out["schema"] = json!("modpll/reduction/v1");
    out["p"] = json!(a.p);
    out["k"] = json!(a.k);
    ok(out)
}

fn parse_json(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("--input: {e}")))
}

fn correspond(a: &CorrespondArgs) -> Result<Outcome> {
    Field::kl(a.p)?;
    let v = parse_json(&a.input)?;
    match a.dir {
        Direction::G2p => {
            let src = v.get("galois").unwrap_or(&v);
            let rho = GaloisRep::from_json(a.p, src)?;
            let pi = galois_to_gl2(&rho)?;
            ok(json!({
                "schema": "modpll/correspond/v1",
                "direction": "g2p",
                "galois": rho.to_json(),
                "gl2": pi.to_json(),
            }))
        }
        Direction::P2g => {
            let src = v.get("gl2").unwrap_or(&v);
            let pi = Gss::from_json(a.p, src)?;
            let rho = gl2_to_galois(&pi)?;
            ok(json!({
                "schema": "modpll/correspond/v1",
                "direction": "p2g",
                "galois": rho.to_json(),
                "gl2": pi.to_json(),
            }))
        }
    }
}

fn check(a: &CheckArgs) -> Result<Outcome> {
    let cfg = CheckConfig {
        p: a.p,
        precision: a.precision,
        depth: a.depth,
        level: a.level,
        seed: a.seed,
        samples: a.samples,
    };
    cfg.validate()?;
    let mut suites = Vec::new();
    for name in a.suite.split(',') {
        for s in Suite::parse(name.trim())? {
            if !suites.contains(&s) {
                suites.push(s);
            }
        }
    }
    let mut reports = Vec::new();
    let mut total = 0;
    for s in suites {
        let rep = run_suite(s, &cfg)?;
        total += rep.violations();
        reports.push(rep.to_json());
    }
    Ok(Outcome {
        code: if total == 0 { EXIT_OK } else { EXIT_INTERNAL },
        json: json!({
            "schema": "modpll/check/v1",
            "p": cfg.p,
            "precision": cfg.precision,
            "depth": cfg.depth,
            "level": cfg.level,
            "seed": cfg.seed,
            "samples": cfg.samples,
            "suites": reports,
            "violations": total,
            "passed": total == 0,
        }),
    })
}

fn orbit_json(orbit: &[(u32, MulCharacter)]) -> Value {
    Value::Array(
        orbit
            .iter()
            .map(|(r, c)| json!({"r": r, "chi": c.to_string()}))
            .collect(),
    )
}

fn canonicalize(a: &CanonArgs) -> Result<Outcome> {
    let f = Field::kl(a.p)?;
    let chi = MulCharacter::parse(a.p, &a.chi)?;
    let (canonical, orbit) = match a.kind {
        Kind::Rho => {
            if a.r > a.p - 1 {
                return Err(Error::OutOfRange(format!("r = {} outside 0..p-1", a.r)));
            }
            (
                canonical_rho(a.r, chi)?.to_json(),
                orbit_json(&rho_orbit(a.r, chi)),
            )
        }
        Kind::IndOmega2 => {
            let rho = ind_omega2(a.h, chi)?;
            let GaloisRep::Irred { r, chi } = rho else {
                unreachable!()
            };
            (rho.to_json(), orbit_json(&rho_orbit(r, chi)))
        }
        Kind::Pi => {
            let lambda = f.parse(&a.lambda)?;
            let gss = canonical_pi(a.r, lambda, chi)?;
            let orbit = if lambda.is_zero() {
                orbit_json(&pi_supersingular_orbit(a.r, chi))
            } else {
                json!([{"r": a.r, "lambda": lambda.to_string(), "chi": chi.to_string()}])
            };
            (gss.to_json(), orbit)
        }
    };
    let kind = match a.kind {
        Kind::Rho => "rho",
        Kind::Pi => "pi",
        Kind::IndOmega2 => "ind-omega2",
    };
    ok(json!({
        "schema": "modpll/canonical/v1",
        "kind": kind,
        "canonical": canonical,
        "orbit": orbit,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &str) -> Outcome {
        run_args(std::iter::once("modpll").chain(args.split_whitespace())).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let o = go("reduce --p 5 --k 4 --ap 5");
        assert_eq!(o.code, 0);
        assert_eq!(o.json["case"], "1");
        assert_eq!(
            o.json["galois"],
            json!({"kind": "irred", "r": 2, "chi": "w^0*mu(1+0*t)"})
        );
        let o = go("reduce --p 5 --k 7 --ap 25");
        assert_eq!(o.json["case"], "2b");
        assert_eq!(
            o.json["galois"],
            json!({"kind": "split", "chars": ["w^1*mu(2+0*t)", "w^1*mu(3+0*t)"]})
        );
        assert_eq!(go("reduce --p 5 --k 12 --ap 5").code, EXIT_DOMAIN);
        assert_eq!(
            go("reduce --p 5 --k 7 --ap 5 --val-only").code,
            EXIT_UNDETERMINED
        );
    }

    #[test]
    fn correspondence_round_trip() {
        let input = r#"{"kind":"irred","r":1,"chi":"1"}"#;
        let o = run_args([
            "modpll",
            "correspond",
            "--dir",
            "g2p",
            "--p",
            "5",
            "--input",
            input,
        ])
        .unwrap();
        assert_eq!(o.code, 0);
        assert_eq!(
            o.json["gl2"],
            json!([{"kind": "supersingular", "r": 1, "chi": "w^0*mu(1+0*t)"}])
        );
        let back = o.json.to_string();
        let o2 = run_args([
            "modpll",
            "correspond",
            "--dir",
            "p2g",
            "--p",
            "5",
            "--input",
            &back,
        ])
        .unwrap();
        assert_eq!(
            o2.json["galois"],
            json!({"kind": "irred", "r": 1, "chi": "w^0*mu(1+0*t)"})
        );
        let lone = r#"[{"kind":"one_dim","chi":"w"}]"#;
        let o3 = run_args([
            "modpll",
            "correspond",
            "--dir",
            "p2g",
            "--p",
            "5",
            "--input",
            lone,
        ])
        .unwrap();
        assert_eq!(o3.code, EXIT_DOMAIN);
        assert_eq!(o3.json["error"], "NotInImage");
    }

    #[test]
    fn canonicalize_examples() {
        let o = go("canonicalize --kind rho --p 5 --r 3 --chi w^1");
        let orbit = o.json["orbit"].as_array().unwrap();
        assert!(orbit.len() <= 4);
        assert!(orbit.contains(&json!({"r": 1, "chi": "w^0*mu(1+0*t)"})));
        let o = go("canonicalize --kind pi --p 5 --r 0 --lambda 1");
        let kinds: Vec<_> = o.json["canonical"]
            .as_array()
            .unwrap()
            .iter()
            .map(|a| a["kind"].clone())
            .collect();
        assert_eq!(kinds, vec![json!("one_dim"), json!("special")]);
        assert_eq!(
            go("canonicalize --kind ind-omega2 --p 5 --h 6").code,
            EXIT_DOMAIN
        );
    }

    #[test]
    fn output_is_deterministic() {
        let a = go("check --suite series,corresp --p 3 --samples 5 --seed 7").render();
        let b = go("check --suite series,corresp --p 3 --samples 5 --seed 7").render();
        assert_eq!(a, b);
        assert!(a.contains("\"schema\": \"modpll/check/v1\""));
    }
}

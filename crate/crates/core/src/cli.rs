//! The `mzv` command line: compute power sums, derive and verify relation
//! sets, expand truncated zeta values, sweep the closed-form families, and
//! dump bulk relation tables.
//!
//! Exit codes: 0 success, 1 usage error, 2 resource budget exceeded,
//! 3 verification failure. Budgets honor the environment overrides
//! `MZV_ENUM_BUDGET` (enumeration cap on q^d) and `MZV_PREC_CAP` (largest
//! accepted truncation order).

use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::Error;
use crate::families::{
    check_large_indices, check_prop1, check_s1_neg_n, family_a1, family_a2, family_a3_q2,
    recursion_small_a,
};
use crate::field::{is_even_mult, FieldCtx};
use crate::polyring::DEFAULT_ENUM_BUDGET;
use crate::powersum::PowerSums;
use crate::relations::{derive_relation, verify_relation_exact};
use crate::zeta::{zeta_trunc, ZetaRequest};

const DEFAULT_PREC_CAP: i64 = 1 << 12;

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_BUDGET: i32 = 2;
const EXIT_VERIFY: i32 = 3;

#[derive(Parser)]
#[command(name = "mzv", about = "Exact power sums, shuffle relations, and multizeta values over Fq[t]", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the power sum S_d(k) exactly.
    Powersum {
        #[command(flatten)]
        field: FieldArgs,
        /// Degree of the monic polynomials being summed.
        #[arg(long)]
        d: u32,
        /// Exponent; negative values give polynomial sums.
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Derive the relation set S(a, b) and optionally verify it exactly.
    Relation {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        /// Comma-separated depths at which to verify, e.g. "1,2,3".
        #[arg(long)]
        verify: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Expand a truncated multizeta value.
    Zeta {
        #[command(flatten)]
        field: FieldArgs,
        /// Comma-separated index tuple, e.g. "1,2".
        #[arg(long)]
        indices: String,
        /// Absolute truncation order in u = 1/t.
        #[arg(long)]
        prec: i64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Sweep a closed-form family against the derivation, or run an
    /// identity check over a range of n.
    Family {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        id: FamilyId,
        /// First index for the recursive family (2 <= a <= p).
        #[arg(long)]
        a: Option<u64>,
        /// Range of b values, e.g. "1..60" or "5".
        #[arg(long)]
        b: Option<String>,
        /// Range of n values for the identity checks, e.g. "1..3".
        #[arg(long)]
        n: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Derive every S(a, b) on a grid and write one JSON relation per line.
    Table {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        a_max: u64,
        #[arg(long)]
        b_max: u64,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Args)]
struct FieldArgs {
    /// Field size q = p^s, validated as a prime power.
    #[arg(long)]
    q: Option<u64>,
    /// Characteristic, as an alternative to --q.
    #[arg(long)]
    p: Option<u64>,
    /// Extension degree, used with --p (default 1).
    #[arg(long)]
    s: Option<u32>,
}

impl FieldArgs {
    fn resolve(&self) -> Result<FieldCtx, Error> {
        let from_ps = |p: u64, s: u32| FieldCtx::new(p, s);
        match (self.q, self.p) {
            (None, None) => {
                Err(Error::InvalidArgument("a field is required: pass --q or --p/--s".into()))
            }
            (None, Some(p)) => from_ps(p, self.s.unwrap_or(1)),
            (Some(q), maybe_p) => {
                let (p, s) = factor_prime_power(q)?;
                if maybe_p.is_some_and(|given| given != p)
                    || self.s.is_some_and(|given| given != s)
                {
                    return Err(Error::InvalidArgument(format!(
                        "--q {q} factors as {p}^{s}, which contradicts --p/--s"
                    )));
                }
                from_ps(p, s)
            }
        }
    }
}

fn factor_prime_power(q: u64) -> Result<(u64, u32), Error> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("q must be at least 2; got {q}")));
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        p = q;
    }
    let mut s = 0;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        s += 1;
    }
    if rest != 1 {
        return Err(Error::InvalidArgument(format!("q = {q} is not a prime power")));
    }
    Ok((p, s))
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyId {
    /// zeta(1) zeta(b) family.
    A1,
    /// zeta(2) zeta(b) family, general p.
    A2,
    /// zeta(3) zeta(b) family at q = 2.
    A3,
    /// Recursive family for 2 <= a <= p (needs --a).
    Small,
    /// S_1(2 q^n - 1) closed form.
    Prop1,
    /// Large-index identity and its single-pair relation.
    Large,
    /// Constant negative power sum S_1(-N) = -1.
    Negn,
}

/// Inclusive range "lo..hi" or a single value.
fn parse_range(text: &str) -> Result<(u64, u64), Error> {
    let bad = || Error::InvalidArgument(format!("malformed range '{text}'; expected lo..hi"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        Ok((lo, hi))
    } else {
        let v: u64 = text.trim().parse().map_err(|_| bad())?;
        if v == 0 {
            return Err(bad());
        }
        Ok((v, v))
    }
}

fn parse_list(text: &str) -> Result<Vec<u64>, Error> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("malformed list entry '{part}'")))
        })
        .collect()
}

fn enum_budget() -> u64 {
    std::env::var("MZV_ENUM_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ENUM_BUDGET)
}

fn prec_cap() -> i64 {
    std::env::var("MZV_PREC_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_PREC_CAP)
}

/// Runs the CLI against explicit arguments (the first is the program name),
/// writing results to `out`. Returns the process exit code.
pub fn run<W: Write>(args: impl IntoIterator<Item = String>, out: &mut W) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Error::InvalidArgument(msg)) => {
            let _ = writeln!(out, "error: {msg}");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            EXIT_BUDGET
        }
    }
}

fn dispatch<W: Write>(cli: Cli, out: &mut W) -> Result<i32, Error> {
    let emit = |out: &mut W, text: String| {
        out.write_all(text.as_bytes())
            .map_err(|e| Error::InvalidArgument(format!("write failed: {e}")))
    };
    match cli.cmd {
        Cmd::Powersum { field, d, k, format } => {
            let ctx = field.resolve()?;
            let mut sums = PowerSums::with_budget(&ctx, enum_budget());
            let value = sums.s_d(d, k)?;
            let text = match format {
                Format::Text => format!("{value}\n"),
                Format::Json => {
                    let payload = json!({
                        "q": ctx.q(), "d": d, "k": k,
                        "numerator": value.num().to_string(),
                        "denominator": value.den().to_string(),
                    });
                    format!("{payload}\n")
                }
            };
            emit(out, text)?;
            Ok(EXIT_OK)
        }
        Cmd::Relation { field, a, b, verify, format } => {
            let ctx = field.resolve()?;
            if a == 0 || b == 0 {
                return Err(Error::InvalidArgument("indices a, b must be positive".into()));
            }
            let rel = derive_relation(&ctx, a, b);
            let depths = verify.as_deref().map(parse_list).transpose()?.unwrap_or_default();
            let mut sums = PowerSums::with_budget(&ctx, enum_budget());
            let mut reports = Vec::new();
            let mut all_ok = true;
            for depth in depths {
                let d = u32::try_from(depth)
                    .map_err(|_| Error::InvalidArgument(format!("depth {depth} out of range")))?;
                let ok = verify_relation_exact(&mut sums, &rel, d)?.holds();
                all_ok &= ok;
                reports.push((d, ok));
            }
            let text = match format {
                Format::Text => {
                    let mut s = format!("S({a},{b}) over F_{}\n", ctx.q());
                    if rel.pairs.is_empty() {
                        s.push_str("pairs: (none)\n");
                    } else {
                        for (f, index) in &rel.pairs {
                            let _ = writeln!(s, "pair: f={f} a_i={index} gap={}", rel.weight() - index);
                        }
                    }
                    for (d, ok) in &reports {
                        let _ = writeln!(s, "verify d={d}: {}", if *ok { "pass" } else { "FAIL" });
                    }
                    s
                }
                Format::Json => {
                    let parity: Vec<_> = rel
                        .pairs
                        .iter()
                        .map(|&(_, index)| {
                            let gap = rel.weight() - index;
                            json!({
                                "a_i": index,
                                "gap": gap,
                                "even": is_even_mult(gap as i64, ctx.q()),
                            })
                        })
                        .collect();
                    let verify: Vec<_> =
                        reports.iter().map(|&(d, ok)| json!({"d": d, "ok": ok})).collect();
                    let payload = json!({
                        "relation": rel,
                        "parity": parity,
                        "verify": verify,
                    });
                    format!("{payload}\n")
                }
            };
            emit(out, text)?;
            Ok(if all_ok { EXIT_OK } else { EXIT_VERIFY })
        }
        Cmd::Zeta { field, indices, prec, format } => {
            let ctx = field.resolve()?;
            let index = parse_list(&indices)?;
            if index.is_empty() || index.contains(&0) {
                return Err(Error::InvalidArgument("indices must be positive".into()));
            }
            if prec < 1 {
                return Err(Error::InvalidArgument("precision must be at least 1".into()));
            }
            if prec > prec_cap() {
                return Err(Error::BudgetExceeded(format!(
                    "precision {prec} exceeds the cap {}",
                    prec_cap()
                )));
            }
            let mut sums = PowerSums::with_budget(&ctx, enum_budget());
            let tail = zeta_trunc(&mut sums, &ZetaRequest::new(index.clone(), prec))?;
            let text = match format {
                Format::Text => format!("{tail}\n"),
                Format::Json => {
                    let payload = json!({
                        "q": ctx.q(),
                        "indices": index,
                        "precision": prec,
                        "value": tail.to_json(),
                    });
                    format!("{payload}\n")
                }
            };
            emit(out, text)?;
            Ok(EXIT_OK)
        }
        Cmd::Family { field, id, a, b, n, format } => {
            let ctx = field.resolve()?;
            let label = match id {
                FamilyId::A1 => "a1",
                FamilyId::A2 => "a2",
                FamilyId::A3 => "a3",
                FamilyId::Small => "small",
                FamilyId::Prop1 => "prop1",
                FamilyId::Large => "large",
                FamilyId::Negn => "negn",
            };
            let mut cases: Vec<(u64, bool)> = Vec::new();
            match id {
                FamilyId::A1 | FamilyId::A2 | FamilyId::A3 | FamilyId::Small => {
                    let range = b.as_deref().ok_or_else(|| {
                        Error::InvalidArgument("family sweeps need --b lo..hi".into())
                    })?;
                    let (lo, hi) = parse_range(range)?;
                    for b in lo..=hi {
                        let generated = match id {
                            FamilyId::A1 => family_a1(&ctx, b),
                            FamilyId::A2 => family_a2(&ctx, b),
                            FamilyId::A3 => family_a3_q2(&ctx, b)?,
                            FamilyId::Small => {
                                let a = a.ok_or_else(|| {
                                    Error::InvalidArgument("--id small needs --a".into())
                                })?;
                                recursion_small_a(&ctx, a, b)?
                            }
                            _ => unreachable!(),
                        };
                        let first = match id {
                            FamilyId::A1 => 1,
                            FamilyId::A2 => 2,
                            FamilyId::A3 => 3,
                            FamilyId::Small => a.unwrap(),
                            _ => unreachable!(),
                        };
                        cases.push((b, generated == derive_relation(&ctx, first, b)));
                    }
                }
                FamilyId::Prop1 | FamilyId::Large | FamilyId::Negn => {
                    let range = n.as_deref().ok_or_else(|| {
                        Error::InvalidArgument("identity checks need --n lo..hi".into())
                    })?;
                    let (lo, hi) = parse_range(range)?;
                    for n in lo..=hi {
                        let n = u32::try_from(n)
                            .map_err(|_| Error::InvalidArgument(format!("n = {n} too large")))?;
                        let ok = match id {
                            FamilyId::Prop1 => check_prop1(&ctx, n)?,
                            FamilyId::Large => check_large_indices(&ctx, n)?,
                            FamilyId::Negn => check_s1_neg_n(&ctx, n)?,
                            _ => unreachable!(),
                        };
                        cases.push((n as u64, ok));
                    }
                }
            }
            let all_ok = cases.iter().all(|&(_, ok)| ok);
            let param = match id {
                FamilyId::Prop1 | FamilyId::Large | FamilyId::Negn => "n",
                _ => "b",
            };
            let text = match format {
                Format::Text => {
                    let mut s = format!("family {label} over F_{}\n", ctx.q());
                    for (v, ok) in &cases {
                        let _ =
                            writeln!(s, "{param}={v}: {}", if *ok { "pass" } else { "FAIL" });
                    }
                    let _ = writeln!(s, "{}/{} pass", cases.iter().filter(|c| c.1).count(), cases.len());
                    s
                }
                Format::Json => {
                    let entries: Vec<_> =
                        cases.iter().map(|&(v, ok)| json!({param: v, "ok": ok})).collect();
                    let payload = json!({
                        "q": ctx.q(),
                        "family": label,
                        "cases": entries,
                        "all_ok": all_ok,
                    });
                    format!("{payload}\n")
                }
            };
            emit(out, text)?;
            Ok(if all_ok { EXIT_OK } else { EXIT_VERIFY })
        }
        Cmd::Table { field, a_max, b_max, out: path } => {
            let ctx = field.resolve()?;
            if a_max == 0 || b_max == 0 {
                return Err(Error::InvalidArgument("grid bounds must be positive".into()));
            }
            let mut buffer = String::new();
            for a in 1..=a_max {
                for b in 1..=b_max {
                    let rel = derive_relation(&ctx, a, b);
                    let line = serde_json::to_string(&rel)
                        .map_err(|e| Error::InvalidArgument(format!("json: {e}")))?;
                    buffer.push_str(&line);
                    buffer.push('\n');
                }
            }
            match path {
                Some(path) => std::fs::write(&path, &buffer).map_err(|e| {
                    Error::InvalidArgument(format!("cannot write '{path}': {e}"))
                })?,
                None => emit(out, buffer)?,
            }
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentTail;
    use crate::polyring::RatFunc;
    use crate::relations::RelationSet;

    fn run_cli(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let full: Vec<String> =
            std::iter::once("mzv".to_string()).chain(args.iter().map(|s| s.to_string())).collect();
        let code = run(full, &mut out);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn powersum_text_output() {
        let (code, out) = run_cli(&["powersum", "--q", "2", "--d", "1", "--k", "1"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "1/(t^2 + t)\n");

        let (code, out) = run_cli(&["powersum", "--q", "2", "--d", "0", "--k", "7"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "1\n");

        // Negative exponents produce polynomials.
        let (code, out) = run_cli(&["powersum", "--q", "3", "--d", "1", "--k", "-2"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "2\n");
    }

    #[test]
    fn powersum_json_round_trips() {
        let (code, out) =
            run_cli(&["powersum", "--q", "3", "--d", "1", "--k", "2", "--format", "json"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["q"], 3);
        let ctx = FieldCtx::new(3, 1).unwrap();
        let num = crate::polyring::FqPoly::parse(&ctx, v["numerator"].as_str().unwrap()).unwrap();
        let den =
            crate::polyring::FqPoly::parse(&ctx, v["denominator"].as_str().unwrap()).unwrap();
        let value = RatFunc::new(num, den);
        assert_eq!(value, crate::powersum::s_d_bruteforce(&ctx, 1, 2).unwrap());
    }

    #[test]
    fn relation_json_schema_and_verify() {
        let (code, out) = run_cli(&[
            "relation", "--q", "2", "--a", "1", "--b", "2", "--verify", "1,2,3", "--format",
            "json",
        ]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["relation"]["pairs"], json!([[1, 2]]));
        assert_eq!(v["verify"].as_array().unwrap().len(), 3);
        assert!(v["verify"].as_array().unwrap().iter().all(|e| e["ok"] == true));
        assert!(v["parity"][0]["even"] == true);

        let rel: RelationSet = serde_json::from_value(v["relation"].clone()).unwrap();
        assert_eq!(rel, RelationSet { q: 2, a: 1, b: 2, pairs: vec![(1, 2)] });
    }

    #[test]
    fn relation_empty_pairs() {
        let (code, out) = run_cli(&["relation", "--q", "2", "--a", "1", "--b", "1"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("pairs: (none)"), "out = {out}");
    }

    #[test]
    fn zeta_has_constant_term_one() {
        let (code, out) =
            run_cli(&["zeta", "--q", "2", "--indices", "2", "--prec", "20", "--format", "json"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["value"]["valuation"], 0);
        assert_eq!(v["value"]["coeffs"][0], 1);
        let ctx = FieldCtx::new(2, 1).unwrap();
        assert!(LaurentTail::from_json(&ctx, &v["value"]).is_ok());

        let (code, out) = run_cli(&["zeta", "--q", "2", "--indices", "1,2", "--prec", "20"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.ends_with("O(u^21)\n"), "out = {out}");
    }

    #[test]
    fn family_sweeps_pass() {
        let (code, out) =
            run_cli(&["family", "--q", "2", "--id", "a3", "--b", "1..20", "--format", "json"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["all_ok"], true);
        assert_eq!(v["cases"].as_array().unwrap().len(), 20);

        let (code, out) = run_cli(&["family", "--q", "3", "--id", "large", "--n", "1..2"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("2/2 pass"), "out = {out}");
    }

    #[test]
    fn table_is_deterministic() {
        let (code1, out1) = run_cli(&["table", "--q", "2", "--a-max", "4", "--b-max", "4"]);
        let (code2, out2) = run_cli(&["table", "--q", "2", "--a-max", "4", "--b-max", "4"]);
        assert_eq!(code1, EXIT_OK);
        assert_eq!(code2, EXIT_OK);
        assert_eq!(out1, out2);
        assert_eq!(out1.lines().count(), 16);
        for line in out1.lines() {
            let rel: RelationSet = serde_json::from_str(line).unwrap();
            rel.check_invariants(2);
        }
    }

    #[test]
    fn exit_codes() {
        // Usage errors.
        assert_eq!(run_cli(&["powersum", "--q", "6", "--d", "1", "--k", "1"]).0, EXIT_USAGE);
        assert_eq!(run_cli(&["powersum", "--d", "1", "--k", "1"]).0, EXIT_USAGE);
        assert_eq!(run_cli(&["nonsense"]).0, EXIT_USAGE);
        assert_eq!(run_cli(&["family", "--q", "2", "--id", "a1"]).0, EXIT_USAGE);
        // Budget exhaustion.
        assert_eq!(run_cli(&["powersum", "--q", "2", "--d", "40", "--k", "5"]).0, EXIT_BUDGET);
        assert_eq!(
            run_cli(&["zeta", "--q", "2", "--indices", "1", "--prec", "100000"]).0,
            EXIT_BUDGET
        );
        // Help is a success.
        assert_eq!(run_cli(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn field_resolution() {
        // --p/--s route and the consistency check.
        let (code, out) = run_cli(&["powersum", "--p", "2", "--s", "2", "--d", "1", "--k", "1"]);
        assert_eq!(code, EXIT_OK);
        assert!(!out.is_empty());
        assert_eq!(
            run_cli(&["powersum", "--q", "4", "--p", "3", "--d", "1", "--k", "1"]).0,
            EXIT_USAGE
        );
        let (code, _) = run_cli(&["powersum", "--q", "4", "--p", "2", "--s", "2", "--d", "1", "--k", "1"]);
        assert_eq!(code, EXIT_OK);
    }

    #[test]
    fn prime_power_factorization() {
        assert_eq!(factor_prime_power(2).unwrap(), (2, 1));
        assert_eq!(factor_prime_power(9).unwrap(), (3, 2));
        assert_eq!(factor_prime_power(32).unwrap(), (2, 5));
        assert!(factor_prime_power(6).is_err());
        assert!(factor_prime_power(1).is_err());
        assert!(factor_prime_power(12).is_err());
    }

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("1..60").unwrap(), (1, 60));
        assert_eq!(parse_range("5").unwrap(), (5, 5));
        assert!(parse_range("0..3").is_err());
        assert!(parse_range("9..2").is_err());
        assert!(parse_range("x").is_err());
    }
}

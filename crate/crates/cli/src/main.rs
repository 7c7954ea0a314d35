//! stacky-count: exact point counts, verification grids, cohomology tables,
//! Chow presentations and counting functions for weighted projective
//! Hom-stacks, with machine-readable output.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use stacky_core::binary_forms::WeightVector;
use stacky_core::finite_field::FieldSpec;
use stacky_core::graded_algebra::{
    jacobian_chern_data, phi_cover_degree, pushforward_powers, wpb_relation, ChernData,
    ChernSummand, ThetaPoly,
};
use stacky_core::spectral_sequence::{genus0_pages, stable_cohomology_table, CohomologyTable};
use stacky_core::stack_count::{
    brute_iso_count, brute_weighted_count, closed_iso_count, closed_weighted_count, CountResult,
    CountValue, DEFAULT_BUDGET,
};
use stacky_core::zeta_trace::{
    batyrev_manin_sum, moduli_lookup, picard_group, trace_count, GroupDescriptor, LPolynomial,
};

#[derive(Parser)]
#[command(name = "stacky-count", version, about = "Exact point counts of weighted projective Hom-stacks over finite fields")]
struct Cli {
    /// Emit JSON on stdout
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV rows for grids and tables
    #[arg(long, global = true)]
    csv: bool,
    /// Worker threads for brute-force enumeration
    #[arg(long, global = true, default_value_t = 1)]
    workers: u64,
    /// Enumeration budget in tuples (default 10^9)
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Brute,
    IsoBrute,
    IsoClosed,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count F_q points of Hom_n(P¹, P(λ))
    Count {
        /// Weights λ as comma-separated positive integers, e.g. 2,4
        #[arg(long)]
        weights: String,
        #[arg(long)]
        n: u64,
        /// Field cardinality as "p" or "p^k"
        #[arg(long)]
        q: String,
        #[arg(long, value_enum)]
        method: Method,
    },
    /// Run closed forms against brute-force oracles over a grid
    Verify {
        /// Grid rows "q:w0,w1,...:n" separated by ';'; defaults to the
        /// built-in verification grid
        #[arg(long)]
        grid: Option<String>,
        /// Comma-separated subset of {weighted, iso}
        #[arg(long, default_value = "weighted,iso")]
        methods: String,
    },
    /// Cohomology table of Hom_n(P¹/curve, P(λ))
    Cohomology {
        #[arg(long, default_value_t = 0)]
        genus: u64,
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        weights: Option<String>,
    },
    /// Chow presentation of the ambient weighted projective bundle
    Chow {
        #[arg(long)]
        weights: String,
        /// "point" or "jacobian:g"
        #[arg(long, default_value = "point")]
        base: String,
        #[arg(long)]
        n: u64,
        /// How many pushforward entries beyond π_*ζ^{R−1} to emit
        #[arg(long, default_value_t = 4)]
        extra: usize,
    },
    /// Evaluate the Lefschetz trace of a cohomology table file
    Zeta {
        /// Path to a JSON cohomology table
        #[arg(long)]
        table: String,
        #[arg(long)]
        q: u64,
        /// L-polynomial coefficients "1,-a,q" (integers)
        #[arg(long)]
        lpoly: Option<String>,
    },
    /// Batyrev–Manin counting function for a named moduli stack
    Bmanin {
        #[arg(long)]
        moduli: String,
        #[arg(long)]
        q: u64,
        #[arg(long = "B")]
        b: String,
    },
    /// Picard group of Hom_n(P¹, P(λ))
    Picard {
        #[arg(long)]
        weights: String,
        #[arg(long)]
        n: u64,
    },
}

fn parse_weights(s: &str) -> Result<WeightVector, String> {
    let lambdas: Result<Vec<u64>, _> = s.split(',').map(|t| t.trim().parse::<u64>()).collect();
    let lambdas = lambdas.map_err(|e| format!("bad weights {s:?}: {e}"))?;
    WeightVector::new(lambdas).map_err(|e| e.to_string())
}

fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn count_value_string(v: &CountValue) -> String {
    match v {
        CountValue::Exact(r) => rational_string(r),
        CountValue::Polynomial(p) => p.to_string(),
    }
}

fn theta_string(t: &ThetaPoly) -> String {
    if t.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, c) in t.coeffs.iter().enumerate() {
        if c == &BigRational::from_integer(BigInt::from(0)) {
            continue;
        }
        if !out.is_empty() {
            out.push_str(" + ");
        }
        match i {
            0 => {
                let _ = write!(out, "{}", rational_string(c));
            }
            1 => {
                let _ = write!(out, "{}*theta", rational_string(c));
            }
            _ => {
                let _ = write!(out, "{}*theta^{}", rational_string(c), i);
            }
        }
    }
    out
}

fn theta_json(t: &ThetaPoly) -> serde_json::Value {
    json!(t
        .coeffs
        .iter()
        .map(|c| format!("{}/{}", c.numer(), c.denom()))
        .collect::<Vec<_>>())
}

#[derive(Serialize)]
struct VerifyRow {
    q: u64,
    weights: Vec<u64>,
    n: u64,
    method: String,
    closed: Option<String>,
    oracle: Option<String>,
    #[serde(rename = "match")]
    matches: Option<bool>,
    skipped: Option<String>,
    millis: u128,
}

#[derive(Serialize)]
struct VerificationReport {
    rows: Vec<VerifyRow>,
    matched: usize,
    mismatched: usize,
    skipped: usize,
}

fn default_grid() -> Vec<(u64, Vec<u64>, u64)> {
    vec![
        (2, vec![1, 1], 1),
        (3, vec![1, 1], 1),
        (3, vec![1, 1], 2),
        (3, vec![1, 2], 1),
        (5, vec![1, 2], 1),
        (3, vec![2, 4], 1),
        (5, vec![1, 1, 1], 1),
        (7, vec![1, 1], 1),
        (3, vec![1, 2, 2], 1),
        (5, vec![2, 2], 1),
    ]
}

fn parse_grid(s: &str) -> Result<Vec<(u64, Vec<u64>, u64)>, String> {
    let mut out = Vec::new();
    for row in s.split(';') {
        let parts: Vec<&str> = row.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("bad grid row {row:?}; expected q:w0,w1:n"));
        }
        let q = parts[0].trim().parse::<u64>().map_err(|e| e.to_string())?;
        let lambdas: Result<Vec<u64>, _> =
            parts[1].split(',').map(|t| t.trim().parse::<u64>()).collect();
        let n = parts[2].trim().parse::<u64>().map_err(|e| e.to_string())?;
        out.push((q, lambdas.map_err(|e| e.to_string())?, n));
    }
    Ok(out)
}

fn run_verify(
    grid: Vec<(u64, Vec<u64>, u64)>,
    methods: &str,
    workers: u64,
    budget: u128,
    json_out: bool,
    csv_out: bool,
) -> Result<ExitCode, String> {
    let do_weighted = methods.split(',').any(|m| m.trim() == "weighted");
    let do_iso = methods.split(',').any(|m| m.trim() == "iso");
    let mut rows = Vec::new();
    for (q, lambdas, n) in grid {
        let w = WeightVector::new(lambdas.clone()).map_err(|e| e.to_string())?;
        let spec = FieldSpec::from_q(q).map_err(|e| e.to_string())?;
        let mut variants: Vec<(&str, bool)> = Vec::new();
        if do_weighted {
            variants.push(("weighted", true));
        }
        if do_iso {
            variants.push(("iso", false));
        }
        for (name, weighted) in variants {
            let start = Instant::now();
            let closed = if weighted {
                closed_weighted_count(q, &w, n)
            } else {
                closed_iso_count(q, &w, n)
            };
            let oracle = if weighted {
                brute_weighted_count(&spec, &w, n, workers, budget)
            } else {
                brute_iso_count(&spec, &w, n, workers, budget)
            };
            let row = match (closed, oracle) {
                (Ok(c), Ok(o)) => {
                    let cv = count_value_string(&c.value);
                    let ov = count_value_string(&o.value);
                    let m = c.value == o.value;
                    VerifyRow {
                        q,
                        weights: lambdas.clone(),
                        n,
                        method: name.to_string(),
                        closed: Some(cv),
                        oracle: Some(ov),
                        matches: Some(m),
                        skipped: None,
                        millis: start.elapsed().as_millis(),
                    }
                }
                (c, o) => {
                    let err = c.err().or(o.err()).unwrap();
                    VerifyRow {
                        q,
                        weights: lambdas.clone(),
                        n,
                        method: name.to_string(),
                        closed: None,
                        oracle: None,
                        matches: None,
                        skipped: Some(err.to_string()),
                        millis: start.elapsed().as_millis(),
                    }
                }
            };
            rows.push(row);
        }
    }
    let matched = rows.iter().filter(|r| r.matches == Some(true)).count();
    let mismatched = rows.iter().filter(|r| r.matches == Some(false)).count();
    let skipped = rows.iter().filter(|r| r.skipped.is_some()).count();
    let report = VerificationReport {
        rows,
        matched,
        mismatched,
        skipped,
    };
    if json_out {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else if csv_out {
        println!("q,weights,n,method,closed,oracle,match,skipped");
        for r in &report.rows {
            println!(
                "{},{},{},{},{},{},{},{}",
                r.q,
                r.weights
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join("|"),
                r.n,
                r.method,
                r.closed.clone().unwrap_or_default(),
                r.oracle.clone().unwrap_or_default(),
                r.matches.map(|m| m.to_string()).unwrap_or_default(),
                r.skipped.clone().unwrap_or_default(),
            );
        }
    } else {
        for r in &report.rows {
            let status = match (r.matches, &r.skipped) {
                (Some(true), _) => "ok".to_string(),
                (Some(false), _) => "MISMATCH".to_string(),
                (_, Some(e)) => format!("skipped ({e})"),
                _ => unreachable!(),
            };
            println!(
                "q={} weights={:?} n={} {}: closed={} oracle={} [{}]",
                r.q,
                r.weights,
                r.n,
                r.method,
                r.closed.as_deref().unwrap_or("-"),
                r.oracle.as_deref().unwrap_or("-"),
                status
            );
        }
        println!(
            "{} matched, {} mismatched, {} skipped",
            matched, mismatched, skipped
        );
    }
    Ok(if mismatched > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn count_json(
    q: &str,
    w: &WeightVector,
    n: u64,
    method: &str,
    r: &CountResult,
) -> serde_json::Value {
    json!({
        "q": q,
        "weights": w.lambdas(),
        "n": n,
        "method": method,
        "value": count_value_string(&r.value),
        "tuple_count": r.tuple_count.as_ref().map(|t| t.to_string()),
        "wild_characteristic": r.wild_characteristic,
    })
}

fn print_table(table: &CohomologyTable, json_out: bool, csv_out: bool) {
    if json_out {
        println!("{}", serde_json::to_string_pretty(table).unwrap());
    } else if csv_out {
        println!("i,kind,jac,sym,j,mult");
        for g in &table.groups {
            for c in &g.classes {
                let (jac, sym, j, mult) = c.parts();
                let kind = match jac + sym {
                    0 => "tate",
                    1 => "curveH1",
                    _ => "curveClass",
                };
                println!("{},{},{},{},{},{}", g.i, kind, jac, sym, j, mult);
            }
        }
    } else {
        println!("dimension: {}", table.dimension);
        if let Some(c) = table.stable_cutoff {
            println!("stable below total degree: {c}");
        }
        for g in &table.groups {
            let classes: Vec<String> = g
                .classes
                .iter()
                .map(|c| {
                    let (jac, sym, j, mult) = c.parts();
                    match (jac, sym) {
                        (0, 0) => format!("Tate({j}) x{mult}"),
                        (1, 0) | (0, 1) => format!("CurveH1({j}) x{mult}"),
                        _ => format!("Curve[jac={jac},sym={sym}]({j}) x{mult}"),
                    }
                })
                .collect();
            println!("H^{}: {}", g.i, classes.join(", "));
        }
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    match cli.cmd {
        Cmd::Count {
            weights,
            n,
            q,
            method,
        } => {
            let w = parse_weights(&weights)?;
            let spec = FieldSpec::parse(&q).map_err(|e| e.to_string())?;
            let (name, result) = match method {
                Method::Closed => (
                    "closed",
                    closed_weighted_count(spec.q, &w, n).map_err(|e| e.to_string())?,
                ),
                Method::Brute => (
                    "brute",
                    brute_weighted_count(&spec, &w, n, cli.workers, budget)
                        .map_err(|e| e.to_string())?,
                ),
                Method::IsoClosed => (
                    "iso-closed",
                    closed_iso_count(spec.q, &w, n).map_err(|e| e.to_string())?,
                ),
                Method::IsoBrute => (
                    "iso-brute",
                    brute_iso_count(&spec, &w, n, cli.workers, budget)
                        .map_err(|e| e.to_string())?,
                ),
            };
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&count_json(&q, &w, n, name, &result)).unwrap()
                );
            } else {
                println!("{}", count_value_string(&result.value));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { grid, methods } => {
            let grid = match grid {
                Some(s) => parse_grid(&s)?,
                None => default_grid(),
            };
            run_verify(grid, &methods, cli.workers, budget, cli.json, cli.csv)
        }
        Cmd::Cohomology {
            genus,
            big_n,
            n,
            weights,
        } => {
            let w = weights.map(|s| parse_weights(&s)).transpose()?;
            let table = if genus == 0 {
                let (_, _, t) =
                    genus0_pages(big_n, n, w.as_ref()).map_err(|e| e.to_string())?;
                t
            } else {
                let w = w.unwrap_or_else(|| WeightVector::new(vec![1; big_n + 1]).unwrap());
                stable_cohomology_table(genus, big_n, &w, n).map_err(|e| e.to_string())?
            };
            print_table(&table, cli.json, cli.csv);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Chow {
            weights,
            base,
            n,
            extra,
        } => {
            let w = parse_weights(&weights)?;
            let data: ChernData = if base == "point" {
                ChernData {
                    g: 0,
                    summands: vec![
                        ChernSummand {
                            rank: 1,
                            chern: vec![],
                        };
                        w.len()
                    ],
                    eta: w.etas(),
                }
            } else if let Some(g) = base.strip_prefix("jacobian:") {
                let g: u64 = g.parse().map_err(|_| format!("bad base {base:?}"))?;
                jacobian_chern_data(g, n, &w).map_err(|e| e.to_string())?
            } else {
                return Err(format!("bad base {base:?}; expected point or jacobian:g"));
            };
            let rel = wpb_relation(&data, &w).map_err(|e| e.to_string())?;
            let push = pushforward_powers(&rel, extra);
            let phi = phi_cover_degree(&w);
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "weights": w.lambdas(),
                        "n": n,
                        "relation_degree": rel.degree,
                        "zeta_normalization": rel.zeta_normalization,
                        "relation_coefficients": rel.coefficients.iter().map(theta_json).collect::<Vec<_>>(),
                        "pushforwards": push.iter().map(theta_json).collect::<Vec<_>>(),
                        "phi_cover_degree": format!("{}/{}", phi.numer(), phi.denom()),
                    }))
                    .unwrap()
                );
            } else {
                println!("relation degree R = {}", rel.degree);
                println!("zeta normalization L = {}", rel.zeta_normalization);
                for (i, c) in rel.coefficients.iter().enumerate() {
                    println!("c^eta_{} = {}", i + 1, theta_string(c));
                }
                for (m, s) in push.iter().enumerate() {
                    println!("pi_* zeta^(R-1+{m}) = {}", theta_string(s));
                }
                println!("phi cover degree = {}", rational_string(&phi));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Zeta { table, q, lpoly } => {
            let text = std::fs::read_to_string(&table)
                .map_err(|e| format!("cannot read {table}: {e}"))?;
            let table: CohomologyTable =
                serde_json::from_str(&text).map_err(|e| format!("bad table JSON: {e}"))?;
            let lp = lpoly
                .map(|s| {
                    let coeffs: Result<Vec<BigInt>, _> =
                        s.split(',').map(|t| t.trim().parse::<BigInt>()).collect();
                    LPolynomial::new(q, coeffs.map_err(|e| e.to_string())?)
                        .map_err(|e| e.to_string())
                })
                .transpose()?;
            let v = trace_count(&table, q, lp.as_ref()).map_err(|e| e.to_string())?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "q": q.to_string(),
                        "value": rational_string(&v),
                    }))
                    .unwrap()
                );
            } else {
                println!("{}", rational_string(&v));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bmanin { moduli, q, b } => {
            let spec = moduli_lookup(&moduli).map_err(|e| e.to_string())?;
            let b: BigInt = b.parse().map_err(|e| format!("bad B: {e}"))?;
            let v = batyrev_manin_sum(&spec, q, &b).map_err(|e| e.to_string())?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "moduli": spec.name,
                        "weights": spec.weights.lambdas(),
                        "q": q.to_string(),
                        "B": b.to_string(),
                        "value": v.to_string(),
                    }))
                    .unwrap()
                );
            } else {
                println!("{v}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Picard { weights, n } => {
            let w = parse_weights(&weights)?;
            let (group, resultant) = picard_group(&w, n);
            if cli.json {
                let desc = match group {
                    GroupDescriptor::FiniteCyclic(k) => json!({"kind": "finite_cyclic", "order": k.to_string()}),
                    GroupDescriptor::InfiniteCyclic => json!({"kind": "infinite_cyclic"}),
                };
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "weights": w.lambdas(),
                        "n": n,
                        "picard": desc,
                        "resultant_degree": resultant.map(|d| d.to_string()),
                    }))
                    .unwrap()
                );
            } else {
                match group {
                    GroupDescriptor::FiniteCyclic(k) => println!("Z/{k}"),
                    GroupDescriptor::InfiniteCyclic => println!("Z"),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

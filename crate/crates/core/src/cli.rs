//! Command-line front end.
//!
//! [`execute`] does all the work and returns the exit code together with the
//! text destined for stdout and stderr, so the binary is a thin wrapper and the
//! behaviour is testable in-process.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::entropy::{
    self, entropy_closed, estimate_growth_with_twist, kt_check, mass_growth_estimate,
    rational_to_f64, slope_fixed_point, twist_margin_met,
};
use crate::error::{Error, Result};
use crate::fm_group::{
    char_poly3, expected_char_poly, factor_isotropic_pair, make_fm, power, power_closed,
    rep3_matrix, theta_square, FMMatrix,
};
use crate::mukai_lattice::{b_form, iota, lemma_d_search, pairing, MukaiVector, SurfaceParams};
use crate::sampling;
use crate::sympow::{mat2, ppav_entropy, sym_power};

pub const THREADS_ENV: &str = "MUKAI_ENTROPY_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Closed,
    Estimate,
    Sequence,
    Verify,
    Sympow,
    LemmaD,
    Factor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Entropy of Fourier-Mukai autoequivalences on abelian surfaces with
/// Picard number one.
#[derive(Debug, Parser)]
#[command(name = "mukai-entropy", version)]
pub struct RunConfig {
    /// Half the self-intersection of the ample generator, (H^2) = 2D.
    #[arg(long = "D", default_value_t = 1)]
    pub d: u64,
    /// Matrix entries a,b,c,d of [[a, b*sqrt(D)], [c*sqrt(D), d]].
    #[arg(long, default_value = "2,1,1,1", allow_hyphen_values = true)]
    pub matrix: String,
    #[arg(long, value_enum, default_value = "closed")]
    pub mode: Mode,
    /// Grid of t values as min:max:steps.
    #[arg(long = "t", default_value = "0:0:1", allow_hyphen_values = true)]
    pub t_grid: String,
    #[arg(long, default_value_t = 40)]
    pub n_max: u64,
    /// Twist m of the line-bundle generators (default: chosen automatically).
    #[arg(long)]
    pub m: Option<u64>,
    /// Degree of the symmetric power in sympow mode.
    #[arg(long, default_value_t = 2)]
    pub sym_d: u32,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Seed for the randomized checks in verify mode.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Starting exponent k for lemma-d (default: all |k| <= 3).
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    /// Box size for lemma-d.
    #[arg(long, default_value_t = 30)]
    pub bound: i64,
    /// First Mukai vector r,d,a for factor mode.
    #[arg(long, allow_hyphen_values = true)]
    pub v1: Option<String>,
    /// Second Mukai vector r,d,a for factor mode.
    #[arg(long, allow_hyphen_values = true)]
    pub v2: Option<String>,
    /// Point re,im of the upper half plane for the mass-growth diagnostic.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub z: String,
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the requested mode.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                };
            }
            let first = e
                .to_string()
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ")
                .to_string();
            return failure(&Error::InvalidInput(first));
        }
    };
    match thread_pool() {
        Ok(Some(pool)) => pool.install(|| run(&config)),
        Ok(None) => run(&config),
        Err(e) => failure(&e),
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Error::InvalidInput(format!("{THREADS_ENV}={raw} is not a positive integer"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| Error::InvalidInput(e.to_string()))
}

fn failure(e: &Error) -> Outcome {
    let msg = e.to_string().replace('\n', " ");
    Outcome {
        code: 2,
        stdout: String::new(),
        stderr: format!("error: {}: {msg}\n", e.kind()),
    }
}

pub fn run(config: &RunConfig) -> Outcome {
    let mut warnings = String::new();
    let result = match config.mode {
        Mode::Closed => run_closed(config),
        Mode::Estimate => run_estimate(config, &mut warnings),
        Mode::Sequence => run_sequence(config, &mut warnings),
        Mode::Verify => run_verify(config),
        Mode::Sympow => run_sympow(config),
        Mode::LemmaD => run_lemma_d(config),
        Mode::Factor => run_factor(config, &mut warnings),
    };
    match result {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: warnings,
        },
        Err(e) => {
            let mut out = failure(&e);
            out.stderr = warnings + &out.stderr;
            out
        }
    }
}

type ModeResult = Result<(i32, String)>;

fn parse_ints(raw: &str, n: usize, what: &str) -> Result<Vec<i64>> {
    let vals: std::result::Result<Vec<i64>, _> = raw.split(',').map(|s| s.trim().parse()).collect();
    match vals {
        Ok(v) if v.len() == n => Ok(v),
        _ => Err(Error::InvalidInput(format!(
            "{what} expects {n} comma-separated integers, got '{raw}'"
        ))),
    }
}

fn parse_t_grid(raw: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidInput(format!("--t expects min:max:steps, got '{raw}'"));
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if steps < 1 || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidInput(format!(
            "--t needs finite bounds and steps >= 1, got '{raw}'"
        )));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect())
}

fn params(config: &RunConfig) -> Result<SurfaceParams> {
    SurfaceParams::new(config.d)
}

fn fm_matrix(config: &RunConfig) -> Result<FMMatrix> {
    let v = parse_ints(&config.matrix, 4, "--matrix")?;
    make_fm(v[0], v[1], v[2], v[3], params(config)?)
}

/// Decimal with 15 significant digits, trailing zeros dropped.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let s = if (-5..15).contains(&mag) {
        format!("{:.*}", (14 - mag).max(0) as usize, x)
    } else {
        format!("{:.14e}", x)
    };
    trim_zeros(&s)
}

fn trim_zeros(s: &str) -> String {
    let (mant, exp) = match s.find('e') {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let mant = if mant.contains('.') {
        mant.trim_end_matches('0').trim_end_matches('.')
    } else {
        mant
    };
    let mant = if mant == "-0" { "0" } else { mant };
    format!("{mant}{exp}")
}

fn matrix_json(a: &FMMatrix) -> Value {
    json!({
        "D": a.params().d(),
        "entries": a.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "negated": a.negated(),
        "trace": a.trace().to_string(),
    })
}

fn render(format: Format, csv: String, doc: Value) -> String {
    match format {
        Format::Csv => csv,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
    }
}

fn run_closed(config: &RunConfig) -> ModeResult {
    let a = fm_matrix(config)?;
    let grid = parse_t_grid(&config.t_grid)?;
    let h = entropy_closed(&a);
    let rho = h.rho.to_string();
    let slope = h.slope.to_string();
    let mut csv = String::from("t,h_t,rho_exact,slope\n");
    let mut rows = Vec::new();
    for &t in &grid {
        let v = h.at(t);
        writeln!(csv, "{},{},{rho},{slope}", fmt_sig(t), fmt_sig(v)).unwrap();
        rows.push(json!({"t": t, "h_t": v}));
    }
    let doc = json!({
        "mode": "closed",
        "matrix": matrix_json(&a),
        "rho": {"exact": rho, "value": h.rho.to_f64(), "is_one": h.rho_is_one()},
        "log_rho": h.log_rho(),
        "slope": {"exact": slope, "value": rational_to_f64(&h.slope)},
        "rows": rows,
    });
    Ok((0, render(config.format, csv, doc)))
}

/// The twist to use, warning when an override misses the margin.
fn resolve_twist(a: &FMMatrix, requested: Option<u64>, warnings: &mut String) -> Result<u64> {
    let applicable = !a.b.is_zero() && a.trace() >= BigInt::from(2);
    match requested {
        Some(0) => Err(Error::InvalidInput("--m must be positive".into())),
        Some(m) => {
            if applicable && !twist_margin_met(a, m)? {
                let s = slope_fixed_point(a)?;
                writeln!(
                    warnings,
                    "warning: twist m = {m} does not satisfy m > 1 - s with s = {s} ~ {}",
                    fmt_sig(s.to_f64())
                )
                .unwrap();
            }
            Ok(m)
        }
        None if applicable => entropy::choose_twist(a),
        None => Ok(1),
    }
}

fn check_n_max(n_max: u64) -> Result<()> {
    if n_max < 2 {
        return Err(Error::InvalidInput(format!(
            "--n-max = {n_max}, expected >= 2"
        )));
    }
    Ok(())
}

fn parse_z(raw: &str) -> Result<Complex64> {
    let bad = || Error::InvalidInput(format!("--z expects re,im, got '{raw}'"));
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 2 {
        return Err(bad());
    }
    let re: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let im: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

fn run_estimate(config: &RunConfig, warnings: &mut String) -> ModeResult {
    let a = fm_matrix(config)?;
    let grid = parse_t_grid(&config.t_grid)?;
    check_n_max(config.n_max)?;
    let z = parse_z(&config.z)?;
    let m = resolve_twist(&a, config.m, warnings)?;
    let report = estimate_growth_with_twist(&a, m, config.n_max)?;
    let closed = entropy_closed(&a);
    let mass = if a.trace() > BigInt::from(2) {
        Some(mass_growth_estimate(&a, z, m, config.n_max)?)
    } else {
        None
    };
    let rho = closed.rho.to_string();
    let slope = closed.slope.to_string();
    let mut csv = String::from("t,h_t,rho_exact,slope\n");
    let mut rows = Vec::new();
    for &t in &grid {
        let v = report.at(t);
        writeln!(csv, "{},{},{rho},{slope}", fmt_sig(t), fmt_sig(v)).unwrap();
        rows.push(json!({"t": t, "h_t": v, "h_t_closed": closed.at(t)}));
    }
    let opt = |x: Option<f64>| x.map(fmt_sig).unwrap_or_else(|| "n/a".into());
    if config.format == Format::Csv {
        writeln!(
            warnings,
            "diagnostics: m = {} n_max = {} growth = {} last_ratio = {} last_change = {} log_rho = {} mass_growth = {}",
            report.m.map(|m| m.to_string()).unwrap_or_else(|| "n/a".into()),
            report.n_max,
            fmt_sig(report.growth),
            opt(report.last_ratio),
            opt(report.last_change),
            fmt_sig(closed.log_rho()),
            opt(mass),
        )
        .unwrap();
    }
    let doc = json!({
        "mode": "estimate",
        "matrix": matrix_json(&a),
        "m": report.m,
        "n_max": report.n_max,
        "growth": report.growth,
        "drift": {"exact": report.drift.to_string(), "value": rational_to_f64(&report.drift)},
        "diagnostics": {
            "last_ratio": report.last_ratio,
            "last_change": report.last_change,
            "log_rho": closed.log_rho(),
            "mass_growth": mass,
        },
        "rows": rows,
    });
    Ok((0, render(config.format, csv, doc)))
}

fn run_sequence(config: &RunConfig, warnings: &mut String) -> ModeResult {
    let a = fm_matrix(config)?;
    check_n_max(config.n_max)?;
    let m = resolve_twist(&a, config.m, warnings)?;
    let seq = entropy::delta0_sequence(&a, m, config.n_max)?;
    let mut csv = String::from("n,delta,ratio\n");
    for (i, (n, d)) in seq.n_values.iter().zip(&seq.delta_values).enumerate() {
        let ratio = seq
            .ratio_estimates
            .get(i)
            .copied()
            .flatten()
            .map(fmt_sig)
            .unwrap_or_default();
        writeln!(csv, "{n},{d},{ratio}").unwrap();
    }
    let growth = seq.growth_rate().ok();
    let doc = json!({
        "mode": "sequence",
        "matrix": matrix_json(&a),
        "m": m,
        "n_values": seq.n_values,
        "delta_values": seq.delta_values.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "ratio_estimates": seq.ratio_estimates,
        "growth_rate": growth,
    });
    Ok((0, render(config.format, csv, doc)))
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn power_oracle(a: &FMMatrix) -> Check {
    let tr = a.trace();
    let n_top: u64 = if tr > BigInt::from(2) {
        50
    } else if tr == BigInt::from(2) {
        1000
    } else if tr.is_zero() {
        400
    } else {
        600
    };
    let bad = (0..=n_top).find(|&n| power_closed(a, n).to_integer().as_ref() != Some(&power(a, n)));
    Check {
        name: "power_oracle",
        pass: bad.is_none(),
        detail: match bad {
            None => format!("closed form equals repeated squaring for n <= {n_top}"),
            Some(n) => format!("mismatch at n = {n}"),
        },
    }
}

fn isometry_suite(a: &FMMatrix, seed: u64) -> Check {
    let mut rng = sampling::rng_from_seed(seed);
    let mut failures = 0usize;
    let cases = 2000;
    for i in 0..cases {
        // half the cases use the given matrix, half random ones over D <= 12
        let m = if i % 2 == 0 {
            a.as_matrix().clone()
        } else {
            let p = SurfaceParams::new(rng_range(&mut rng, 1, 12)).expect("D >= 1");
            sampling::random_sqrt_d_matrix(&mut rng, p, 8)
        };
        let p = m.params();
        let v = sampling::random_vector(&mut rng, 50);
        let w = sampling::random_vector(&mut rng, 50);
        if b_form(&m.act(&iota(&v)), &m.act(&iota(&w)), p) != pairing(&v, &w, p) {
            failures += 1;
        }
    }
    Check {
        name: "isometry",
        pass: failures == 0,
        detail: format!("{failures} failures in {cases} cases"),
    }
}

fn rng_range<R: rand::Rng>(rng: &mut R, lo: u64, hi: u64) -> u64 {
    rng.gen_range(lo..=hi)
}

fn rep3_check(a: &FMMatrix) -> Check {
    let got = char_poly3(&rep3_matrix(a));
    let want = expected_char_poly(&a.trace(), &BigInt::from(1));
    Check {
        name: "rep3_char_poly",
        pass: got == want,
        detail: format!(
            "[{}]",
            got.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

fn run_verify(config: &RunConfig) -> ModeResult {
    let a = fm_matrix(config)?;
    let grid = parse_t_grid(&config.t_grid)?;
    check_n_max(config.n_max)?;
    let tr = a.trace();
    // parabolic sequences converge only algebraically
    let (n_kt, tol) = if tr == BigInt::from(2) && !a.as_matrix().is_identity() {
        (config.n_max.max(200), 1e-3)
    } else {
        (config.n_max, 1e-6)
    };
    let mut checks = Vec::new();
    let kt = kt_check(&a, n_kt, tol)?;
    checks.push(Check {
        name: "kt_check",
        pass: kt.pass,
        detail: format!(
            "estimate {} vs log rho {} (n = {n_kt}, tol {tol:e})",
            fmt_sig(kt.estimate),
            fmt_sig(kt.log_rho)
        ),
    });
    checks.push(power_oracle(&a));
    checks.push(isometry_suite(&a, config.seed));
    checks.push(rep3_check(&a));
    let report = entropy::estimate_growth(&a, n_kt)?;
    let closed = entropy_closed(&a);
    let worst = grid
        .iter()
        .map(|&t| (report.at(t) - closed.at(t)).abs())
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "closed_vs_estimate",
        pass: worst < tol,
        detail: format!(
            "max |difference| {} over {} t values",
            fmt_sig(worst),
            grid.len()
        ),
    });
    let all = checks.iter().all(|c| c.pass);
    let mut csv = String::from("check,pass,detail\n");
    for c in &checks {
        writeln!(
            csv,
            "{},{},\"{}\"",
            c.name,
            c.pass,
            c.detail.replace('"', "'")
        )
        .unwrap();
    }
    let doc = json!({
        "mode": "verify",
        "matrix": matrix_json(&a),
        "seed": config.seed,
        "checks": checks.iter().map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
        "pass": all,
    });
    Ok((if all { 0 } else { 1 }, render(config.format, csv, doc)))
}

fn run_sympow(config: &RunConfig) -> ModeResult {
    let v = parse_ints(&config.matrix, 4, "--matrix")?;
    let m = mat2(v[0], v[1], v[2], v[3]);
    let grid = parse_t_grid(&config.t_grid)?;
    let rep = sym_power(&m, config.sym_d)?;
    let entropy: Option<Vec<(f64, f64)>> = match ppav_entropy(&m, config.sym_d, 0.0) {
        Ok(_) => Some(
            grid.iter()
                .map(|&t| Ok((t, ppav_entropy(&m, config.sym_d, t)?)))
                .collect::<Result<_>>()?,
        ),
        // determinant -1 has a symmetric power but no entropy formula
        Err(Error::OutOfScopeTrace { .. } | Error::NotUnimodular { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut csv = (0..=config.sym_d)
        .map(|j| format!("c{j}"))
        .collect::<Vec<_>>()
        .join(",");
    csv.push('\n');
    for row in &rep.matrix {
        let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        writeln!(csv, "{}", line.join(",")).unwrap();
    }
    if let Some(rows) = &entropy {
        csv.push_str("\nt,h_t\n");
        for (t, h) in rows {
            writeln!(csv, "{},{}", fmt_sig(*t), fmt_sig(*h)).unwrap();
        }
    }
    let doc = json!({
        "mode": "sympow",
        "d": rep.d,
        "matrix": rep.matrix.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "entropy": entropy.map(|rows| rows.iter().map(|(t, h)| json!({"t": t, "h_t": h})).collect::<Vec<_>>()),
    });
    Ok((0, render(config.format, csv, doc)))
}

fn run_lemma_d(config: &RunConfig) -> ModeResult {
    let p = params(config)?;
    let ks: Vec<i64> = match config.k {
        Some(k) => vec![k],
        None => (-3..=3).collect(),
    };
    let ms: Vec<u64> = match config.m {
        Some(m) => vec![m],
        None => vec![1, 2, 3],
    };
    let mut csv = String::from("D,k,m,bound,vector\n");
    let mut results = Vec::new();
    for &k in &ks {
        for &m in &ms {
            let m = i64::try_from(m).map_err(|_| Error::InvalidInput("--m too large".into()))?;
            let found = lemma_d_search(p, k, m, config.bound);
            let shown = found.as_ref().map(|v| v.to_string());
            writeln!(
                csv,
                "{},{k},{m},{},\"{}\"",
                p.d(),
                config.bound,
                shown.clone().unwrap_or_default()
            )
            .unwrap();
            results.push(json!({"k": k, "m": m, "vector": shown}));
        }
    }
    let none_found = results.iter().all(|r| r["vector"].is_null());
    let doc = json!({
        "mode": "lemma-d",
        "D": p.d(),
        "bound": config.bound,
        "results": results,
        "none_found": none_found,
    });
    Ok((0, render(config.format, csv, doc)))
}

fn parse_vector(raw: &Option<String>, flag: &str) -> Result<MukaiVector> {
    let raw = raw
        .as_deref()
        .ok_or_else(|| Error::InvalidInput(format!("factor mode needs {flag} r,d,a")))?;
    let v = parse_ints(raw, 3, flag)?;
    Ok(MukaiVector::new(v[0], v[1], v[2]))
}

fn run_factor(config: &RunConfig, warnings: &mut String) -> ModeResult {
    let p = params(config)?;
    let v1 = parse_vector(&config.v1, "--v1")?;
    let v2 = parse_vector(&config.v2, "--v2")?;
    let g = factor_isotropic_pair(&v1, &v2, p)?;
    let square = match theta_square(&g) {
        Ok(s) => Some(s),
        Err(e) => {
            writeln!(warnings, "warning: square not available: {}: {e}", e.kind()).unwrap();
            None
        }
    };
    // the images of O and of a point, as a consistency check of the factorization
    let images = g.isotropic_pair();
    let mut csv = String::from("p1,q1,p2,q2,r1,r2,sq_a,sq_b,sq_c,sq_d,shift\n");
    let sq_fields = match &square {
        Some(s) => format!(
            "{},{},{},{},{}",
            s.matrix.a, s.matrix.b, s.matrix.c, s.matrix.d, s.shift
        ),
        None => ",,,,".into(),
    };
    writeln!(
        csv,
        "{},{},{},{},{},{},{sq_fields}",
        g.p1, g.q1, g.p2, g.q2, g.r1, g.r2
    )
    .unwrap();
    let doc = json!({
        "mode": "factor",
        "D": p.d(),
        "element": {
            "p1": g.p1.to_string(), "q1": g.q1.to_string(),
            "p2": g.p2.to_string(), "q2": g.q2.to_string(),
            "r1": g.r1, "r2": g.r2,
        },
        "reconstructed": [images.0.to_string(), images.1.to_string()],
        "square": square.map(|s| json!({
            "matrix": s.matrix.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "shift": s.shift,
        })),
    });
    Ok((0, render(config.format, csv, doc)))
}

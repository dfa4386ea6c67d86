//! Command-line front end: every computation and verification suite of the
//! library behind one binary with deterministic, machine-readable output.
//!
//! Exit codes: 0 success, 1 a verification FAILed, 2 invalid configuration
//! or a non-generic rational lambda.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{CoreError, Result};
use crate::fusion_exchange::{
    assemble_j, assemble_j_inv, assemble_r, assemble_r_inv, biorthogonality_check,
    exchange_c_closed, exchange_c_sum, fusion_from_intertwiners, qdybe_check, racah_eval,
    WeightedMatrix,
};
use crate::hyperg::{chu_vandermonde, eval_terminating, f21, f32, whipple_transform};
use crate::intertwine::{coeff_closed, oracle_table, IntertwinerCoeffs};
use crate::ratfield::{RatFunc, LAMBDA, MU};
use crate::scalars::{Field, Rat};
use crate::trace::{
    character, character_weyl_quotient, contiguous_check, f_body, f_body_alt,
    f_body_pipeline, mr_check, mr_coeffs, psi_body, psi_body_alt, QMu, QMuU,
};
use crate::universal::{
    apply_universal, q_eigenvalue, q_eigenvalue_oracle, universal_j, universal_j_inv,
    universal_q, universal_q_from_j, TruncatedUniversal,
};

type QL = RatFunc<Rat>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LambdaMode {
    Symbolic,
    Rational(Rat),
}

#[derive(Clone, Debug)]
pub enum Command {
    Intertwiner { gamma: u32, k: u32, n_max: Option<u32>, oracle: bool },
    Fusion { delta: u32, gamma: u32, inverse: bool, oracle: bool },
    Exchange { delta: u32, gamma: u32, inverse: bool, oracle: bool },
    Universal { order: u32, inverse: bool },
    Qop { gamma: u32 },
    Trace { gamma: u32 },
    Qdybe { dims: [u32; 3] },
    Biorth { gamma: u32, delta: u32, s: u32 },
    MrCheck { gamma: u32, delta: u32 },
    VerifyAll { max_dim: Option<u32>, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub lambda: LambdaMode,
    pub format: Format,
}

#[derive(Parser, Debug)]
#[command(name = "qdybe", about = "Exact fusion/exchange matrices, Q(lambda) and \
weighted trace functions for sl(2) at q = 1", version)]
pub struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Args, Debug, Clone)]
struct CommonOpts {
    /// Rational lambda as p/q (default: symbolic)
    #[arg(long, global = true)]
    lambda: Option<String>,
    /// Keep lambda symbolic (the default)
    #[arg(long, global = true)]
    symbolic: bool,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum CliCommand {
    /// Intertwiner coefficient table c_{m,n} for (gamma, k)
    Intertwiner {
        #[arg(long)]
        gamma: u32,
        #[arg(long)]
        k: u32,
        /// Largest n in the table (default: gamma)
        #[arg(long)]
        n_max: Option<u32>,
        /// Use the direct expansion instead of the closed form
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Fusion matrix J on V_delta (x) V_gamma
    Fusion {
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        gamma: u32,
        #[arg(long)]
        inverse: bool,
        /// Build from intertwiner compositions instead of the closed form
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Exchange matrix R on V_delta (x) V_gamma
    Exchange {
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        gamma: u32,
        #[arg(long)]
        inverse: bool,
        /// Use the defining double sum instead of the closed forms
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Universal fusion matrix coefficients through a truncation order
    Universal {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Diagonal of Q(lambda) on V_gamma
    Qop {
        #[arg(long)]
        gamma: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Bodies of the trace functions Psi and F for V_gamma
    Trace {
        #[arg(long)]
        gamma: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Dynamical Yang-Baxter check on a triple tensor product
    Qdybe {
        /// Highest weights as G,D,E
        #[arg(long)]
        dims: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Biorthogonality of exchange coefficients in one weight block
    Biorth {
        #[arg(long)]
        gamma: u32,
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        s: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Dual Macdonald-Ruijsenaars difference equation check
    MrCheck {
        #[arg(long)]
        gamma: u32,
        #[arg(long)]
        delta: u32,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run the full verification suite at desk scale
    VerifyAll {
        /// Bound on highest weights (env DYBE_MAX_DIM also applies)
        #[arg(long)]
        max_dim: Option<u32>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || CoreError::InvalidConfig(format!("cannot parse rational '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = i64::from_str(p).map_err(|_| bad())?;
            let q = i64::from_str(q).map_err(|_| bad())?;
            if q == 0 {
                return Err(CoreError::ZeroDenominator);
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_int(i64::from_str(s).map_err(|_| bad())?)),
    }
}

fn parse_dims(s: &str) -> Result<[u32; 3]> {
    let parts: Vec<_> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(CoreError::InvalidConfig(format!(
            "--dims expects G,D,E, got '{s}'"
        )));
    }
    let mut dims = [0u32; 3];
    for (i, p) in parts.iter().enumerate() {
        dims[i] = u32::from_str(p.trim())
            .map_err(|_| CoreError::InvalidConfig(format!("bad dimension '{p}'")))?;
    }
    Ok(dims)
}

impl CommonOpts {
    fn into_modes(self) -> Result<(LambdaMode, Format)> {
        let lambda = match (&self.lambda, self.symbolic) {
            (Some(_), true) => {
                return Err(CoreError::InvalidConfig(
                    "--lambda and --symbolic are mutually exclusive".into(),
                ))
            }
            (Some(s), false) => LambdaMode::Rational(parse_rat(s)?),
            (None, _) => LambdaMode::Symbolic,
        };
        Ok((lambda, self.format))
    }
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig> {
        let (command, common) = match self.command {
            CliCommand::Intertwiner { gamma, k, n_max, oracle, common } => {
                if k > gamma {
                    return Err(CoreError::InvalidConfig(format!(
                        "k = {k} exceeds gamma = {gamma}"
                    )));
                }
                (Command::Intertwiner { gamma, k, n_max, oracle }, common)
            }
            CliCommand::Fusion { delta, gamma, inverse, oracle, common } => {
                (Command::Fusion { delta, gamma, inverse, oracle }, common)
            }
            CliCommand::Exchange { delta, gamma, inverse, oracle, common } => {
                (Command::Exchange { delta, gamma, inverse, oracle }, common)
            }
            CliCommand::Universal { order, inverse, common } => {
                (Command::Universal { order, inverse }, common)
            }
            CliCommand::Qop { gamma, common } => (Command::Qop { gamma }, common),
            CliCommand::Trace { gamma, common } => (Command::Trace { gamma }, common),
            CliCommand::Qdybe { dims, common } => {
                (Command::Qdybe { dims: parse_dims(&dims)? }, common)
            }
            CliCommand::Biorth { gamma, delta, s, common } => {
                if s > gamma.min(delta) {
                    return Err(CoreError::InvalidConfig(format!(
                        "s = {s} exceeds min(gamma, delta) = {}",
                        gamma.min(delta)
                    )));
                }
                (Command::Biorth { gamma, delta, s }, common)
            }
            CliCommand::MrCheck { gamma, delta, common } => {
                (Command::MrCheck { gamma, delta }, common)
            }
            CliCommand::VerifyAll { max_dim, seed, common } => {
                (Command::VerifyAll { max_dim, seed }, common)
            }
        };
        let (lambda, format) = common.into_modes()?;
        Ok(RunConfig { command, lambda, format })
    }
}

/// Canonical (numerator, denominator) string pair of a field element.
pub trait RenderEntry {
    fn num_den(&self) -> (String, String);

    fn render(&self) -> String {
        let (n, d) = self.num_den();
        format!("({n})/({d})")
    }
}

impl RenderEntry for Rat {
    fn num_den(&self) -> (String, String) {
        (self.numer().to_string(), self.denom().to_string())
    }
}

impl<F: Field> RenderEntry for RatFunc<F> {
    fn num_den(&self) -> (String, String) {
        (self.num().to_string(), self.den().to_string())
    }
}

fn matrix_json<F: Field + RenderEntry>(
    m: &WeightedMatrix<F>,
    lambda: &LambdaMode,
) -> serde_json::Value {
    let lambda_str = match lambda {
        LambdaMode::Symbolic => "symbolic".to_string(),
        LambdaMode::Rational(r) => r.to_string(),
    };
    let blocks: Vec<_> = m
        .blocks
        .iter()
        .map(|(s, b)| {
            let entries: Vec<_> = b
                .entries
                .iter()
                .map(|e| {
                    let (n, d) = e.num_den();
                    json!([n, d])
                })
                .collect();
            json!({"s": s, "index_range": [b.lo, b.hi], "entries": entries})
        })
        .collect();
    json!({"delta": m.delta, "gamma": m.gamma, "lambda": lambda_str, "blocks": blocks})
}

fn write_matrix<F: Field + RenderEntry>(
    out: &mut dyn Write,
    m: &WeightedMatrix<F>,
    lambda: &LambdaMode,
    format: Format,
) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&matrix_json(m, lambda)).expect("valid json")
        ),
        Format::Csv => {
            writeln!(out, "s,a_out,a_in,num,den")?;
            for (s, b) in &m.blocks {
                for a_out in b.lo..=b.hi {
                    for a_in in b.lo..=b.hi {
                        let (n, d) = b.get(a_out, a_in).num_den();
                        writeln!(out, "{s},{a_out},{a_in},{n},{d}")?;
                    }
                }
            }
            Ok(())
        }
        Format::Text => {
            for (s, b) in &m.blocks {
                writeln!(out, "s={s} indices {}..={}", b.lo, b.hi)?;
                for a_out in b.lo..=b.hi {
                    let row: Vec<_> = (b.lo..=b.hi)
                        .map(|a_in| b.get(a_out, a_in).render())
                        .collect();
                    writeln!(out, "  [{}]", row.join(", "))?;
                }
            }
            Ok(())
        }
    }
}

fn symbolic_lambda() -> QL {
    QL::gen(LAMBDA)
}

/// Assemble a weighted matrix in either lambda mode and render it.
fn matrix_command(
    out: &mut dyn Write,
    lambda: &LambdaMode,
    format: Format,
    build_sym: impl Fn(&QL) -> Result<WeightedMatrix<QL>>,
    build_rat: impl Fn(&Rat) -> Result<WeightedMatrix<Rat>>,
) -> Result<()> {
    match lambda {
        LambdaMode::Symbolic => {
            let m = build_sym(&symbolic_lambda())?;
            write_matrix(out, &m, lambda, format)?;
        }
        LambdaMode::Rational(r) => {
            let m = build_rat(r)?;
            write_matrix(out, &m, lambda, format)?;
        }
    }
    Ok(())
}

fn run_intertwiner(
    out: &mut dyn Write,
    gamma: u32,
    k: u32,
    n_max: Option<u32>,
    oracle: bool,
    lambda: &LambdaMode,
    format: Format,
) -> Result<()> {
    let n_max = n_max.unwrap_or(gamma);
    let entries: Vec<(u32, u32, String)> = match lambda {
        LambdaMode::Symbolic => {
            let t = IntertwinerCoeffs::build(&symbolic_lambda(), gamma, k, n_max, oracle)?;
            t.table
                .iter()
                .map(|(&(m, n), v)| (m, n, v.render()))
                .collect()
        }
        LambdaMode::Rational(r) => {
            let t = IntertwinerCoeffs::build(r, gamma, k, n_max, oracle)?;
            t.table
                .iter()
                .map(|(&(m, n), v)| (m, n, v.render()))
                .collect()
        }
    };
    match format {
        Format::Json => {
            let list: Vec<_> = entries
                .iter()
                .map(|(m, n, v)| json!({"m": m, "n": n, "value": v}))
                .collect();
            let doc = json!({"gamma": gamma, "k": k, "entries": list});
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("valid json"))?;
        }
        Format::Csv => {
            writeln!(out, "m,n,value")?;
            for (m, n, v) in entries {
                writeln!(out, "{m},{n},{v}")?;
            }
        }
        Format::Text => {
            for (m, n, v) in entries {
                writeln!(out, "c[{m},{n}] = {v}")?;
            }
        }
    }
    Ok(())
}

fn run_universal(
    out: &mut dyn Write,
    order: u32,
    inverse: bool,
    format: Format,
) -> Result<()> {
    let u = if inverse { universal_j_inv(order) } else { universal_j(order) };
    let terms: Vec<String> = u.terms.iter().map(|t| t.render()).collect();
    match format {
        Format::Json => {
            let doc = json!({"order": order, "inverse": inverse, "terms": terms});
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("valid json"))?;
        }
        _ => {
            for (n, t) in terms.iter().enumerate() {
                writeln!(out, "n={n}: {t}")?;
            }
        }
    }
    Ok(())
}

fn run_qop(out: &mut dyn Write, gamma: u32, lambda: &LambdaMode, format: Format) -> Result<()> {
    let values: Vec<String> = match lambda {
        LambdaMode::Symbolic => (0..=gamma)
            .map(|k| q_eigenvalue(&symbolic_lambda(), gamma, k).map(|v| v.render()))
            .collect::<Result<_>>()?,
        LambdaMode::Rational(r) => (0..=gamma)
            .map(|k| q_eigenvalue(r, gamma, k).map(|v| v.render()))
            .collect::<Result<_>>()?,
    };
    match format {
        Format::Json => {
            let doc = json!({"gamma": gamma, "eigenvalues": values});
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("valid json"))?;
        }
        _ => {
            for (k, v) in values.iter().enumerate() {
                writeln!(out, "k={k}: {v}")?;
            }
        }
    }
    Ok(())
}

fn run_trace(out: &mut dyn Write, gamma: u32, format: Format) -> Result<()> {
    let psi = psi_body(gamma)?;
    let f = f_body(gamma)?;
    match format {
        Format::Json => {
            let doc = json!({"gamma": gamma, "psi": psi.render(), "f": f.render()});
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("valid json"))?;
        }
        _ => {
            writeln!(out, "psi = {}", psi.render())?;
            writeln!(out, "F = {}", f.render())?;
        }
    }
    Ok(())
}

fn run_mr_check(out: &mut dyn Write, gamma: u32, delta: u32, format: Format) -> Result<bool> {
    let coeffs = mr_coeffs(gamma, delta)?;
    let ok = mr_check(gamma, delta)?;
    match format {
        Format::Json => {
            let list: Vec<_> = coeffs
                .iter()
                .map(|(nu, c)| json!({"nu": nu, "value": c.render()}))
                .collect();
            let doc = json!({
                "gamma": gamma,
                "delta": delta,
                "coefficients": list,
                "status": if ok { "PASS" } else { "FAIL" },
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("valid json"))?;
        }
        _ => {
            for (nu, c) in &coeffs {
                writeln!(out, "nu={nu}: {}", c.render())?;
            }
            writeln!(out, "{} mr-check gamma={gamma} delta={delta}", if ok { "PASS" } else { "FAIL" })?;
        }
    }
    Ok(ok)
}

struct Suite<'a> {
    out: &'a mut dyn Write,
    failures: u32,
}

impl<'a> Suite<'a> {
    fn check(&mut self, name: &str, run: impl FnOnce() -> Result<bool>) -> Result<()> {
        let start = Instant::now();
        let ok = run()?;
        let dt = start.elapsed();
        // timing goes to stderr so stdout stays byte-identical across runs
        eprintln!("{name}: {:.3}s", dt.as_secs_f64());
        writeln!(self.out, "{} {name}", if ok { "PASS" } else { "FAIL" })?;
        if !ok {
            self.failures += 1;
        }
        Ok(())
    }
}

pub fn fusion_inverse_pair(bound: u32) -> Result<bool> {
    let l = symbolic_lambda();
    for delta in 0..=bound {
        for gamma in 0..=bound {
            let j = assemble_j(&l, delta, gamma)?;
            let jinv = assemble_j_inv(&l, delta, gamma)?;
            let id = WeightedMatrix::identity(delta, gamma);
            if j.mul(&jinv) != id || jinv.mul(&j) != id {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn fusion_oracle_check(bound: u32) -> Result<bool> {
    let l = symbolic_lambda();
    for delta in 0..=bound {
        for gamma in 0..=bound {
            if assemble_j(&l, delta, gamma)? != fusion_from_intertwiners(&l, delta, gamma)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn intertwiner_oracle_check(bound: u32) -> Result<bool> {
    let l = symbolic_lambda();
    for gamma in 0..=bound {
        for k in 0..=gamma {
            let n_max = gamma + 2;
            let closed = IntertwinerCoeffs::build(&l, gamma, k, n_max, false)?;
            if closed.table != oracle_table(&l, gamma, k, n_max)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn exchange_forms_check(bound: u32) -> Result<bool> {
    let l = symbolic_lambda();
    for gamma in 0..=bound {
        for delta in 0..=bound {
            for s in 0..=(gamma + delta) {
                let lo = (s as i64 - delta as i64).max(0) as u32;
                for m in lo..=gamma.min(s) {
                    for n in lo..=gamma.min(s) {
                        if exchange_c_sum(m, n, &l, gamma, delta, s)?
                            != exchange_c_closed(m, n, &l, gamma, delta, s)?
                        {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

pub fn r_inverse_biorth_check(bound: u32) -> Result<bool> {
    let l = symbolic_lambda();
    for delta in 0..=bound {
        for gamma in 0..=bound {
            let r = assemble_r(&l, delta, gamma, false)?;
            let rinv = assemble_r_inv(&l, delta, gamma, false)?;
            let id = WeightedMatrix::identity(delta, gamma);
            if r.mul(&rinv) != id || rinv.mul(&r) != id {
                return Ok(false);
            }
            for s in 0..=gamma.min(delta) {
                if !biorthogonality_check(&l, gamma, delta, s)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn racah_check(bound: u32) -> Result<bool> {
    let l = symbolic_lambda();
    for gamma in 0..=bound {
        for delta in 0..=bound {
            for s in 0..=delta {
                for m in 0..=gamma.min(s) {
                    for n in 0..=gamma.min(s) {
                        let direct = {
                            let series = crate::hyperg::f43(
                                [
                                    QL::from_int(-(m as i64)),
                                    -l.clone() - QL::from_int(gamma as i64)
                                        + QL::from_int(m as i64 - 1),
                                    QL::from_int(-(n as i64)),
                                    l.clone()
                                        + QL::from_int(
                                            delta as i64 - 2 * s as i64 + n as i64 + 1,
                                        ),
                                ],
                                [
                                    QL::from_int(-(s as i64)),
                                    QL::from_int(-(gamma as i64)),
                                    QL::from_int(delta as i64 - s as i64 + 1),
                                ],
                            );
                            eval_terminating(&series)?
                        };
                        let racah = racah_eval(
                            m,
                            n,
                            &(-QL::from_int(gamma as i64 + 1)),
                            &(-l.clone() - QL::one()),
                            &(-QL::from_int(s as i64 + 1)),
                            &(l.clone() + QL::from_int(delta as i64 - s as i64 + 1)),
                        )?;
                        if direct != racah {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

pub fn qdybe_suite_check(bound: u32) -> Result<bool> {
    let b = bound.min(2);
    for g1 in 0..=b {
        for g2 in 0..=b {
            for g3 in 0..=b {
                if !qdybe_check([g1, g2, g3])? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn universal_check(bound: u32) -> Result<bool> {
    let n = 10;
    let j = universal_j(n);
    let jinv = universal_j_inv(n);
    let id = TruncatedUniversal::identity(n);
    if j.mul(&jinv) != id || jinv.mul(&j) != id {
        return Ok(false);
    }
    let l = symbolic_lambda();
    let ju = universal_j(bound);
    let jiu = universal_j_inv(bound);
    for delta in 0..=bound {
        for gamma in 0..=bound {
            if apply_universal(&ju, delta, gamma)? != assemble_j(&l, delta, gamma)? {
                return Ok(false);
            }
            if apply_universal(&jiu, delta, gamma)? != assemble_j_inv(&l, delta, gamma)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn q_operator_check(bound: u32) -> Result<bool> {
    let l = symbolic_lambda();
    for gamma in 0..=bound.max(6) {
        for k in 0..=gamma {
            if q_eigenvalue(&l, gamma, k)? != q_eigenvalue_oracle(&l, gamma, k)? {
                return Ok(false);
            }
        }
    }
    Ok(universal_q_from_j(4) == universal_q(4))
}

pub fn trace_pipeline_check() -> Result<bool> {
    for gamma in [0u32, 2, 4] {
        let body = psi_body(gamma)?;
        if body != psi_body_alt(gamma)? {
            return Ok(false);
        }
        let coeffs = body.laurent_at_infinity(16);
        for n in 0..=8i64 {
            let expect = coeff_closed(n, n, &QMu::gen(MU), gamma, gamma / 2)?;
            if coeffs.get(&(2 * n)).cloned().unwrap_or_else(QMu::zero) != expect {
                return Ok(false);
            }
        }
        if f_body_pipeline(gamma)? != f_body(gamma)? || f_body(gamma)? != f_body_alt(gamma)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn mr_suite_check() -> Result<bool> {
    for gamma in [0u32, 2, 4] {
        for delta in 0..=3u32 {
            if !mr_check(gamma, delta)? {
                return Ok(false);
            }
        }
        // delta = 1 coefficients in closed form
        let coeffs = mr_coeffs(gamma, 1)?;
        let g2 = (gamma / 2) as i64;
        let m = QMu::gen(MU);
        let num = (m.clone() - QMu::from_int(g2 + 1)) * (m.clone() + QMu::from_int(g2));
        let den = (m.clone() - QMu::one()) * m.clone();
        if coeffs[1] != (1, QMu::one()) || coeffs[0] != (-1, num.div(&den)?) {
            return Ok(false);
        }
        if gamma > 0 {
            let z = (QMuU::one() - QMuU::gen(crate::ratfield::U).pow(2)?).inv()?;
            let mu = QMuU::constant(QMu::gen(MU));
            if !contiguous_check(
                &QMuU::from_int(-g2),
                &QMuU::from_int(g2 + 1),
                &(mu + QMuU::one()),
                &z,
            )? {
                return Ok(false);
            }
        }
    }
    for delta in 0..=5u32 {
        if character(delta) != character_weyl_quotient(delta)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn hypergeometric_lemmas_check() -> Result<bool> {
    let l = symbolic_lambda();
    // Chu-Vandermonde against direct summation
    for n in 0..=8u32 {
        let b = l.clone() + QL::from_int(3);
        let c = l.clone() * QL::from_int(2) + QL::from_int(1);
        let direct = eval_terminating(&f21(
            QL::from_int(-(n as i64)),
            b.clone(),
            c.clone(),
            QL::one(),
        ))?;
        if direct != chu_vandermonde(n, &b, &c)? {
            return Ok(false);
        }
        // collapse identities: 2F1[-n, c+n-1; c; z] at z = 1 is delta_{n,0}
        let collapse = eval_terminating(&f21(
            QL::from_int(-(n as i64)),
            c.clone() + QL::from_int(n as i64 - 1),
            c.clone(),
            QL::one(),
        ))?;
        let expect = if n == 0 { QL::one() } else { QL::zero() };
        if collapse != expect {
            return Ok(false);
        }
        // 3F2[-n, b, b/2+1; b+n+1, b/2; 1] = delta_{n,0}
        let b2 = l.clone();
        let half = b2.clone() * QL::from_rat(&Rat::new(1, 2));
        let three_two = eval_terminating(&f32(
            [QL::from_int(-(n as i64)), b2.clone(), half.clone() + QL::one()],
            [b2.clone() + QL::from_int(n as i64 + 1), half],
        ))?;
        if three_two != expect {
            return Ok(false);
        }
    }
    // Whipple's transform on a balanced terminating 4F3
    for n in 0..=4u32 {
        let a = l.clone() + QL::from_int(2);
        let b = -l.clone() + QL::from_int(1);
        let d = QL::from_int(3) * l.clone();
        let e = l.clone() + QL::from_int(5);
        // balance fixes f = a + b + c - n + 1 - d - e
        let c = QL::from_rat(&Rat::new(1, 3));
        let f = a.clone() + b.clone() + c.clone() - QL::from_int(n as i64) + QL::one()
            - d.clone()
            - e.clone();
        let series = crate::hyperg::f43(
            [QL::from_int(-(n as i64)), a, b, c],
            [d, e, f],
        );
        let (pre, transformed) = whipple_transform(&series)?;
        if eval_terminating(&series)? != pre * eval_terminating(&transformed)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Seeded spot check: symbolic assembly evaluated at a random generic
/// rational lambda agrees with direct rational-lambda assembly.
pub fn rational_spot_check(seed: u64, bound: u32) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = bound.min(3);
    for _ in 0..4 {
        // large numerators stay clear of the non-generic integer window
        let p = rng.gen_range(100..1000i64);
        let q = rng.gen_range(1..10i64);
        let l0 = Rat::new(2 * p + 1, q);
        let lsym = symbolic_lambda();
        for delta in 0..=b {
            for gamma in 0..=b {
                let sym = assemble_r(&lsym, delta, gamma, false)?;
                let rat = assemble_r(&l0, delta, gamma, false)?;
                for (s, blk) in &sym.blocks {
                    for a_out in blk.lo..=blk.hi {
                        for a_in in blk.lo..=blk.hi {
                            if blk.get(a_out, a_in).eval(&l0)?
                                != *rat.blocks[s].get(a_out, a_in)
                            {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

fn run_verify_all(out: &mut dyn Write, max_dim: Option<u32>, seed: u64) -> Result<u32> {
    let bound = max_dim
        .or_else(|| {
            std::env::var("DYBE_MAX_DIM")
                .ok()
                .and_then(|v| u32::from_str(&v).ok())
        })
        .unwrap_or(3);
    let mut suite = Suite { out, failures: 0 };
    suite.check("fusion-inverse-pair", || fusion_inverse_pair(bound))?;
    suite.check("fusion-oracle", || fusion_oracle_check(bound))?;
    suite.check("intertwiner-oracle", || intertwiner_oracle_check(bound))?;
    suite.check("exchange-closed-forms", || exchange_forms_check(bound))?;
    suite.check("r-inverse-biorthogonality", || r_inverse_biorth_check(bound))?;
    suite.check("racah-identification", || racah_check(bound.min(3)))?;
    suite.check("qdybe", || qdybe_suite_check(bound))?;
    suite.check("universal-fusion", || universal_check(bound))?;
    suite.check("q-operator", || q_operator_check(bound))?;
    suite.check("trace-pipeline", trace_pipeline_check)?;
    suite.check("dual-macdonald-ruijsenaars", mr_suite_check)?;
    suite.check("hypergeometric-lemmas", hypergeometric_lemmas_check)?;
    suite.check("rational-lambda-spot", || rational_spot_check(seed, bound))?;
    Ok(suite.failures)
}

/// Execute a configuration; returns the process exit code.
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> i32 {
    let outcome: Result<bool> = (|| {
        match &cfg.command {
            Command::Intertwiner { gamma, k, n_max, oracle } => {
                run_intertwiner(out, *gamma, *k, *n_max, *oracle, &cfg.lambda, cfg.format)?;
                Ok(true)
            }
            Command::Fusion { delta, gamma, inverse, oracle } => {
                let (inv, orc) = (*inverse, *oracle);
                if orc && inv {
                    return Err(CoreError::InvalidConfig(
                        "--oracle has no inverse variant".into(),
                    ));
                }
                matrix_command(
                    out,
                    &cfg.lambda,
                    cfg.format,
                    |l| match (inv, orc) {
                        (true, _) => assemble_j_inv(l, *delta, *gamma),
                        (false, true) => fusion_from_intertwiners(l, *delta, *gamma),
                        (false, false) => assemble_j(l, *delta, *gamma),
                    },
                    |l| match (inv, orc) {
                        (true, _) => assemble_j_inv(l, *delta, *gamma),
                        (false, true) => fusion_from_intertwiners(l, *delta, *gamma),
                        (false, false) => assemble_j(l, *delta, *gamma),
                    },
                )?;
                Ok(true)
            }
            Command::Exchange { delta, gamma, inverse, oracle } => {
                let (inv, orc) = (*inverse, *oracle);
                matrix_command(
                    out,
                    &cfg.lambda,
                    cfg.format,
                    |l| {
                        if inv {
                            assemble_r_inv(l, *delta, *gamma, orc)
                        } else {
                            assemble_r(l, *delta, *gamma, orc)
                        }
                    },
                    |l| {
                        if inv {
                            assemble_r_inv(l, *delta, *gamma, orc)
                        } else {
                            assemble_r(l, *delta, *gamma, orc)
                        }
                    },
                )?;
                Ok(true)
            }
            Command::Universal { order, inverse } => {
                run_universal(out, *order, *inverse, cfg.format)?;
                Ok(true)
            }
            Command::Qop { gamma } => {
                run_qop(out, *gamma, &cfg.lambda, cfg.format)?;
                Ok(true)
            }
            Command::Trace { gamma } => {
                run_trace(out, *gamma, cfg.format)?;
                Ok(true)
            }
            Command::Qdybe { dims } => {
                let ok = qdybe_check(*dims)?;
                writeln!(
                    out,
                    "{} qdybe dims={},{},{}",
                    if ok { "PASS" } else { "FAIL" },
                    dims[0],
                    dims[1],
                    dims[2]
                )?;
                Ok(ok)
            }
            Command::Biorth { gamma, delta, s } => {
                let l = symbolic_lambda();
                let ok = biorthogonality_check(&l, *gamma, *delta, *s)?;
                writeln!(
                    out,
                    "{} biorth gamma={gamma} delta={delta} s={s}",
                    if ok { "PASS" } else { "FAIL" }
                )?;
                Ok(ok)
            }
            Command::MrCheck { gamma, delta } => run_mr_check(out, *gamma, *delta, cfg.format),
            Command::VerifyAll { max_dim, seed } => {
                Ok(run_verify_all(out, *max_dim, *seed)? == 0)
            }
        }
    })();
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(CoreError::Io(_)) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cfg(cfg: RunConfig) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run(&cfg, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn qop_gamma_zero() {
        let (code, out) = run_cfg(RunConfig {
            command: Command::Qop { gamma: 0 },
            lambda: LambdaMode::Symbolic,
            format: Format::Text,
        });
        assert_eq!(code, 0);
        assert_eq!(out, "k=0: (1)/(1)\n");
    }

    #[test]
    fn exchange_json_round_trips() {
        let (code, out) = run_cfg(RunConfig {
            command: Command::Exchange { delta: 1, gamma: 1, inverse: false, oracle: false },
            lambda: LambdaMode::Symbolic,
            format: Format::Json,
        });
        assert_eq!(code, 0);
        let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(
            serde_json::to_string_pretty(&parsed).unwrap() + "\n",
            out
        );
        assert_eq!(parsed["lambda"], "symbolic");
        // weight-1 block carries 1 - 1/(lambda+1)^2 at position (0,0)
        let blocks = parsed["blocks"].as_array().unwrap();
        assert_eq!(blocks.len(), 3);
        let b1 = &blocks[1];
        assert_eq!(b1["s"], 1);
        assert_eq!(b1["entries"][0][0], "lambda^2 + 2*lambda");
        assert_eq!(b1["entries"][0][1], "lambda^2 + 2*lambda + 1");
    }

    #[test]
    fn rational_lambda_matches_symbolic_evaluation() {
        let l0 = Rat::new(7, 3);
        let (code_r, out_r) = run_cfg(RunConfig {
            command: Command::Fusion { delta: 2, gamma: 2, inverse: false, oracle: false },
            lambda: LambdaMode::Rational(l0.clone()),
            format: Format::Csv,
        });
        assert_eq!(code_r, 0);
        assert!(out_r.starts_with("s,a_out,a_in,num,den\n"));
        let sym = assemble_j(&symbolic_lambda(), 2, 2).unwrap();
        let rat = assemble_j(&l0, 2, 2).unwrap();
        for (s, blk) in &sym.blocks {
            for a in blk.lo..=blk.hi {
                for b in blk.lo..=blk.hi {
                    assert_eq!(
                        blk.get(a, b).eval(&l0).unwrap(),
                        *rat.blocks[s].get(a, b)
                    );
                }
            }
        }
    }

    #[test]
    fn non_generic_lambda_exits_two() {
        let (code, _) = run_cfg(RunConfig {
            command: Command::Intertwiner { gamma: 2, k: 0, n_max: None, oracle: false },
            lambda: LambdaMode::Rational(Rat::from_int(-2)),
            format: Format::Text,
        });
        assert_eq!(code, 2);
    }

    #[test]
    fn bad_rational_string_rejected() {
        assert!(parse_rat("x/y").is_err());
        assert!(parse_rat("1/0").is_err());
        assert_eq!(parse_rat("-3/4").unwrap(), Rat::new(-3, 4));
        assert_eq!(parse_rat("5").unwrap(), Rat::from_int(5));
    }

    #[test]
    fn dims_parse() {
        assert_eq!(parse_dims("1,2,1").unwrap(), [1, 2, 1]);
        assert!(parse_dims("1,2").is_err());
    }

    #[test]
    fn deterministic_output() {
        let cfg = || RunConfig {
            command: Command::Trace { gamma: 2 },
            lambda: LambdaMode::Symbolic,
            format: Format::Json,
        };
        let (c1, o1) = run_cfg(cfg());
        let (c2, o2) = run_cfg(cfg());
        assert_eq!((c1, &o1), (c2, &o2));
    }
}

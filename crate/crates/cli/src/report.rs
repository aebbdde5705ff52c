use std::fmt::Write;

use serde::Serialize;
use serde_json::{json, Value};

use blk_core::linalg::QMatrix;
use blk_core::parse::{format_monomial, ParsedPoly};
use blk_core::pipeline::{Analysis, Options, Session};
use blk_core::ring::rational::format_rational;
use blk_core::ring::Rational;
use blk_core::{Error, Result};

use crate::{Cli, Command};

pub struct Output {
    pub json: Value,
    pub text: String,
}

const DEFAULT_DEGREE: usize = 10;

#[derive(Serialize)]
struct Pair {
    alpha: String,
    l: i64,
    mult: usize,
}

#[derive(Serialize)]
struct Number {
    alpha: String,
    mult: usize,
}

#[derive(Serialize)]
struct Monodromy {
    alpha_class: String,
    jordan_blocks: Vec<usize>,
}

#[derive(Serialize)]
struct HodgeNumber {
    alpha_class: String,
    p: i64,
    q: i64,
    h: usize,
}

fn r(x: &Rational) -> String {
    format_rational(x)
}

fn matrix_json(m: &QMatrix) -> Value {
    json!(m.to_rows().iter().map(|row| row.iter().map(r).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn matrix_text(out: &mut String, name: &str, m: &QMatrix) {
    let cells: Vec<Vec<String>> = m.to_rows().iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect();
    let w = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let _ = writeln!(out, "{name} =");
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>w$}")).collect();
        let _ = writeln!(out, "  [ {} ]", line.join(" "));
    }
}

fn pairs(a: &Analysis) -> Vec<Pair> {
    a.spectral.pairs.iter().map(|p| Pair { alpha: r(&p.alpha), l: p.l, mult: p.mult }).collect()
}

fn numbers(a: &Analysis) -> Vec<Number> {
    a.spectral.numbers.iter().map(|(x, m)| Number { alpha: r(x), mult: *m }).collect()
}

fn monodromy(a: &Analysis) -> Vec<Monodromy> {
    a.spectral
        .monodromy
        .iter()
        .map(|b| Monodromy { alpha_class: r(&b.alpha_class), jordan_blocks: b.jordan_blocks.clone() })
        .collect()
}

fn hodge_numbers(a: &Analysis) -> Vec<HodgeNumber> {
    a.spectral
        .hodge_numbers
        .iter()
        .map(|((c, p, q), h)| HodgeNumber { alpha_class: r(c), p: *p, q: *q, h: *h })
        .collect()
}

fn audit_json(a: &Analysis) -> Value {
    match &a.audit {
        None => Value::Null,
        Some(au) => json!({
            "passed": au.passed(),
            "exponent": au.exponent,
            "checked_to": au.checked_to,
            "valuation_ok": au.valuation_ok,
            "leading_invertible": au.leading_invertible,
            "conjugation_ok": au.conjugation_ok,
            "s2_coefficient_zero": au.s2_coefficient_zero,
            "kappa": a.kappa,
            "sigma": a.sigma,
            "jet_degree": a.jet_degree,
        }),
    }
}

fn write_pairs(out: &mut String, a: &Analysis) {
    let _ = writeln!(out, "spectral pairs (alpha, l) x mult:");
    for p in &a.spectral.pairs {
        let _ = writeln!(out, "  ({}, {}) x{}", p.alpha, p.l, p.mult);
    }
}

fn write_numbers(out: &mut String, a: &Analysis) {
    let _ = writeln!(out, "spectrum alpha x mult:");
    for (x, m) in &a.spectral.numbers {
        let _ = writeln!(out, "  {x} x{m}");
    }
}

fn write_monodromy(out: &mut String, a: &Analysis) {
    let _ = writeln!(out, "monodromy (eigenvalue exp(-2 pi i alpha)):");
    for b in &a.spectral.monodromy {
        let sizes: Vec<String> = b.jordan_blocks.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "  alpha = {} mod 1: Jordan blocks [{}]", b.alpha_class, sizes.join(", "));
    }
}

fn write_audit(out: &mut String, a: &Analysis) {
    if let Some(au) = &a.audit {
        let _ = writeln!(
            out,
            "audit: {} (Q = s^{} * unit, identity checked mod s^{}, s^2 coefficient zero: {})",
            if au.passed() { "passed" } else { "FAILED" },
            au.exponent,
            au.checked_to,
            au.s2_coefficient_zero
        );
    }
}

pub fn run(cli: &Cli, parsed: &ParsedPoly) -> Result<Output> {
    let opts = Options { saturation_bound: None, audit: cli.audit };
    let mut session = Session::new(&parsed.poly, &opts)?;
    let mu = session.milnor().mu;
    let degree = cli.degree.map_or(DEFAULT_DEGREE, |d| d as usize);
    let mut text = String::new();
    let json = match cli.command {
        Command::Milnor => {
            let basis: Vec<String> =
                session.milnor().basis_monomials.iter().map(|m| format_monomial(m, &parsed.names)).collect();
            let _ = writeln!(text, "mu = {mu}\nbasis: {}", basis.join(", "));
            json!({ "mu": mu, "basis": basis })
        }
        Command::TmatrixJet => {
            use blk_core::brieskorn::TMatrixSource;
            let jet = session.src.jet(degree)?;
            let _ = writeln!(text, "mu = {mu}");
            for (k, m) in jet.iter().enumerate() {
                matrix_text(&mut text, &format!("A{k}"), m);
            }
            json!({ "mu": mu, "degree": degree, "jet": jet.iter().map(matrix_json).collect::<Vec<_>>() })
        }
        Command::Saturate => {
            let sat = session.saturate()?;
            let a = session.saturated_jet(&sat, degree)?;
            let again = blk_core::saturation::saturate(
                &mut blk_core::brieskorn::FixedJet { coeffs: a.coeffs().to_vec(), exact: false },
                0,
            );
            let _ = writeln!(text, "mu = {mu}\nkappa = {}", sat.kappa);
            for k in 0..a.len() {
                matrix_text(&mut text, &format!("A_sat{k}"), &a.coeff(k));
            }
            let resat_ok = again.is_ok_and(|s| s.kappa == 0 && s.h_rep.is_identity());
            if !resat_ok {
                return Err(Error::Invariant("saturated lattice is not saturated".into()));
            }
            json!({
                "mu": mu,
                "kappa": sat.kappa,
                "degree": degree,
                "A_sat": (0..a.len()).map(|k| matrix_json(&a.coeff(k))).collect::<Vec<_>>(),
            })
        }
        Command::Vfilt => {
            let sat = session.saturate()?;
            let st = session.v_structure(&sat)?;
            let dec = st.eigen.as_ref().ok_or_else(|| Error::Invariant("eigen data missing".into()))?;
            let blocks: Vec<Value> = dec
                .blocks
                .iter()
                .map(|(b, rg)| {
                    let idx: Vec<usize> = rg.clone().collect();
                    let n = dec.n_part.submatrix(&idx, &idx);
                    json!({ "beta": r(b), "dim": rg.len(), "jordan_blocks": blk_core::hodge::jordan_sizes(&n) })
                })
                .collect();
            let _ = writeln!(text, "mu = {mu}\nkappa = {}\nsigma = {}", sat.kappa, st.sigma);
            for (b, rg) in &dec.blocks {
                let _ = writeln!(text, "  C^{b}: dim {}", rg.len());
            }
            json!({ "mu": mu, "kappa": sat.kappa, "sigma": st.sigma, "blocks": blocks })
        }
        cmd => {
            let a = session.run(&opts)?;
            if a.audit.as_ref().is_some_and(|au| !au.passed()) {
                return Err(Error::Invariant("conjugation audit failed".into()));
            }
            let mut obj = serde_json::Map::new();
            obj.insert("mu".into(), json!(mu));
            let _ = writeln!(text, "mu = {mu}");
            if matches!(cmd, Command::Tmatrix | Command::All) {
                obj.insert("A0".into(), matrix_json(&a.a0));
                obj.insert("A1".into(), matrix_json(&a.a1));
                matrix_text(&mut text, "A0", &a.a0);
                matrix_text(&mut text, "A1", &a.a1);
            }
            if matches!(cmd, Command::Spectrum | Command::All) {
                obj.insert("spectrum".into(), json!(numbers(&a)));
                write_numbers(&mut text, &a);
            }
            if matches!(cmd, Command::SpectralPairs | Command::All) {
                obj.insert("spectral_pairs".into(), json!(pairs(&a)));
                write_pairs(&mut text, &a);
            }
            if matches!(cmd, Command::Monodromy | Command::All) {
                obj.insert("monodromy".into(), json!(monodromy(&a)));
                write_monodromy(&mut text, &a);
            }
            if cmd == Command::All {
                obj.insert("hodge_numbers".into(), json!(hodge_numbers(&a)));
            }
            if cli.audit {
                obj.insert("audit".into(), audit_json(&a));
                write_audit(&mut text, &a);
            }
            Value::Object(obj)
        }
    };
    Ok(Output { json, text })
}

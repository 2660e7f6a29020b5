use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use unicircle::certify::{CertifyOptions, DirectCheck};
use unicircle::complex::decimal_string;
use unicircle::criteria::{self, CriteriaOptions};
use unicircle::families::{self, ScanReport};
use unicircle::poly::detect_self_inversive;
use unicircle::roots::{all_roots, default_max_iter, unimodularity};
use unicircle::special::{self, RealValue};
use unicircle::{CriterionId, FamilyId, Polynomial};

use crate::config::RunConfig;
use crate::input::{parse_point, read_polynomial, KRange};
use crate::report::{num, opt_num, Report};
use crate::{CliError, Command, FamiliesCommand};

/// Failing rows listed individually before the rest are summarised.
const MAX_LISTED_FAILURES: usize = 20;

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum SpecialName {
    Bernoulli,
    Euler,
    Zeta,
    ZetaEven,
    Eta,
    Eta0,
    LChi4,
}

pub fn dispatch(command: Command, cfg: &RunConfig) -> Result<Report, CliError> {
    match command {
        Command::Roots { input } => roots(&read_polynomial(&input, cfg.precision_bits)?, cfg),
        Command::Criteria { input, only, .. } => {
            criteria(&read_polynomial(&input, cfg.precision_bits)?, &only, cfg)
        }
        Command::Certify { family, k, r, c } => certify(family, &k, r, c, cfg),
        Command::Families { command } => match command {
            FamiliesCommand::Build { family, k } => build(family, k, cfg),
            FamiliesCommand::Decompose { family, k, r } => decompose(family, k, r, cfg),
            FamiliesCommand::ScanLemma3 { k } => {
                scan("scan-lemma3", families::lemma3_scan(k.0, cfg.precision_bits)?)
            }
            FamiliesCommand::ScanLemma5 { k } => {
                scan("scan-lemma5", families::lemma5_scan(k.0, cfg.precision_bits)?)
            }
            FamiliesCommand::ScanLemma6 { k } => scan(
                "scan-lemma6",
                families::lemma6_scan(k.0, cfg.samples, cfg.precision_bits)?,
            ),
            FamiliesCommand::Ramanujan { k, z, terms } => ramanujan(k, &z, terms, cfg),
        },
        Command::Special { name, args } => special_values(name, &args, cfg),
        Command::VerifyFamily { family, k } => verify_family(family, &k, cfg),
    }
}

fn pair(z: &unicircle::Coefficient) -> [String; 2] {
    z.to_decimal_pair()
}

fn coefficient_rows(report: &mut Report, part: Option<&str>, p: &Polynomial) {
    for (j, c) in p.coeffs().iter().enumerate() {
        let [re, im] = pair(c);
        let mut row = vec![j.to_string(), re, im];
        if let Some(part) = part {
            row.insert(0, part.to_string());
        }
        report.row(row);
    }
}

fn roots(p: &Polynomial, cfg: &RunConfig) -> Result<Report, CliError> {
    let prec = cfg.precision_bits;
    let rep = all_roots(p, prec, default_max_iter(prec))?;
    let listed: Vec<Value> = rep
        .roots
        .iter()
        .zip(&rep.residuals)
        .map(|(z, res)| {
            let [re, im] = pair(z);
            json!({"re": re, "im": im, "modulus": z.abs_f64(), "residual": res})
        })
        .collect();
    let body = json!({
        "degree": p.degree(),
        "converged": rep.converged,
        "iterations": rep.iterations,
        "max_modulus_deviation": rep.max_modulus_deviation,
        "unimodular": rep.max_modulus_deviation <= cfg.tol(),
        "clustered": rep.clustered,
        "roots": listed,
    });
    let mut report = Report::new("roots", body, vec!["index", "re", "im", "modulus", "residual"]);
    for (i, (z, res)) in rep.roots.iter().zip(&rep.residuals).enumerate() {
        let [re, im] = pair(z);
        report.row(vec![i.to_string(), re, im, num(z.abs_f64()), num(*res)]);
    }
    if !rep.converged {
        report
            .failures
            .push(format!("check=roots: no convergence after {} iterations", rep.iterations));
    }
    Ok(report)
}

fn criteria(p: &Polynomial, only: &[String], cfg: &RunConfig) -> Result<Report, CliError> {
    let ids: Vec<CriterionId> = if only.is_empty() {
        CriterionId::ALL.to_vec()
    } else {
        only.iter()
            .map(|s| s.trim().parse::<CriterionId>())
            .collect::<Result<_, _>>()?
    };
    let form = detect_self_inversive(p, cfg.tol())?;
    let mut opts = CriteriaOptions::for_precision(cfg.precision_bits);
    opts.tol = cfg.tol();
    let verdicts = ids
        .iter()
        .map(|&id| criteria::run(&form, id, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let body = json!({
        "degree": form.degree(),
        "epsilon": pair(form.epsilon()),
        "verdicts": verdicts,
    });
    let mut report = Report::new(
        "criteria",
        body,
        vec!["criterion", "applicable", "holds", "is_iff", "margin", "note"],
    );
    for v in &verdicts {
        report.row(vec![
            v.criterion_id.to_string(),
            v.applicable.to_string(),
            v.holds.to_string(),
            v.is_iff.to_string(),
            opt_num(v.margin()),
            v.note.clone().unwrap_or_default(),
        ]);
    }
    Ok(report)
}

#[derive(Serialize)]
struct CertificateRow {
    family: FamilyId,
    k: usize,
    r: usize,
    c: f64,
    valid: bool,
    certified_h_min: f64,
    refined_h_min: f64,
    h_min_theta: f64,
    h_samples: usize,
    certified_e_max: f64,
    refined_e_max: f64,
    e_samples: usize,
    h_max_root_modulus: f64,
    h_roots_inside: bool,
    direct_check: Option<DirectCheck>,
    reconstruction_error: f64,
    diagnostics: Vec<String>,
}

fn certificate_row(
    family: FamilyId,
    k: usize,
    r: usize,
    c: f64,
    prec: u32,
    opts: &CertifyOptions,
) -> Result<CertificateRow, CliError> {
    let d = families::decompose(family, k, r, prec)?;
    let cert = d.certificate(c, opts)?;
    Ok(CertificateRow {
        family,
        k,
        r,
        c,
        valid: cert.valid,
        certified_h_min: cert.h_min_bound.certified_bound,
        refined_h_min: cert.h_min_bound.refined_extremum,
        h_min_theta: cert.h_min_bound.theta_at,
        h_samples: cert.h_min_bound.samples,
        certified_e_max: cert.e_max_bound.certified_bound,
        refined_e_max: cert.e_max_bound.refined_extremum,
        e_samples: cert.e_max_bound.samples,
        h_max_root_modulus: cert.h_max_root_modulus,
        h_roots_inside: cert.h_roots_inside,
        direct_check: cert.direct_check,
        reconstruction_error: d.reconstruction_error,
        diagnostics: cert.diagnostics,
    })
}

fn defaults_for(family: FamilyId) -> Result<(usize, f64, usize), CliError> {
    family
        .certificate_defaults()
        .ok_or_else(|| CliError::Usage(format!("family {family} has no h_r / e_r certificate")))
}

fn certify(family: FamilyId, ks: &KRange, r: Option<usize>, c: Option<f64>, cfg: &RunConfig) -> Result<Report, CliError> {
    let (r_default, c_default, _) = defaults_for(family)?;
    let r = r.unwrap_or(r_default);
    let c = c.unwrap_or(c_default);
    let opts = CertifyOptions::new(cfg.samples, cfg.tol());
    let rows = ks
        .values()
        .into_par_iter()
        .map(|k| certificate_row(family, k, r, c, cfg.precision_bits, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = Report::new(
        "certify",
        json!({ "certificates": &rows }),
        vec![
            "family",
            "k",
            "r",
            "c",
            "valid",
            "certified_h_min",
            "certified_e_max",
            "h_max_root_modulus",
            "direct_unimodular",
        ],
    );
    for row in &rows {
        report.row(vec![
            row.family.to_string(),
            row.k.to_string(),
            row.r.to_string(),
            num(row.c),
            row.valid.to_string(),
            num(row.certified_h_min),
            num(row.certified_e_max),
            num(row.h_max_root_modulus),
            row.direct_check.as_ref().map(|d| d.unimodular.to_string()).unwrap_or_default(),
        ]);
        if !row.valid {
            report.failures.push(format!(
                "family={} k={} check=certificate: {}",
                row.family,
                row.k,
                row.diagnostics.join("; ")
            ));
        }
    }
    Ok(report)
}

fn build(family: FamilyId, k: usize, cfg: &RunConfig) -> Result<Report, CliError> {
    let p = families::build(family, k, cfg.precision_bits)?;
    let form = detect_self_inversive(&p, cfg.tol()).ok();
    let body = json!({
        "family": family,
        "k": k,
        "degree": p.degree(),
        "polynomial": &p,
        "self_inversive_epsilon": form.as_ref().map(|f| pair(f.epsilon())),
    });
    let mut report = Report::new("families build", body, vec!["j", "re", "im"]);
    coefficient_rows(&mut report, None, &p);
    Ok(report)
}

fn decompose(family: FamilyId, k: usize, r: Option<usize>, cfg: &RunConfig) -> Result<Report, CliError> {
    let r = match r {
        Some(r) => r,
        None => defaults_for(family)?.0,
    };
    let d = families::decompose(family, k, r, cfg.precision_bits)?;
    let mut report = Report::new("families decompose", json!(&d), vec!["part", "j", "re", "im"]);
    coefficient_rows(&mut report, Some("h_r"), &d.h_r);
    coefficient_rows(&mut report, Some("e_r"), &d.e_r);
    Ok(report)
}

fn scan(command: &str, scan: ScanReport) -> Result<Report, CliError> {
    let min_margins: Vec<Value> = scan
        .min_margins()
        .into_iter()
        .map(|(part, margin)| json!({"part": part, "min_margin": margin}))
        .collect();
    let body = json!({
        "violations": scan.violations,
        "rows_checked": scan.rows.len(),
        "min_margins": min_margins,
        "notes": &scan.notes,
        "rows": &scan.rows,
    });
    let mut report = Report::new(
        &format!("families {command}"),
        body,
        vec!["part", "k", "j", "lhs", "rhs", "margin"],
    );
    for row in &scan.rows {
        report.row(vec![
            row.part.clone(),
            row.k.to_string(),
            row.j.to_string(),
            num(row.lhs),
            num(row.rhs),
            num(row.margin),
        ]);
    }
    for row in scan.failing().take(MAX_LISTED_FAILURES) {
        report.failures.push(format!(
            "{command} part={} k={} j={}: lhs={} rhs={}",
            row.part, row.k, row.j, row.lhs, row.rhs
        ));
    }
    if scan.violations > MAX_LISTED_FAILURES {
        report
            .failures
            .push(format!("{command}: {} more violations", scan.violations - MAX_LISTED_FAILURES));
    }
    Ok(report)
}

fn ramanujan(k: usize, z: &str, terms: Option<usize>, cfg: &RunConfig) -> Result<Report, CliError> {
    let point = parse_point(z, cfg.precision_bits)?;
    let r = families::ramanujan_residual_report(k, &point, terms, cfg.precision_bits)?;
    let body = json!({
        "k": r.k,
        "z": pair(&point),
        "residual": r.residual,
        "tail_bound": r.tail_bound,
        "terms": r.terms,
    });
    let mut report = Report::new(
        "families ramanujan",
        body,
        vec!["k", "z_re", "z_im", "terms", "residual", "tail_bound"],
    );
    let [re, im] = pair(&point);
    report.row(vec![k.to_string(), re, im, r.terms.to_string(), num(r.residual), num(r.tail_bound)]);
    if !(r.residual <= cfg.tol()) {
        report.failures.push(format!(
            "ramanujan k={k} check=residual: {:e} exceeds tolerance {:e}",
            r.residual,
            cfg.tol()
        ));
    }
    Ok(report)
}

fn parse_arg<T: std::str::FromStr>(name: &str, s: &str) -> Result<T, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid argument {s:?} for {name}")))
}

fn special_values(name: SpecialName, args: &[String], cfg: &RunConfig) -> Result<Report, CliError> {
    let prec = cfg.precision_bits;
    let label = clap::ValueEnum::to_possible_value(&name)
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let real = |v: RealValue| (decimal_string(&v.value), decimal_string(&v.error_bound));
    let mut values = Vec::new();
    for arg in args {
        let (value, error_bound) = match name {
            SpecialName::Bernoulli => (special::bernoulli(parse_arg(&label, arg)?)?.to_string(), "0".into()),
            SpecialName::Euler => (special::euler_number(parse_arg(&label, arg)?)?.to_string(), "0".into()),
            SpecialName::Zeta => real(special::zeta(parse_arg(&label, arg)?, prec)?),
            SpecialName::ZetaEven => real(special::zeta_even(parse_arg(&label, arg)?, prec)?),
            SpecialName::Eta => real(special::eta(parse_arg(&label, arg)?, prec)?),
            SpecialName::Eta0 => real(special::eta0(parse_arg(&label, arg)?, prec)?),
            SpecialName::LChi4 => real(special::l_chi4(parse_arg(&label, arg)?, prec)?),
        };
        values.push((arg.trim().to_string(), value, error_bound));
    }
    let listed: Vec<Value> = values
        .iter()
        .map(|(a, v, e)| json!({"arg": a, "value": v, "error_bound": e}))
        .collect();
    let mut report = Report::new(
        "special",
        json!({"function": label, "values": listed}),
        vec!["function", "arg", "value", "error_bound"],
    );
    for (a, v, e) in values {
        report.row(vec![label.clone(), a, v, e]);
    }
    Ok(report)
}

#[derive(Serialize)]
struct VerifyRow {
    family: FamilyId,
    k: usize,
    degree: usize,
    /// Excluded from the direct check.
    zeros_at_origin: usize,
    direct_unimodular: bool,
    max_modulus_deviation: Option<f64>,
    direct_error: Option<String>,
    /// `None` below the family's certificate threshold.
    certificate_valid: Option<bool>,
    certified_h_min: Option<f64>,
    certified_e_max: Option<f64>,
    certificate_diagnostics: Vec<String>,
}

impl VerifyRow {
    fn passed(&self) -> bool {
        self.direct_unimodular && self.certificate_valid != Some(false)
    }
}

fn verify_one(family: FamilyId, k: usize, cfg: &RunConfig, opts: &CertifyOptions) -> Result<VerifyRow, CliError> {
    let prec = cfg.precision_bits;
    let p = families::build(family, k, prec)?;
    let degree = p.degree().unwrap_or(0);
    // Q_k and Y_k vanish at the origin; the claim concerns the other zeros
    let zeros_at_origin = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let reduced = Polynomial::new(prec, p.coeffs()[zeros_at_origin..].to_vec());
    let (direct_unimodular, max_modulus_deviation, direct_error) = if reduced.degree() == Some(0) {
        (true, Some(0.0), None)
    } else {
        match unimodularity(&reduced, cfg.tol()) {
            Ok((ok, dev)) => (ok, Some(dev), None),
            Err(e) => (false, None, Some(e.to_string())),
        }
    };
    let mut row = VerifyRow {
        family,
        k,
        degree,
        zeros_at_origin,
        direct_unimodular,
        max_modulus_deviation,
        direct_error,
        certificate_valid: None,
        certified_h_min: None,
        certified_e_max: None,
        certificate_diagnostics: Vec::new(),
    };
    if let Some((r, c, k_min)) = family.certificate_defaults() {
        if k >= k_min {
            let cert = certificate_row(family, k, r, c, prec, opts)?;
            row.certificate_valid = Some(cert.valid);
            row.certified_h_min = Some(cert.certified_h_min);
            row.certified_e_max = Some(cert.certified_e_max);
            row.certificate_diagnostics = cert.diagnostics;
        }
    }
    Ok(row)
}

fn verify_family(family: FamilyId, ks: &KRange, cfg: &RunConfig) -> Result<Report, CliError> {
    let mut opts = CertifyOptions::new(cfg.samples, cfg.tol());
    // the root-finding path runs separately
    opts.direct_check_max_degree = 0;
    let rows = ks
        .values()
        .into_par_iter()
        .map(|k| verify_one(family, k, cfg, &opts))
        .collect::<Result<Vec<_>, _>>()?;

    let certified = rows.iter().filter(|r| r.certificate_valid.is_some()).count();
    let summary = json!({
        "checked": rows.len(),
        "direct_passed": rows.iter().filter(|r| r.direct_unimodular).count(),
        "certificates_checked": certified,
        "certificates_valid": rows.iter().filter(|r| r.certificate_valid == Some(true)).count(),
        "passed": rows.iter().all(VerifyRow::passed),
    });
    let mut report = Report::new(
        "verify-family",
        json!({"family": family, "k_min": ks.0.start(), "k_max": ks.0.end(), "summary": summary, "rows": &rows}),
        vec![
            "family",
            "k",
            "degree",
            "direct",
            "max_modulus_deviation",
            "certificate",
            "certified_h_min",
            "certified_e_max",
            "status",
        ],
    );
    eprintln!("{:>6} {:>6} {:>8} {:>12} {:>12}  status", "k", "degree", "direct", "max |z|-1", "certificate");
    for row in &rows {
        let cert = match row.certificate_valid {
            None => "n/a",
            Some(true) => "valid",
            Some(false) => "invalid",
        };
        let status = if row.passed() { "pass" } else { "FAIL" };
        eprintln!(
            "{:>6} {:>6} {:>8} {:>12} {:>12}  {status}",
            row.k,
            row.degree,
            row.direct_unimodular,
            row.max_modulus_deviation.map_or("-".into(), |d| format!("{d:.2e}")),
            cert
        );
        report.row(vec![
            family.to_string(),
            row.k.to_string(),
            row.degree.to_string(),
            row.direct_unimodular.to_string(),
            opt_num(row.max_modulus_deviation),
            cert.to_string(),
            opt_num(row.certified_h_min),
            opt_num(row.certified_e_max),
            status.to_string(),
        ]);
        if !row.direct_unimodular {
            let why = match (&row.direct_error, row.max_modulus_deviation) {
                (Some(e), _) => e.clone(),
                (None, Some(d)) => format!("max | |z| - 1 | = {d:e}"),
                (None, None) => String::new(),
            };
            report.failures.push(format!("family={family} k={} check=direct: {why}", row.k));
        }
        if row.certificate_valid == Some(false) {
            report.failures.push(format!(
                "family={family} k={} check=certificate: {}",
                row.k,
                row.certificate_diagnostics.join("; ")
            ));
        }
    }
    Ok(report)
}

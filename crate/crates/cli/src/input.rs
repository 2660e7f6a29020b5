use std::io::Read;
use std::ops::RangeInclusive;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;
use unicircle::complex::parse_float;
use unicircle::{Coefficient, Polynomial};

use crate::CliError;

/// An inclusive range of k values written `a`, `a..b` or `a..=b`; both
/// forms with dots include `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KRange(pub RangeInclusive<usize>);

impl KRange {
    pub fn values(&self) -> Vec<usize> {
        self.0.clone().collect()
    }
}

impl FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("{t:?} is not a non-negative integer"))
        };
        let (lo, hi) = match s.split_once("..") {
            None => {
                let k = num(s)?;
                (k, k)
            }
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(KRange(lo..=hi))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Number(f64),
    Text(String),
}

impl Scalar {
    fn parse(&self, prec: u32) -> Result<rug::Float, String> {
        match self {
            // shortest round-trip decimal, so 0.1 means the decimal 0.1
            Scalar::Number(x) => parse_float(prec, &x.to_string()),
            Scalar::Text(s) => parse_float(prec, s),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffInput {
    Real(Scalar),
    Complex([Scalar; 2]),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialInput {
    /// Accepted for round trips of emitted polynomials; the run precision
    /// decides the working precision.
    #[serde(default)]
    #[allow(dead_code)]
    precision_bits: Option<u32>,
    coeffs: Vec<CoeffInput>,
}

/// Reads `{"coeffs": [...]}` with coefficients in ascending degree order.
/// Each coefficient is a real number or a `[re, im]` pair; numbers may be
/// JSON numbers or decimal strings. `-` reads standard input.
pub fn read_polynomial(path: &Path, prec: u32) -> Result<Polynomial, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?
    };
    parse_polynomial(&text, prec).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn parse_polynomial(text: &str, prec: u32) -> Result<Polynomial, String> {
    let input: PolynomialInput = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if input.coeffs.is_empty() {
        return Err("coeffs is empty".into());
    }
    let mut coeffs = Vec::with_capacity(input.coeffs.len());
    for (j, c) in input.coeffs.iter().enumerate() {
        let z = match c {
            CoeffInput::Real(x) => Coefficient::from_real(x.parse(prec)?),
            CoeffInput::Complex([re, im]) => Coefficient::new(re.parse(prec)?, im.parse(prec)?),
        };
        if !z.is_finite() {
            return Err(format!("coefficient {j} is not finite"));
        }
        coeffs.push(z);
    }
    Ok(Polynomial::new(prec, coeffs))
}

/// `re` or `re,im`.
pub fn parse_point(s: &str, prec: u32) -> Result<Coefficient, CliError> {
    let bad = |e: String| CliError::Usage(format!("invalid point {s:?}: {e}"));
    match s.split_once(',') {
        None => Ok(Coefficient::from_real(parse_float(prec, s).map_err(bad)?)),
        Some((re, im)) => Ok(Coefficient::new(
            parse_float(prec, re).map_err(bad)?,
            parse_float(prec, im).map_err(bad)?,
        )),
    }
}

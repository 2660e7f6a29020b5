//! Complex polynomials at a fixed binary precision and the self-inversive
//! structure operations built on them.
//!
//! Coefficients are stored in ascending order of power. A polynomial keeps
//! a *formal* degree (its coefficient vector length minus one) that may
//! exceed its true degree: the reverse-conjugate `star` and the
//! `z^{d-n} h + lambda h*` constructions are defined relative to the
//! declared degree, and trimming would silently shift those offsets.
//! [`Polynomial::new`] trims, [`Polynomial::formal`] does not.

use rug::Float;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complex::{Coefficient, MIN_PRECISION};
use crate::error::{Error, Result};

/// Default structural tolerance `2^{-prec/2}`.
pub fn default_tol(prec: u32) -> f64 {
    2f64.powi(-((prec / 2) as i32))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Coefficient>,
    precision_bits: u32,
}

impl Polynomial {
    /// Builds a polynomial at `prec` bits and trims trailing zero
    /// coefficients.
    pub fn new(prec: u32, coeffs: Vec<Coefficient>) -> Self {
        let mut p = Self::formal(prec, coeffs);
        p.trim();
        p
    }

    /// Builds a polynomial whose formal degree is `coeffs.len() - 1`, even if
    /// the top coefficients vanish.
    pub fn formal(prec: u32, coeffs: Vec<Coefficient>) -> Self {
        let mut coeffs: Vec<Coefficient> = coeffs
            .into_iter()
            .map(|c| if c.prec() == prec { c } else { c.with_prec(prec) })
            .collect();
        if coeffs.is_empty() {
            coeffs.push(Coefficient::zero(prec));
        }
        Polynomial {
            coeffs,
            precision_bits: prec,
        }
    }

    pub fn from_real(prec: u32, coeffs: &[f64]) -> Self {
        Self::new(
            prec,
            coeffs.iter().map(|&c| Coefficient::from_f64(prec, c, 0.0)).collect(),
        )
    }

    pub fn from_complex(prec: u32, coeffs: &[(f64, f64)]) -> Self {
        Self::new(
            prec,
            coeffs
                .iter()
                .map(|&(re, im)| Coefficient::from_f64(prec, re, im))
                .collect(),
        )
    }

    pub fn from_floats(prec: u32, coeffs: Vec<Float>) -> Self {
        Self::formal(prec, coeffs.into_iter().map(Coefficient::from_real).collect())
    }

    pub fn zero(prec: u32) -> Self {
        Self::formal(prec, vec![])
    }

    pub fn constant(c: Coefficient) -> Self {
        let prec = c.prec();
        Self::formal(prec, vec![c])
    }

    /// `c * z^n`.
    pub fn monomial(n: usize, c: Coefficient) -> Self {
        let prec = c.prec();
        let mut coeffs = vec![Coefficient::zero(prec); n + 1];
        coeffs[n] = c;
        Self::formal(prec, coeffs)
    }

    /// The monic polynomial with the given roots.
    pub fn from_roots(prec: u32, roots: &[Coefficient]) -> Self {
        let mut p = Self::constant(Coefficient::one(prec));
        for r in roots {
            let linear = Self::formal(prec, vec![-r, Coefficient::one(prec)]);
            p = multiply(&p, &linear);
        }
        p
    }

    pub fn coeffs(&self) -> &[Coefficient] {
        &self.coeffs
    }

    /// Coefficient of `z^j`, zero beyond the formal degree.
    pub fn coeff(&self, j: usize) -> Coefficient {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| Coefficient::zero(self.precision_bits))
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn formal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// True degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn leading_coefficient(&self) -> Option<&Coefficient> {
        self.degree().map(|d| &self.coeffs[d])
    }

    fn trim(&mut self) {
        let keep = self.degree().map_or(1, |d| d + 1);
        self.coeffs.truncate(keep);
    }

    pub fn trimmed(&self) -> Self {
        let mut p = self.clone();
        p.trim();
        p
    }

    /// Pads with zeros up to formal degree `n` (never truncates).
    pub fn padded(&self, n: usize) -> Self {
        let mut p = self.clone();
        while p.coeffs.len() < n + 1 {
            p.coeffs.push(Coefficient::zero(self.precision_bits));
        }
        p
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self::formal(prec, self.coeffs.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.precision_bits.max(other.precision_bits);
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|j| &self.coeff(j).with_prec(prec) + &other.coeff(j))
            .collect();
        Self::formal(prec, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::formal(self.precision_bits, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &Coefficient) -> Self {
        let prec = self.precision_bits.max(s.prec());
        Self::formal(prec, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn scale_real(&self, s: &Float) -> Self {
        let prec = self.precision_bits.max(s.prec());
        Self::formal(prec, self.coeffs.iter().map(|c| c.scale(s)).collect())
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![Coefficient::zero(self.precision_bits); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::formal(self.precision_bits, coeffs)
    }

    /// `p(c z)`.
    pub fn compose_scale(&self, c: &Coefficient) -> Self {
        let mut power = Coefficient::one(self.precision_bits);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &power);
            power = &power * c;
        }
        Self::formal(self.precision_bits, coeffs)
    }

    /// Whether every imaginary part is within `tol` of zero, relative to the
    /// largest coefficient modulus.
    pub fn is_real(&self, tol: f64) -> bool {
        let scale = self.max_abs_coeff().to_f64().max(f64::MIN_POSITIVE);
        self.coeffs
            .iter()
            .all(|c| c.im().to_f64().abs() <= tol * scale)
    }

    pub fn max_abs_coeff(&self) -> Float {
        let mut m = Float::new(self.precision_bits);
        for c in &self.coeffs {
            let a = c.abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    /// `sum_j |A_j|`.
    pub fn l1_norm(&self) -> Float {
        let mut s = Float::new(self.precision_bits);
        for c in &self.coeffs {
            s += c.abs();
        }
        s
    }

    /// `max_j |A_j - B_j| / max_j |A_j|`, comparing as formal vectors padded
    /// with zeros.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut worst = Float::new(self.precision_bits.max(other.precision_bits));
        for j in 0..len {
            let d = (&self.coeff(j) - &other.coeff(j)).abs();
            if d > worst {
                worst = d;
            }
        }
        let scale = self.max_abs_coeff();
        if scale.is_zero() {
            return worst.to_f64();
        }
        (worst / scale).to_f64()
    }

    pub fn to_c64(&self) -> Vec<num_complex::Complex64> {
        self.coeffs.iter().map(Coefficient::to_c64).collect()
    }
}

/// Horner evaluation of `p` at `z`, carried out at `p`'s precision.
pub fn evaluate(p: &Polynomial, z: &Coefficient) -> Coefficient {
    let z = z.with_prec(p.precision_bits);
    let mut acc = Coefficient::zero(p.precision_bits);
    for a in p.coeffs.iter().rev() {
        acc = &(&acc * &z) + a;
    }
    acc
}

/// Simultaneous Horner evaluation of `p(z)` and `p'(z)`.
pub(crate) fn evaluate_with_derivative(p: &Polynomial, z: &Coefficient) -> (Coefficient, Coefficient) {
    let mut value = Coefficient::zero(p.precision_bits);
    let mut slope = Coefficient::zero(p.precision_bits);
    for a in p.coeffs.iter().rev() {
        slope = &(&slope * z) + &value;
        value = &(&value * z) + a;
    }
    (value, slope)
}

/// Coefficient `j` of the result is `(j+1) A_{j+1}`.
pub fn derivative(p: &Polynomial) -> Result<Polynomial> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let prec = p.precision_bits;
    let coeffs = p
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, a)| a.scale(&Float::with_val(prec, j as u64)))
        .collect();
    Ok(Polynomial::formal(prec, coeffs))
}

/// Coefficient convolution at the larger of the two precisions.
pub fn multiply(p: &Polynomial, q: &Polynomial) -> Polynomial {
    let prec = p.precision_bits.max(q.precision_bits);
    let mut coeffs = vec![Coefficient::zero(prec); p.coeffs.len() + q.coeffs.len() - 1];
    for (i, a) in p.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.coeffs.iter().enumerate() {
            coeffs[i + j] = &coeffs[i + j] + &(a * b);
        }
    }
    Polynomial::formal(prec, coeffs)
}

/// `h*(z) = z^n conj(h)(1/z)` relative to the formal degree `n` of `h`:
/// coefficient `j` of the result is `conj(A_{n-j})`.
pub fn star(h: &Polynomial) -> Result<Polynomial> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let coeffs = h.coeffs.iter().rev().map(Coefficient::conj).collect();
    Ok(Polynomial::formal(h.precision_bits, coeffs))
}

/// A polynomial together with its verified constant `epsilon`, so that
/// `A_j = epsilon * conj(A_{d-j})` for every `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct SelfInversiveForm {
    poly: Polynomial,
    epsilon: Coefficient,
    tol: f64,
}

impl SelfInversiveForm {
    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn epsilon(&self) -> &Coefficient {
        &self.epsilon
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn degree(&self) -> usize {
        self.poly.formal_degree()
    }

    /// Real coefficients and `epsilon = 1`.
    pub fn is_reciprocal(&self) -> bool {
        let one = Coefficient::one(self.poly.precision_bits);
        self.poly.is_real(self.tol) && (&self.epsilon - &one).abs_f64() <= self.tol
    }
}

/// Finds the unit-modulus `epsilon` with `A_j = epsilon conj(A_{d-j})`.
///
/// `epsilon` is forced by the end coefficients as `A_0 / conj(A_d)`; it is
/// then verified on every index. Both checks are relative to the largest
/// coefficient modulus, so the verdict is invariant under scaling.
pub fn detect_self_inversive(p: &Polynomial, tol: f64) -> Result<SelfInversiveForm> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let poly = p.trimmed();
    let d = poly.formal_degree();
    let a0 = &poly.coeffs[0];
    let ad = &poly.coeffs[d];
    if a0.is_zero() {
        return Err(Error::NotSelfInversive {
            index: 0,
            reason: "A_0 = 0 while A_d != 0".into(),
        });
    }
    let epsilon = a0 / &ad.conj();
    let modulus = epsilon.abs_f64();
    if unit_gap(&epsilon) > tol {
        return Err(Error::NotSelfInversive {
            index: 0,
            reason: format!("|A_0 / conj(A_d)| = {modulus} is not 1"),
        });
    }
    let scale = poly.max_abs_coeff().to_f64();
    for j in 0..=d {
        let mirrored = &epsilon * &poly.coeffs[d - j].conj();
        let gap = (&poly.coeffs[j] - &mirrored).abs_f64();
        if gap > tol * scale {
            return Err(Error::NotSelfInversive {
                index: j,
                reason: format!("|A_j - eps conj(A_(d-j))| = {gap:e}"),
            });
        }
    }
    Ok(SelfInversiveForm { poly, epsilon, tol })
}

/// `z^{d-n} h(z) + lambda h*(z)` with `n` the formal degree of `h`.
pub fn construct_theorem1(h: &Polynomial, d: usize, lambda: &Coefficient) -> Result<Polynomial> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = h.formal_degree();
    if d <= n {
        return Err(Error::DegreeConstraint { d, n });
    }
    check_unit(lambda, default_tol(h.precision_bits.min(lambda.prec())))?;
    let head = h.shift(d - n);
    let tail = star(h)?.scale(lambda);
    Ok(head.add(&tail))
}

/// Converse decomposition: `h = P'/d`, `lambda = epsilon`, so that
/// `construct_theorem1(h, d, lambda)` gives back `P`.
pub fn derivative_decomposition(form: &SelfInversiveForm) -> Result<(Polynomial, Coefficient)> {
    let d = form.degree();
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let prec = form.poly.precision_bits;
    let inv_d = Float::with_val(prec, 1) / Float::with_val(prec, d as u64);
    let h = derivative(&form.poly)?.scale_real(&inv_d);
    Ok((h, form.epsilon.clone()))
}

/// `| |c| - 1 |`, formed before rounding to double.
fn unit_gap(c: &Coefficient) -> f64 {
    let mut gap = c.abs();
    gap -= 1;
    gap.abs().to_f64()
}

pub(crate) fn check_unit(c: &Coefficient, tol: f64) -> Result<()> {
    if unit_gap(c) > tol {
        return Err(Error::NotUnimodular { modulus: c.abs_f64() });
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    precision_bits: u32,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialJson {
            precision_bits: self.precision_bits,
            coeffs: self.coeffs.iter().map(Coefficient::to_decimal_pair).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = PolynomialJson::deserialize(deserializer)?;
        if raw.precision_bits < MIN_PRECISION {
            return Err(D::Error::custom(format!(
                "precision_bits must be at least {MIN_PRECISION}"
            )));
        }
        let coeffs = raw
            .coeffs
            .iter()
            .map(|[re, im]| Coefficient::parse_decimal_pair(raw.precision_bits, re, im))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(Polynomial::formal(raw.precision_bits, coeffs))
    }
}

impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_decimal_pair().serialize(serializer)
    }
}
